"""Derived cross-section and elastic constants, and the aggregated beam model."""

import dataclasses
import logging
import math

from drillsim.errors import ParameterError
from drillsim.model.params import (
    BitRockParams, ContactParams, ElasticModuli, GeometryParams, MaterialParams,
    SectionProperties)

LOGGER = logging.getLogger(__name__)

# Element counts of the reference discretizations, keyed by column length in m.
REFERENCE_MESHES = {
    50.0: 50,
    100.0: 500,
    150.0: 750,
}
ELEMENTS_PER_METRE = 5


def annulus_properties(R_int, R_ext):
    """Compute area and moments of an annulus.

    A degenerate annulus (``R_int == R_ext``) has all properties equal to zero.

    Args:
        R_int (float):
            Internal radius in m.
        R_ext (float):
            External radius in m.

    Returns:
        SectionProperties

    Raises:
        ParameterError:
            If ``R_int`` is negative or larger than ``R_ext``.
    """
    if R_int < 0 or R_int > R_ext:
        raise ParameterError(f'Invalid annulus: R_int={R_int} and R_ext={R_ext}')

    area = math.pi * (R_ext ** 2 - R_int ** 2)
    i4 = math.pi / 4 * (R_ext ** 4 - R_int ** 4)
    i6 = math.pi / 24 * (R_ext ** 6 - R_int ** 6)
    return SectionProperties(
        A=area,
        I4=i4,
        I6=i6,
        Iyy=i4,
        Izz=i4,
        Ixx=2 * i4,
        Izzzz=3 * i6,
        Iyyzz=i6,
    )


def derive_section_properties(geom):
    """Compute the cross-section properties of the pipe.

    Args:
        geom (GeometryParams):
            Column geometry.

    Returns:
        SectionProperties

    Raises:
        ParameterError:
            If ``R_int >= R_ext``.
    """
    if geom.R_int >= geom.R_ext:
        raise ParameterError('R_int must be smaller than R_ext')

    return annulus_properties(geom.R_int, geom.R_ext)


def derive_elastic_moduli(mat):
    """Compute the shear modulus, first Lame parameter and longitudinal wave speed.

    Args:
        mat (MaterialParams):
            Material properties.

    Returns:
        ElasticModuli

    Raises:
        ParameterError:
            If ``nu`` is 0.5, where the Lame parameter is singular.
    """
    if mat.nu >= 0.5:
        raise ParameterError('nu must be smaller than 0.5')

    return ElasticModuli(
        G=mat.E / (2 * (1 + mat.nu)),
        lame_lambda=mat.E * mat.nu / ((1 + mat.nu) * (1 - 2 * mat.nu)),
        c_L=math.sqrt(mat.E / mat.rho),
    )


def default_element_count(length):
    """Number of elements used when the configuration does not set one."""
    for reference, n_elem in REFERENCE_MESHES.items():
        if math.isclose(length, reference):
            return n_elem

    return max(2, int(round(ELEMENTS_PER_METRE * length)))


@dataclasses.dataclass(frozen=True)
class BeamModel:
    """All the parameters of the drillstring plus the constants derived from them.

    Args:
        material (MaterialParams):
            Steel properties.
        geometry (GeometryParams):
            Column and borehole dimensions.
        contact (ContactParams):
            Wall friction and shock law.
        bit_rock (BitRockParams):
            Nominal bit-rock interaction law.
    """

    material: MaterialParams = dataclasses.field(default_factory=MaterialParams)
    geometry: GeometryParams = dataclasses.field(default_factory=GeometryParams)
    contact: ContactParams = dataclasses.field(default_factory=ContactParams)
    bit_rock: BitRockParams = dataclasses.field(default_factory=BitRockParams)
    section: SectionProperties = dataclasses.field(init=False)
    moduli: ElasticModuli = dataclasses.field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'section', derive_section_properties(self.geometry))
        object.__setattr__(self, 'moduli', derive_elastic_moduli(self.material))

    @property
    def gap(self):
        return self.geometry.gap

    @property
    def torsional_wave_speed(self):
        """Torsional wave speed ``sqrt(kappa_s * G / rho)`` in m/s."""
        return math.sqrt(self.material.kappa_s * self.moduli.G / self.material.rho)

    def with_bit_rock(self, bit_rock):
        """Return a copy of this model using another bit-rock law."""
        return BeamModel(self.material, self.geometry, self.contact, bit_rock)

    def to_dict(self):
        """Get a dict representation of the input parameters of this model."""
        return {
            'material': self.material.to_dict(),
            'geometry': self.geometry.to_dict(),
            'contact': self.contact.to_dict(),
            'bit_rock': self.bit_rock.to_dict(),
        }

    @classmethod
    def from_dict(cls, params):
        """Build a model from a dict of parameter blocks.

        Missing blocks and missing fields take the default values.
        """
        params = params or {}
        return cls(
            material=MaterialParams.from_dict(params.get('material')),
            geometry=GeometryParams.from_dict(params.get('geometry')),
            contact=ContactParams.from_dict(params.get('contact')),
            bit_rock=BitRockParams.from_dict(params.get('bit_rock')),
        )
