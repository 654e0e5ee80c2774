"""Physical parameters of the drillstring model.

All quantities are in SI units. Every parameter block is an immutable dataclass that
validates itself at construction time, so the rest of the package can assume valid inputs.
"""

import dataclasses
import logging
import math
import numbers

from drillsim.errors import ParameterError

LOGGER = logging.getLogger(__name__)


class _ParameterBlock:
    """Shared validation and serialization behaviour of the parameter blocks."""

    def __post_init__(self):
        violations = []
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if isinstance(value, bool) or not isinstance(value, numbers.Real):
                violations.append(f'{field.name} must be a number, got {value!r}')
            elif not math.isfinite(value):
                violations.append(f'{field.name} must be finite, got {value!r}')

        if not violations:
            violations = self._check()

        if violations:
            raise ParameterError.from_violations(type(self).__name__, violations)

    def _check(self):
        return []

    def to_dict(self):
        """Get a dict representation of this parameter block.

        Returns:
            dict:
                Mapping of field names to values.
        """
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, params):
        """Build the parameter block from a dict, using defaults for missing keys.

        Args:
            params (dict):
                Mapping of field names to values.

        Raises:
            ParameterError:
                If unknown keys are given or any value violates the block invariants.
        """
        params = dict(params or {})
        names = {field.name for field in dataclasses.fields(cls)}
        unknown = sorted(set(params) - names)
        if unknown:
            raise ParameterError.from_violations(
                cls.__name__, [f'unknown field {name!r}' for name in unknown])

        return cls(**params)

    def replace(self, **changes):
        """Return a copy of this block with some fields changed."""
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass(frozen=True)
class MaterialParams(_ParameterBlock):
    """Steel properties of the column.

    Args:
        rho (float):
            Mass density in kg/m3.
        E (float):
            Elastic modulus in Pa.
        nu (float):
            Poisson ratio.
        kappa_s (float):
            Shearing factor of the cross section.
        c (float):
            Damping constant of the mass-proportional damping.
        g (float):
            Gravitational acceleration in m/s2.
    """

    rho: float = 7900.0
    E: float = 203.0e9
    nu: float = 0.3
    kappa_s: float = 6.0 / 7.0
    c: float = 0.01
    g: float = 9.81

    def _check(self):
        violations = []
        if self.rho <= 0:
            violations.append('rho must be > 0')
        if self.E <= 0:
            violations.append('E must be > 0')
        if not 0 <= self.nu < 0.5:
            violations.append('nu must satisfy 0 <= nu < 0.5')
        if self.kappa_s <= 0:
            violations.append('kappa_s must be > 0')
        if self.c < 0:
            violations.append('c must be >= 0')
        if self.g < 0:
            violations.append('g must be >= 0')

        return violations


@dataclasses.dataclass(frozen=True)
class GeometryParams(_ParameterBlock):
    """Column and borehole dimensions.

    Args:
        L (float):
            Length of the column in m.
        R_int (float):
            Internal radius of the pipe in m.
        R_ext (float):
            External radius of the pipe in m.
        R_bh (float):
            Borehole radius in m.
    """

    L: float = 100.0
    R_int: float = 0.05
    R_ext: float = 0.08
    R_bh: float = 0.095

    def _check(self):
        violations = []
        if self.L <= 0:
            violations.append('L must be > 0')
        if self.R_int < 0:
            violations.append('R_int must be >= 0')
        if self.R_int >= self.R_ext:
            violations.append('R_int must be smaller than R_ext')
        if self.R_ext >= self.R_bh:
            violations.append('R_ext must be smaller than R_bh (gap must be > 0)')

        return violations

    @property
    def gap(self):
        """Radial clearance between the pipe and the borehole wall."""
        return self.R_bh - self.R_ext


@dataclasses.dataclass(frozen=True)
class ContactParams(_ParameterBlock):
    """Friction and shock model of the borehole wall.

    Args:
        k_FS1 (float):
            Linear spring stiffness in N/m.
        k_FS2 (float):
            Cubic spring stiffness in N/m3.
        c_FS (float):
            Impact damping in (N/m3)/(m/s).
        mu_FS (float):
            Friction coefficient.
    """

    k_FS1: float = 1.0e10
    k_FS2: float = 1.0e16
    c_FS: float = 1.0e6
    mu_FS: float = 0.25

    def _check(self):
        violations = [
            f'{name} must be >= 0'
            for name in ('k_FS1', 'k_FS2', 'c_FS')
            if getattr(self, name) < 0
        ]
        if not 0 <= self.mu_FS <= 1:
            violations.append('mu_FS must satisfy 0 <= mu_FS <= 1')

        return violations


@dataclasses.dataclass(frozen=True)
class BitRockParams(_ParameterBlock):
    """Bit-rock interaction law.

    Args:
        Gamma_BR (float):
            Limit force in N.
        alpha_BR (float):
            Rate of change of the force in 1/(m/s).
        mu_BR (float):
            Bit-rock friction coefficient.
    """

    Gamma_BR: float = 30.0e3
    alpha_BR: float = 400.0
    mu_BR: float = 0.4

    def _check(self):
        violations = []
        if self.Gamma_BR <= 0:
            violations.append('Gamma_BR must be > 0')
        if self.alpha_BR <= 0:
            violations.append('alpha_BR must be > 0')
        if not 0 <= self.mu_BR <= 1:
            violations.append('mu_BR must satisfy 0 <= mu_BR <= 1')

        return violations


@dataclasses.dataclass(frozen=True)
class OperatingPoint(_ParameterBlock):
    """Velocities imposed at the origin of the column.

    Args:
        V0 (float):
            Axial velocity in m/s.
        Omega (float):
            Angular velocity in rad/s.
    """

    V0: float = 1.0 / 180.0
    Omega: float = 2.0 * math.pi

    def _check(self):
        violations = []
        if self.V0 < 0:
            violations.append('V0 must be >= 0')
        if self.Omega < 0:
            violations.append('Omega must be >= 0')

        return violations


@dataclasses.dataclass(frozen=True)
class SectionProperties:
    """Area and moments of the annular cross section."""

    A: float
    I4: float
    I6: float
    Iyy: float
    Izz: float
    Ixx: float
    Izzzz: float
    Iyyzz: float

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class ElasticModuli:
    """Derived elastic constants.

    Args:
        G (float):
            Shear modulus in Pa.
        lame_lambda (float):
            First Lame parameter in Pa.
        c_L (float):
            Longitudinal wave speed in m/s.
    """

    G: float
    lame_lambda: float
    c_L: float

    def to_dict(self):
        return dataclasses.asdict(self)
