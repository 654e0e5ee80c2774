"""Parameters of the drillstring model."""

from drillsim.model.params import (
    BitRockParams, ContactParams, ElasticModuli, GeometryParams, MaterialParams, OperatingPoint,
    SectionProperties)
from drillsim.model.properties import (
    BeamModel, annulus_properties, default_element_count, derive_elastic_moduli,
    derive_section_properties)

__all__ = (
    'BeamModel',
    'BitRockParams',
    'ContactParams',
    'ElasticModuli',
    'GeometryParams',
    'MaterialParams',
    'OperatingPoint',
    'SectionProperties',
    'annulus_properties',
    'default_element_count',
    'derive_elastic_moduli',
    'derive_section_properties',
)
