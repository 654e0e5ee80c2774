"""Finite element discretization of the column, nonlinear forces and contact laws."""

from drillsim.fem.assembly import (
    AssembledSystem, assemble_constant_system, constraint_matrix, constraint_values,
    dump_matrix, rigid_body_modes)
from drillsim.fem.contact import (
    ContactState, NodalEfforts, ShockEvent, ShockLog, bit_force, bit_torque, contact_scan,
    contact_state, friction_force_axial, friction_torque, normal_force, regularization)
from drillsim.fem.forces import (
    FieldState, ForceContext, GammaCoefficients, force_geometric, force_inertial,
    gamma_coefficients, reconstruct_fields, section_strains, strain_energy, total_force)
from drillsim.fem.mesh import DOFS_PER_NODE, FIELDS, Mesh, build_mesh
from drillsim.fem.shape import ElementInterpolation, ShapeFunctionSet, gauss_rule, shear_ratio

__all__ = (
    'AssembledSystem',
    'ContactState',
    'DOFS_PER_NODE',
    'ElementInterpolation',
    'FIELDS',
    'FieldState',
    'ForceContext',
    'GammaCoefficients',
    'Mesh',
    'NodalEfforts',
    'ShapeFunctionSet',
    'ShockEvent',
    'ShockLog',
    'assemble_constant_system',
    'bit_force',
    'bit_torque',
    'build_mesh',
    'constraint_matrix',
    'constraint_values',
    'contact_scan',
    'contact_state',
    'dump_matrix',
    'force_geometric',
    'force_inertial',
    'friction_force_axial',
    'friction_torque',
    'gamma_coefficients',
    'gauss_rule',
    'normal_force',
    'reconstruct_fields',
    'regularization',
    'rigid_body_modes',
    'section_strains',
    'shear_ratio',
    'strain_energy',
    'total_force',
)
