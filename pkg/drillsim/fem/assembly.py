"""Assembly of the constant operators of the free-free column."""

import dataclasses
import logging

import numpy as np
import pandas as pd
import scipy.sparse as sp

from drillsim.fem.mesh import DOFS_PER_NODE, THETA_X, THETA_Y, THETA_Z, U, V, W
from drillsim.fem.shape import LINEAR_GAUSS_POINTS, ElementInterpolation

LOGGER = logging.getLogger(__name__)

N_CONSTRAINTS = 8


def element_mass(interpolation, model):
    """Consistent mass matrix of one element, shape ``(12, 12)``."""
    rho = model.material.rho
    section = model.section
    density = np.array([
        rho * section.A,
        rho * section.A,
        rho * section.A,
        2 * rho * section.I4,
        rho * section.I4,
        rho * section.I4,
    ])
    scale = interpolation.weights * interpolation.mesh.element_length
    return np.einsum(
        'g,gfi,f,gfj->ij', scale, interpolation.values, density, interpolation.values)


def element_stiffness(interpolation, model):
    """Stiffness matrix of one element, shape ``(12, 12)``.

    Includes axial, torsional, bending and transverse shear energies.
    """
    material, section, moduli = model.material, model.section, model.moduli
    kappa_g = material.kappa_s * moduli.G
    rigidity = np.array([
        material.E * section.A,
        0.0,
        0.0,
        2 * kappa_g * section.I4,
        material.E * section.I4,
        material.E * section.I4,
    ])
    values, derivatives = interpolation.values, interpolation.derivatives
    shear_z = values[:, THETA_Z, :] - derivatives[:, V, :]
    shear_y = values[:, THETA_Y, :] + derivatives[:, W, :]

    scale = interpolation.weights * interpolation.mesh.element_length
    stiffness = np.einsum('g,gfi,f,gfj->ij', scale, derivatives, rigidity, derivatives)
    stiffness += kappa_g * section.A * (
        np.einsum('g,gi,gj->ij', scale, shear_z, shear_z)
        + np.einsum('g,gi,gj->ij', scale, shear_y, shear_y)
    )
    return stiffness


def assemble_matrix(mesh, element_matrix):
    """Scatter the same element matrix on every element of the mesh.

    Args:
        mesh (Mesh):
            Column mesh.
        element_matrix (numpy.ndarray):
            Matrix of shape ``(12, 12)``.

    Returns:
        scipy.sparse.csr_matrix
    """
    dof_map = mesh.dof_map
    rows = np.repeat(dof_map, dof_map.shape[1], axis=1).ravel()
    cols = np.tile(dof_map, (1, dof_map.shape[1])).ravel()
    data = np.tile(element_matrix.ravel(), mesh.n_elem)
    shape = (mesh.n_dofs, mesh.n_dofs)
    return sp.coo_matrix((data, (rows, cols)), shape=shape).tocsr()


def gravity_force(interpolation, model):
    """Gravity load vector, acting along ``-z``."""
    material = model.material
    value_terms = np.zeros((interpolation.mesh.n_elem, interpolation.n_points, DOFS_PER_NODE))
    value_terms[..., W] = -material.rho * model.section.A * material.g
    return interpolation.assemble(value_terms=value_terms)


def constraint_matrix(mesh):
    """Boundary constraint matrix of shape ``(8, n_dofs)``.

    Rows 0 to 5 pin the six DOFs of the first node; rows 6 and 7 pin ``v`` and ``w`` at the
    last node.
    """
    matrix = np.zeros((N_CONSTRAINTS, mesh.n_dofs))
    for row in range(DOFS_PER_NODE):
        matrix[row, row] = 1.0

    matrix[6, mesh.dof(-1, V)] = 1.0
    matrix[7, mesh.dof(-1, W)] = 1.0
    return matrix


def constraint_values(t, op_point):
    """Values imposed by the boundary constraints at time ``t``.

    Args:
        t (float):
            Time in s.
        op_point (OperatingPoint):
            Imposed axial and angular velocities.

    Returns:
        numpy.ndarray:
            Vector of length 8 with ``V0 t`` on the axial entry and ``Omega t`` on the
            rotation entry.
    """
    values = np.zeros(N_CONSTRAINTS)
    values[U] = op_point.V0 * t
    values[THETA_X] = op_point.Omega * t
    return values


def rigid_body_modes(mesh):
    """Rigid-body motions of the free-free column.

    Returns:
        numpy.ndarray:
            Array of shape ``(n_dofs, 6)`` with columns: axial translation, axial rotation,
            translation along y, translation along z, rotation about z and rotation about y.
            The rotations are taken about the middle of the column.
    """
    x = mesh.node_coords - mesh.length / 2.0
    modes = np.zeros((mesh.n_dofs, 6))
    modes[mesh.field_dofs(U), 0] = 1.0
    modes[mesh.field_dofs(THETA_X), 1] = 1.0
    modes[mesh.field_dofs(V), 2] = 1.0
    modes[mesh.field_dofs(W), 3] = 1.0
    modes[mesh.field_dofs(V), 4] = x
    modes[mesh.field_dofs(THETA_Z), 4] = 1.0
    modes[mesh.field_dofs(W), 5] = -x
    modes[mesh.field_dofs(THETA_Y), 5] = 1.0
    return modes


@dataclasses.dataclass(frozen=True)
class AssembledSystem:
    """Constant operators of the discretized column.

    Args:
        mesh (Mesh):
            Column mesh.
        model (BeamModel):
            Beam model the operators were built from.
        M (scipy.sparse.csr_matrix):
            Mass matrix.
        C (scipy.sparse.csr_matrix):
            Damping matrix.
        K (scipy.sparse.csr_matrix):
            Stiffness matrix.
        F_g (numpy.ndarray):
            Gravity load vector.
        B_full (numpy.ndarray):
            Boundary constraint matrix.
    """

    mesh: object
    model: object
    M: sp.csr_matrix
    C: sp.csr_matrix
    K: sp.csr_matrix
    F_g: np.ndarray
    B_full: np.ndarray

    @property
    def n_dofs(self):
        return self.mesh.n_dofs

    def constraint_values(self, t, op_point):
        return constraint_values(t, op_point)


def assemble_constant_system(mesh, model):
    """Assemble mass, damping, stiffness, gravity and constraint operators.

    The operators describe the free-free column; the boundary conditions enter only through
    ``B_full``.

    Args:
        mesh (Mesh):
            Column mesh.
        model (BeamModel):
            Beam model.

    Returns:
        AssembledSystem
    """
    interpolation = ElementInterpolation(mesh, model, n_points=LINEAR_GAUSS_POINTS)
    mass = assemble_matrix(mesh, element_mass(interpolation, model))
    stiffness = assemble_matrix(mesh, element_stiffness(interpolation, model))
    damping = (model.material.c * mass).tocsr()

    system = AssembledSystem(
        mesh=mesh,
        model=model,
        M=mass,
        C=damping,
        K=stiffness,
        F_g=gravity_force(interpolation, model),
        B_full=constraint_matrix(mesh),
    )
    LOGGER.info('Assembled constant operators with %s DOFs', mesh.n_dofs)
    return system


def dump_matrix(path, matrix):
    """Write a matrix as ``i j value`` triplets with 0-based indices.

    Args:
        path (str or pathlib.Path):
            Output file.
        matrix (scipy.sparse.spmatrix or numpy.ndarray):
            Matrix to export.
    """
    triplets = sp.coo_matrix(matrix)
    table = pd.DataFrame({'i': triplets.row, 'j': triplets.col, 'value': triplets.data})
    table = table.sort_values(['i', 'j'], kind='mergesort')
    table.to_csv(path, sep=' ', header=False, index=False, float_format='%.17e')
