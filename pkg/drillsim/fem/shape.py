"""Shape functions, quadrature rules and element interpolation operators.

The transverse fields use an interdependent interpolation: the displacement and the rotation
of each bending plane are interpolated from the same cubic, with coefficients that depend on
the ratio between bending and shear stiffness of the element. This keeps the element free of
shear locking when it is slender.

Local coordinate ``xi`` runs on ``[0, 1]`` along the element. Element DOFs are numbered
``0..5`` for the first node and ``6..11`` for the second, each block ordered
``u, v, w, theta_x, theta_y, theta_z``.
"""

import dataclasses
import logging

import numpy as np

from drillsim.fem.mesh import DOFS_PER_NODE, THETA_X, THETA_Y, THETA_Z, U, V, W

LOGGER = logging.getLogger(__name__)

LINEAR_GAUSS_POINTS = 4
NONLINEAR_GAUSS_POINTS = 6


def gauss_rule(n_points):
    """Gauss-Legendre rule mapped to ``[0, 1]``.

    Args:
        n_points (int):
            Number of integration points.

    Returns:
        tuple[numpy.ndarray, numpy.ndarray]:
            Points and weights. The weights add up to 1.
    """
    points, weights = np.polynomial.legendre.leggauss(n_points)
    return (points + 1.0) / 2.0, weights / 2.0


def shear_ratio(section, moduli, material, element_length):
    """Ratio between the bending and shear stiffness of an element.

    Computed as ``12 E I4 / (kappa_s G A le^2)``.
    """
    return 12.0 * material.E * section.I4 / (
        material.kappa_s * moduli.G * section.A * element_length ** 2)


@dataclasses.dataclass(frozen=True)
class ShapeFunctionSet:
    """Shape functions of one element.

    Args:
        element_length (float):
            Element length in m.
        phi (float):
            Shear ratio of the element, see ``shear_ratio``.
    """

    element_length: float
    phi: float

    def axial(self, xi):
        """Affine functions used for ``u`` and ``theta_x`` and their x-derivatives.

        Returns:
            tuple[numpy.ndarray, numpy.ndarray]:
                Arrays of shape ``(2, len(xi))``.
        """
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        values = np.stack([1.0 - xi, xi])
        derivatives = np.stack([
            -np.ones_like(xi) / self.element_length,
            np.ones_like(xi) / self.element_length,
        ])
        return values, derivatives

    def displacement(self, xi):
        """Cubic family for the transverse displacements and its x-derivatives.

        The four functions are associated with the first node displacement, first node
        rotation, second node displacement and second node rotation of the bending plane.

        Returns:
            tuple[numpy.ndarray, numpy.ndarray]:
                Arrays of shape ``(4, len(xi))``.
        """
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        le, phi = self.element_length, self.phi
        d = 1.0 + phi
        xi2, xi3 = xi ** 2, xi ** 3

        first = (2 * xi3 - 3 * xi2 - phi * xi + d) / d
        values = np.stack([
            first,
            le * (xi3 - (2 + phi / 2) * xi2 + (1 + phi / 2) * xi) / d,
            1.0 - first,
            le * (xi3 - (1 - phi / 2) * xi2 - (phi / 2) * xi) / d,
        ])

        first_derivative = (6 * xi2 - 6 * xi - phi) / (d * le)
        derivatives = np.stack([
            first_derivative,
            (3 * xi2 - (4 + phi) * xi + 1 + phi / 2) / d,
            -first_derivative,
            (3 * xi2 - (2 - phi) * xi - phi / 2) / d,
        ])
        return values, derivatives

    def rotation(self, xi):
        """Quadratic family for the bending rotations and its x-derivatives.

        Returns:
            tuple[numpy.ndarray, numpy.ndarray]:
                Arrays of shape ``(4, len(xi))``.
        """
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        le, phi = self.element_length, self.phi
        d = 1.0 + phi
        xi2 = xi ** 2

        first = 6 * (xi2 - xi) / (d * le)
        values = np.stack([
            first,
            (3 * xi2 - (4 + phi) * xi + d) / d,
            -first,
            (3 * xi2 - (2 - phi) * xi) / d,
        ])

        first_derivative = 6 * (2 * xi - 1) / (d * le ** 2)
        derivatives = np.stack([
            first_derivative,
            (6 * xi - (4 + phi)) / (d * le),
            -first_derivative,
            (6 * xi - (2 - phi)) / (d * le),
        ])
        return values, derivatives

    def operators(self, xi):
        """Interpolation matrices of the six fields at the local coordinates ``xi``.

        Returns:
            tuple[numpy.ndarray, numpy.ndarray]:
                Values and x-derivatives, both of shape ``(len(xi), 6, 12)``, such that
                ``values[g] @ q_e`` gives ``(u, v, w, theta_x, theta_y, theta_z)`` at ``xi[g]``.
        """
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        result = []
        for axial, displacement, rotation in zip(
                self.axial(xi), self.displacement(xi), self.rotation(xi)):
            matrix = np.zeros((len(xi), DOFS_PER_NODE, 2 * DOFS_PER_NODE))
            for node in range(2):
                offset = DOFS_PER_NODE * node
                matrix[:, U, offset + U] = axial[node]
                matrix[:, THETA_X, offset + THETA_X] = axial[node]

                # v and theta_z bend in the x-y plane.
                matrix[:, V, offset + V] = displacement[2 * node]
                matrix[:, V, offset + THETA_Z] = displacement[2 * node + 1]
                matrix[:, THETA_Z, offset + V] = rotation[2 * node]
                matrix[:, THETA_Z, offset + THETA_Z] = rotation[2 * node + 1]

                # w and theta_y bend in the x-z plane, where theta_y ~ -w'.
                matrix[:, W, offset + W] = displacement[2 * node]
                matrix[:, W, offset + THETA_Y] = -displacement[2 * node + 1]
                matrix[:, THETA_Y, offset + W] = -rotation[2 * node]
                matrix[:, THETA_Y, offset + THETA_Y] = rotation[2 * node + 1]

            result.append(matrix)

        return tuple(result)


class ElementInterpolation:
    """Field interpolation and weak-form assembly at the quadrature points of a mesh.

    Every element shares the same operators because the mesh is uniform and the section
    constant along the column.

    Args:
        mesh (Mesh):
            Column mesh.
        model (BeamModel):
            Beam model, used for the shear ratio of the elements.
        n_points (int):
            Number of Gauss points per element.
    """

    def __init__(self, mesh, model, n_points=NONLINEAR_GAUSS_POINTS):
        self.mesh = mesh
        self.n_points = n_points
        self.points, self.weights = gauss_rule(n_points)
        phi = shear_ratio(model.section, model.moduli, model.material, mesh.element_length)
        LOGGER.debug('Element length %.6g m, shear ratio %.6g', mesh.element_length, phi)
        self.shape = ShapeFunctionSet(mesh.element_length, phi)
        self.values, self.derivatives = self.shape.operators(self.points)
        self.dof_map = mesh.dof_map

    @property
    def positions(self):
        """Array of shape ``(n_elem, n_points)`` with the x coordinate of every point."""
        starts = self.mesh.node_coords[:-1]
        return starts[:, None] + self.points[None, :] * self.mesh.element_length

    def fields(self, q):
        """Interpolate a full state vector.

        Args:
            q (numpy.ndarray):
                Full nodal vector of length ``n_dofs``.

        Returns:
            tuple[numpy.ndarray, numpy.ndarray]:
                Field values and x-derivatives, both of shape ``(n_elem, n_points, 6)``.
        """
        q_elements = np.asarray(q)[self.dof_map]
        values = np.einsum('gfk,ek->egf', self.values, q_elements)
        derivatives = np.einsum('gfk,ek->egf', self.derivatives, q_elements)
        return values, derivatives

    def assemble(self, value_terms=None, derivative_terms=None):
        """Integrate weak-form terms against every test function.

        The returned vector entry ``i`` is the integral over the column of
        ``value_terms . psi_i + derivative_terms . psi_i'``.

        Args:
            value_terms (numpy.ndarray or None):
                Array of shape ``(n_elem, n_points, 6)`` multiplying the test field values.
            derivative_terms (numpy.ndarray or None):
                Array of shape ``(n_elem, n_points, 6)`` multiplying the test field
                x-derivatives.

        Returns:
            numpy.ndarray:
                Global vector of length ``n_dofs``.
        """
        element_vectors = np.zeros(self.dof_map.shape)
        scale = self.weights * self.mesh.element_length
        if value_terms is not None:
            element_vectors += np.einsum('g,gfk,egf->ek', scale, self.values, value_terms)
        if derivative_terms is not None:
            element_vectors += np.einsum(
                'g,gfk,egf->ek', scale, self.derivatives, derivative_terms)

        return np.bincount(
            self.dof_map.ravel(), weights=element_vectors.ravel(), minlength=self.mesh.n_dofs)
