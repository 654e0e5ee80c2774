"""Evaluation of the nonlinear forces directly in reduced coordinates."""

import logging

import numpy as np

from drillsim.fem.contact import (
    bit_force_rate, contact_scan, normal_stiffness, regularization_derivative)
from drillsim.fem.forces import geometric_terms, inertial_terms, reconstruct_fields
from drillsim.fem.mesh import DOFS_PER_NODE, THETA_X, U, V, W
from drillsim.fem.shape import NONLINEAR_GAUSS_POINTS, ElementInterpolation

LOGGER = logging.getLogger(__name__)


class ModalInterpolation:
    """Field interpolation and weak-form assembly on a reduced basis.

    The element operators are contracted once with the basis, so fields are evaluated from
    the reduced coordinates without expanding them to nodal vectors.

    Args:
        mesh (Mesh):
            Column mesh.
        model (BeamModel):
            Beam model.
        Phi (numpy.ndarray):
            Reduced basis of shape ``(n_dofs, n_red)``.
        n_points (int):
            Number of Gauss points per element.
    """

    def __init__(self, mesh, model, Phi, n_points=NONLINEAR_GAUSS_POINTS):
        element = ElementInterpolation(mesh, model, n_points=n_points)
        self.mesh = mesh
        self.n_points = n_points
        self.points, self.weights = element.points, element.weights
        self.positions = element.positions
        basis = np.asarray(Phi)[element.dof_map]
        self.values = np.einsum('gfk,ekn->egfn', element.values, basis)
        self.derivatives = np.einsum('gfk,ekn->egfn', element.derivatives, basis)
        self._scale = self.weights * mesh.element_length

    @property
    def n_red(self):
        return self.values.shape[-1]

    def fields(self, q_r):
        """Field values and x-derivatives of reduced coordinates.

        Returns:
            tuple[numpy.ndarray, numpy.ndarray]:
                Arrays of shape ``(n_elem, n_points, 6)``.
        """
        q_r = np.asarray(q_r)
        return self.values @ q_r, self.derivatives @ q_r

    def assemble(self, value_terms=None, derivative_terms=None):
        """Integrate weak-form terms against every basis vector.

        Returns:
            numpy.ndarray:
                Reduced vector of length ``n_red``.
        """
        result = np.zeros(self.n_red)
        if value_terms is not None:
            result += np.einsum('g,egfn,egf->n', self._scale, self.values, value_terms)
        if derivative_terms is not None:
            result += np.einsum('g,egfn,egf->n', self._scale, self.derivatives, derivative_terms)

        return result


class ReducedForceEvaluator:
    """Evaluate the total nonlinear force of the column in reduced coordinates.

    Args:
        reduced (ReducedSystem):
            Reduced-order model.
        model (BeamModel or None):
            Beam model used by the nonlinear laws. Defaults to the model of ``reduced``; a
            different bit-rock law can be given here without rebuilding the reduction.
        n_points (int):
            Number of Gauss points per element for the nonlinear terms.
    """

    def __init__(self, reduced, model=None, n_points=NONLINEAR_GAUSS_POINTS):
        self.reduced = reduced
        self.mesh = reduced.mesh
        self.model = model or reduced.model
        self.interpolation = ModalInterpolation(self.mesh, self.model, reduced.Phi, n_points)
        self.Phi_nodal = reduced.Phi.reshape(self.mesh.n_nodes, DOFS_PER_NODE, reduced.n_red)
        self.gravity = reduced.F_g_r
        LOGGER.debug('Reduced force evaluator with %s coordinates', reduced.n_red)

    def nodal(self, q_r):
        """Nodal values of reduced coordinates, shape ``(n_nodes, 6)``."""
        return self.Phi_nodal @ np.asarray(q_r)

    def friction_sign(self, q_dot_r):
        """Signs of the axial and angular nodal velocities, shape ``(n_nodes, 2)``."""
        return np.sign(self.nodal(q_dot_r)[:, [U, THETA_X]])

    def project_nodal(self, nodal_array):
        """Project an array of nodal efforts of shape ``(n_nodes, 6)`` on the basis."""
        return np.einsum('mfn,mf->n', self.Phi_nodal, nodal_array)

    def efforts(self, q_r, q_dot_r, friction_sign=None):
        """Wall and bit efforts of the reduced state, see ``contact_scan``."""
        return contact_scan(self.nodal(q_r), self.nodal(q_dot_r), self.model, friction_sign)

    def __call__(self, q_r, q_dot_r, q_ddot_r, friction_sign=None):
        """Reduced total force.

        Args:
            q_r, q_dot_r, q_ddot_r (numpy.ndarray):
                Reduced displacement, velocity and acceleration.
            friction_sign (numpy.ndarray or None):
                Velocity signs used by the friction laws.

        Returns:
            tuple[numpy.ndarray, NodalEfforts]
        """
        state = reconstruct_fields(self.interpolation, q_r, q_dot_r, q_ddot_r)
        value_terms, derivative_terms = geometric_terms(state, self.model)
        value_terms = value_terms + inertial_terms(state, self.model)
        force = self.interpolation.assemble(value_terms, derivative_terms)

        efforts = self.efforts(q_r, q_dot_r, friction_sign)
        force += self.project_nodal(efforts.nodal_array())
        force += self.gravity
        return force, efforts

    def tangent(self, efforts, q_dot_r, a1):
        """Approximate stiffness of the wall and bit efforts in reduced coordinates.

        Only the normal shock law and the velocity dependence of the bit-rock laws are
        linearized. ``a1`` converts velocity derivatives into displacement derivatives.

        Args:
            efforts (NodalEfforts):
                Efforts at the current iterate.
            q_dot_r (numpy.ndarray):
                Reduced velocity at the current iterate.
            a1 (float):
                Velocity coefficient of the time scheme.

        Returns:
            numpy.ndarray:
                Symmetric positive semi-definite matrix of shape ``(n_red, n_red)``.
        """
        n_red = self.reduced.n_red
        tangent = np.zeros((n_red, n_red))
        state = efforts.state
        active = np.flatnonzero(state.in_contact)
        if len(active):
            stiffness = normal_stiffness(state, self.model.contact, a1)[active]
            directions = state.direction[active]
            gradients = (
                directions[:, 0, None] * self.Phi_nodal[active, V, :]
                + directions[:, 1, None] * self.Phi_nodal[active, W, :]
            )
            tangent += gradients.T @ (stiffness[:, None] * gradients)

        bit_rock = self.model.bit_rock
        rates = self.nodal(q_dot_r)[-1]
        axial = self.Phi_nodal[-1, U, :]
        tangent += float(bit_force_rate(rates[U], bit_rock)) * a1 * np.outer(axial, axial)

        torsion = self.Phi_nodal[-1, THETA_X, :]
        torque_rate = (
            bit_rock.mu_BR * abs(efforts.bit_force) * self.model.geometry.R_bh
            * float(regularization_derivative(rates[THETA_X]))
        )
        tangent += torque_rate * a1 * np.outer(torsion, torsion)
        return tangent
