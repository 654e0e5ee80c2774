"""Configuration-dependent forces of the column.

The geometric and inertial nonlinear forces are written as weak-form terms evaluated at the
quadrature points: an array multiplying the test field values and an array multiplying the
test field x-derivatives. The same terms are integrated against the full finite element
basis or against a reduced basis.
"""

import dataclasses
import logging

import numpy as np

from drillsim.fem.contact import contact_scan
from drillsim.fem.mesh import DOFS_PER_NODE, THETA_X, THETA_Y, THETA_Z, U, V, W
from drillsim.fem.shape import NONLINEAR_GAUSS_POINTS, ElementInterpolation, gauss_rule

LOGGER = logging.getLogger(__name__)

SECTION_RADIAL_POINTS = 4
SECTION_ANGULAR_POINTS = 16


@dataclasses.dataclass(frozen=True)
class FieldState:
    """Fields of the column at a set of evaluation points.

    Every array has the six fields ``u, v, w, theta_x, theta_y, theta_z`` on its last axis.

    Args:
        values (numpy.ndarray):
            Field values.
        derivatives (numpy.ndarray):
            Field x-derivatives.
        rates (numpy.ndarray or None):
            Field time derivatives.
        accelerations (numpy.ndarray or None):
            Field second time derivatives.
    """

    values: np.ndarray
    derivatives: np.ndarray
    rates: np.ndarray = None
    accelerations: np.ndarray = None


def reconstruct_fields(interpolation, q, q_dot=None, q_ddot=None):
    """Build the ``FieldState`` at the quadrature points of ``interpolation``.

    ``interpolation`` can be an ``ElementInterpolation`` acting on full nodal vectors or a
    modal interpolation acting on reduced coordinates.
    """
    values, derivatives = interpolation.fields(q)
    rates = interpolation.fields(q_dot)[0] if q_dot is not None else None
    accelerations = interpolation.fields(q_ddot)[0] if q_ddot is not None else None
    return FieldState(values, derivatives, rates, accelerations)


@dataclasses.dataclass(frozen=True)
class GammaCoefficients:
    """Coefficients of the geometric nonlinearity at the evaluation points.

    ``gamma1`` to ``gamma3`` multiply the test rotations, ``gamma4`` to ``gamma6`` the
    x-derivatives of the test displacements and ``gamma7`` to ``gamma9`` the x-derivatives of
    the test rotations.
    """

    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma3: np.ndarray
    gamma4: np.ndarray
    gamma5: np.ndarray
    gamma6: np.ndarray
    gamma7: np.ndarray
    gamma8: np.ndarray
    gamma9: np.ndarray

    def value_terms(self):
        """Stack the coefficients of the test field values, shape ``(..., 6)``."""
        zeros = np.zeros_like(self.gamma1)
        return np.stack([zeros, zeros, zeros, self.gamma1, self.gamma2, self.gamma3], axis=-1)

    def derivative_terms(self):
        """Stack the coefficients of the test field x-derivatives, shape ``(..., 6)``."""
        return np.stack([
            self.gamma4, self.gamma5, self.gamma6, self.gamma7, self.gamma8, self.gamma9,
        ], axis=-1)


def gamma_coefficients(state, model):
    """Evaluate the nine geometric nonlinearity coefficients.

    Each coefficient is the derivative of the strain energy density with respect to one of
    ``theta_x, theta_y, theta_z, u', v', w', theta_x', theta_y', theta_z'`` minus its linear
    part, which is accounted for by the stiffness matrix.

    Args:
        state (FieldState):
            Fields at the evaluation points.
        model (BeamModel):
            Beam model.

    Returns:
        GammaCoefficients
    """
    section, material = model.section, model.material
    ea = material.E * section.A
    ei4 = material.E * section.I4
    ei6 = material.E * section.I6
    kga = material.kappa_s * model.moduli.G * section.A
    kgi4 = material.kappa_s * model.moduli.G * section.I4

    values, derivatives = state.values, state.derivatives
    theta_x, theta_y, theta_z = values[..., THETA_X], values[..., THETA_Y], values[..., THETA_Z]
    du, dv, dw = derivatives[..., U], derivatives[..., V], derivatives[..., W]
    dtx = derivatives[..., THETA_X]
    dty, dtz = derivatives[..., THETA_Y], derivatives[..., THETA_Z]
    sin, cos = np.sin(theta_x), np.cos(theta_x)
    stretch = 1.0 + du
    bending = dty ** 2 + dtz ** 2
    lateral = dv ** 2 + dw ** 2
    rotation = theta_y ** 2 + theta_z ** 2
    axial_strain = du + 0.5 * (du ** 2 + lateral)

    gamma1 = (
        ei4 * stretch * (dv * dty + dw * dtz) * sin * dtx
        + ei4 * stretch * (dv * dtz - dw * dty) * cos * dtx
        + kga * stretch * (theta_z * dv - theta_y * dw) * sin
        - kga * stretch * (theta_y * dv + theta_z * dw) * cos
    )
    gamma2 = (
        kgi4 * (theta_y * bending - dtx * dtz)
        + kga * (-dw + du * theta_y * (2 + du))
        - kga * stretch * (dv * sin - dw * cos)
    )
    gamma3 = (
        kgi4 * (theta_z * bending + dtx * dty)
        + kga * (dv + du * theta_z * (2 + du))
        - kga * stretch * (dw * sin + dv * cos)
    )
    gamma4 = (
        ea * (0.5 * stretch * lateral + 0.5 * du ** 2 * (3 + du))
        + ei4 * (sin * (dv * dtz - dw * dty) - cos * (dv * dty + dw * dtz)) * dtx
        + ei4 * stretch * (dtx ** 2 + 1.5 * bending)
        + kga * (cos * (theta_y * dw - theta_z * dv) - sin * (theta_y * dv + theta_z * dw))
        + kga * stretch * rotation
    )

    # In the shear terms of the v' and w' coefficients u' only scales the rotated part.
    gamma5 = (
        ea * axial_strain * dv
        + ei4 * (2 * dtx ** 2 + 0.5 * bending) * dv
        + ei4 * stretch * (dtz * sin - dty * cos) * dtx
        + kga * (theta_z - stretch * (theta_y * sin + theta_z * cos))
    )
    gamma6 = (
        ea * axial_strain * dw
        + ei4 * (2 * dtx ** 2 + 0.5 * bending) * dw
        + ei4 * stretch * (-dty * sin - dtz * cos) * dtx
        + kga * (stretch * (theta_y * cos - theta_z * sin) - theta_y)
    )
    gamma7 = (
        ei4 * (du ** 2 + 2 * (du + lateral)) * dtx
        + ei4 * stretch * (dv * dtz - dw * dty) * sin
        - ei4 * stretch * (dv * dty + dw * dtz) * cos
        + ei6 * (4 * dtx ** 2 + 2 * bending) * dtx
        + kgi4 * (theta_z * dty - theta_y * dtz)
    )
    gamma8 = (
        ei4 * (3 * du + 0.5 * (3 * du ** 2 + lateral)) * dty
        + ei4 * stretch * (-dw * sin - dv * cos) * dtx
        + ei6 * (2 * dtx ** 2 + 1.5 * bending) * dty
        + kgi4 * (theta_z * dtx + dty * rotation)
    )
    gamma9 = (
        ei4 * (3 * du + 0.5 * (3 * du ** 2 + lateral)) * dtz
        + ei4 * stretch * (dv * sin - dw * cos) * dtx
        + ei6 * (2 * dtx ** 2 + 1.5 * bending) * dtz
        + kgi4 * (-theta_y * dtx + dtz * rotation)
    )
    return GammaCoefficients(
        gamma1, gamma2, gamma3, gamma4, gamma5, gamma6, gamma7, gamma8, gamma9)


def geometric_terms(state, model):
    """Weak-form terms of the geometric nonlinearity force.

    Returns:
        tuple[numpy.ndarray, numpy.ndarray]:
            Terms multiplying the test field values and x-derivatives.
    """
    gammas = gamma_coefficients(state, model)
    return -gammas.value_terms(), -gammas.derivative_terms()


def inertial_terms(state, model):
    """Weak-form terms of the gyroscopic and rotary inertia coupling.

    Only the test rotations are involved; the returned array multiplies the test field
    values.
    """
    scale = 2 * model.material.rho * model.section.I4
    theta_y = state.values[..., THETA_Y]
    rate_x = state.rates[..., THETA_X]
    rate_y = state.rates[..., THETA_Y]
    rate_z = state.rates[..., THETA_Z]
    acc_x = state.accelerations[..., THETA_X]
    acc_z = state.accelerations[..., THETA_Z]

    terms = np.zeros(state.values.shape)
    terms[..., THETA_X] = -scale * (theta_y * acc_z + rate_y * rate_z)
    terms[..., THETA_Y] = scale * (theta_y * rate_z ** 2 + rate_x * rate_z)
    terms[..., THETA_Z] = -scale * (
        theta_y * acc_x + theta_y ** 2 * acc_z + rate_x * rate_y
        + 2 * theta_y * rate_y * rate_z
    )
    return terms


def force_geometric(q, interpolation, model):
    """Geometric nonlinearity force on a full nodal vector.

    Args:
        q (numpy.ndarray):
            Full nodal displacement vector.
        interpolation (ElementInterpolation):
            Quadrature-point interpolation of the mesh.
        model (BeamModel):
            Beam model.

    Returns:
        numpy.ndarray
    """
    state = reconstruct_fields(interpolation, q)
    return interpolation.assemble(*geometric_terms(state, model))


def force_inertial(q, q_dot, q_ddot, interpolation, model):
    """Nonlinear inertial force on full nodal vectors."""
    state = reconstruct_fields(interpolation, q, q_dot, q_ddot)
    return interpolation.assemble(value_terms=inertial_terms(state, model))


def section_points(R_int, R_ext, n_radial=SECTION_RADIAL_POINTS,
                   n_angular=SECTION_ANGULAR_POINTS):
    """Quadrature of the annular cross section in polar coordinates.

    Returns:
        tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]:
            Coordinates ``y`` and ``z`` of the points and their area weights.
    """
    points, weights = gauss_rule(n_radial)
    radii = R_int + (R_ext - R_int) * points
    radial_weights = weights * (R_ext - R_int) * radii
    angles = 2 * np.pi * np.arange(n_angular) / n_angular
    y = np.outer(radii, np.cos(angles)).ravel()
    z = np.outer(radii, np.sin(angles)).ravel()
    area = np.repeat(radial_weights * 2 * np.pi / n_angular, n_angular)
    return y, z, area


def section_strains(values, derivatives, y, z):
    """Green-Lagrange strains at points ``(y, z)`` of the cross sections.

    Args:
        values (numpy.ndarray):
            Field values, shape ``(..., 6)``.
        derivatives (numpy.ndarray):
            Field x-derivatives, shape ``(..., 6)``.
        y, z (numpy.ndarray):
            Section coordinates, shape ``(P,)``.

    Returns:
        tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]:
            ``epsilon_xx``, ``epsilon_xy`` and ``epsilon_xz``, each of shape ``(..., P)``.
    """
    def field(array, index):
        return array[..., index][..., None]

    theta_x = field(values, THETA_X)
    theta_y, theta_z = field(values, THETA_Y), field(values, THETA_Z)
    du, dv, dw = field(derivatives, U), field(derivatives, V), field(derivatives, W)
    dtx = field(derivatives, THETA_X)
    dty, dtz = field(derivatives, THETA_Y), field(derivatives, THETA_Z)
    sin, cos = np.sin(theta_x), np.cos(theta_x)

    eps_xx = (
        du - y * dtz + z * dty
        + du * (z * dty - y * dtz) - y * z * dty * dtz
        + dtx * ((y * dw - z * dv) * cos - (y * dv + z * dw) * sin)
        + 0.5 * (
            du ** 2 + dv ** 2 + dw ** 2 + y ** 2 * dtz ** 2 + z ** 2 * dty ** 2
            + (y ** 2 + z ** 2) * dtx ** 2
        )
    )
    eps_xy = (
        0.5 * (dv * cos + dw * sin - z * dtx)
        + 0.5 * theta_z * (y * dtz - z * dty - du - 1)
    )
    eps_xz = (
        0.5 * (dw * cos - dv * sin + y * dtx)
        + 0.5 * theta_y * (-y * dtz + z * dty + du + 1)
    )
    return eps_xx, eps_xy, eps_xz


def strain_energy(q, interpolation, model):
    """Strain energy of the column by direct quadrature of the Green-Lagrange strains.

    Args:
        q (numpy.ndarray):
            Full nodal displacement vector.
        interpolation (ElementInterpolation):
            Quadrature-point interpolation of the mesh.
        model (BeamModel):
            Beam model.

    Returns:
        float:
            Strain energy in J.
    """
    values, derivatives = interpolation.fields(q)
    y, z, area = section_points(model.geometry.R_int, model.geometry.R_ext)
    eps_xx, eps_xy, eps_xz = section_strains(values, derivatives, y, z)
    kappa_g = model.material.kappa_s * model.moduli.G
    density = 0.5 * model.material.E * eps_xx ** 2 + 2 * kappa_g * (eps_xy ** 2 + eps_xz ** 2)
    per_length = density @ area
    scale = interpolation.weights * interpolation.mesh.element_length
    return float(np.sum(per_length * scale[None, :]))


class ForceContext:
    """Everything needed to evaluate the total force on full nodal vectors.

    Args:
        system (AssembledSystem):
            Constant operators, used for the gravity load.
        n_points (int):
            Number of Gauss points per element for the nonlinear terms.
    """

    def __init__(self, system, n_points=NONLINEAR_GAUSS_POINTS):
        self.system = system
        self.mesh = system.mesh
        self.model = system.model
        self.interpolation = ElementInterpolation(self.mesh, self.model, n_points=n_points)

    def nodal(self, q):
        return np.asarray(q).reshape(self.mesh.n_nodes, DOFS_PER_NODE)


def total_force(q, q_dot, q_ddot, context, friction_sign=None):
    """Sum of inertial, geometric, wall, bit-rock and gravity forces.

    Args:
        q, q_dot, q_ddot (numpy.ndarray):
            Full nodal displacement, velocity and acceleration vectors.
        context (ForceContext):
            Mesh, model and constant operators.
        friction_sign (numpy.ndarray or None):
            Velocity signs used by the friction laws, see ``contact_scan``.

    Returns:
        tuple[numpy.ndarray, NodalEfforts]:
            Force vector and the nodal wall and bit efforts it includes.
    """
    interpolation, model = context.interpolation, context.model
    state = reconstruct_fields(interpolation, q, q_dot, q_ddot)
    value_terms, derivative_terms = geometric_terms(state, model)
    value_terms = value_terms + inertial_terms(state, model)
    force = interpolation.assemble(value_terms, derivative_terms)

    efforts = contact_scan(context.nodal(q), context.nodal(q_dot), model, friction_sign)
    force += efforts.to_vector()
    force += context.system.F_g
    return force, efforts

