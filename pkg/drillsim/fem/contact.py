"""Friction and shock between the column and the borehole wall, and bit-rock interaction.

Wall efforts are concentrated on the mesh nodes. A node touches the wall when its lateral
displacement exceeds the radial gap; the indentation then produces a normal force, an axial
friction force and a friction torque.
"""

import dataclasses
import logging

import numpy as np
import pandas as pd

from drillsim.fem.mesh import DOFS_PER_NODE, THETA_X, U, V, W

LOGGER = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ContactState:
    """Per-node contact kinematics.

    Args:
        r (numpy.ndarray):
            Lateral displacement ``sqrt(v^2 + w^2)`` in m.
        delta (numpy.ndarray):
            Indentation ``r - gap`` in m.
        delta_dot (numpy.ndarray):
            Indentation rate in m/s.
        direction (numpy.ndarray):
            Array of shape ``(n_nodes, 2)`` with the unit lateral direction ``(v, w) / r``,
            zero where ``r`` is zero.
    """

    r: np.ndarray
    delta: np.ndarray
    delta_dot: np.ndarray
    direction: np.ndarray

    @property
    def in_contact(self):
        return self.delta > 0

    @property
    def n_active(self):
        return int(np.count_nonzero(self.in_contact))


def contact_state(v, w, v_dot, w_dot, gap):
    """Compute the contact kinematics of every node.

    Args:
        v, w (numpy.ndarray):
            Nodal lateral displacements in m.
        v_dot, w_dot (numpy.ndarray):
            Nodal lateral velocities in m/s.
        gap (float):
            Radial clearance in m.

    Returns:
        ContactState
    """
    v, w = np.atleast_1d(np.asarray(v, dtype=float)), np.atleast_1d(np.asarray(w, dtype=float))
    r = np.hypot(v, w)
    safe_r = np.where(r > 0, r, 1.0)
    direction = np.where((r > 0)[:, None], np.stack([v, w], axis=-1) / safe_r[:, None], 0.0)
    delta_dot = direction[:, 0] * v_dot + direction[:, 1] * w_dot
    return ContactState(r=r, delta=r - gap, delta_dot=delta_dot, direction=direction)


def normal_force(delta, delta_dot, contact):
    """Normal shock force of the wall, ``-k1 d - k2 d^3 - c |d|^3 d_dot`` where ``d > 0``.

    Args:
        delta (float or numpy.ndarray):
            Indentation in m.
        delta_dot (float or numpy.ndarray):
            Indentation rate in m/s.
        contact (ContactParams):
            Shock law constants.

    Returns:
        float or numpy.ndarray:
            Normal force in N, zero where there is no indentation.
    """
    delta = np.asarray(delta, dtype=float)
    force = (
        -contact.k_FS1 * delta
        - contact.k_FS2 * delta ** 3
        - contact.c_FS * np.abs(delta) ** 3 * delta_dot
    )
    return np.where(delta > 0, force, 0.0)


def friction_force_axial(normal, u_dot, contact):
    """Axial friction force ``-mu |F_n| sgn(u_dot)``, with ``sgn(0) = 0``."""
    return -contact.mu_FS * np.abs(normal) * np.sign(u_dot)


def friction_torque(normal, theta_x_dot, R_bh, contact):
    """Friction torque ``-mu |F_n| R_bh sgn(theta_x_dot)``, with ``sgn(0) = 0``."""
    return -contact.mu_FS * np.abs(normal) * R_bh * np.sign(theta_x_dot)


def bit_force(u_dot_bit, bit_rock):
    """Bit-rock axial force.

    Args:
        u_dot_bit (float or numpy.ndarray):
            Axial velocity of the bit in m/s.
        bit_rock (BitRockParams):
            Interaction law.

    Returns:
        float or numpy.ndarray:
            ``Gamma (exp(-alpha u_dot) - 1)`` for positive velocities, zero otherwise.
    """
    u_dot_bit = np.asarray(u_dot_bit, dtype=float)
    positive = np.maximum(u_dot_bit, 0.0)
    return np.where(
        u_dot_bit > 0, bit_rock.Gamma_BR * np.expm1(-bit_rock.alpha_BR * positive), 0.0)


def regularization(omega):
    """Smooth sign function ``tanh(w) + 2 w / (1 + w^2)``."""
    omega = np.asarray(omega, dtype=float)
    return np.tanh(omega) + 2 * omega / (1 + omega ** 2)


def regularization_derivative(omega):
    omega = np.asarray(omega, dtype=float)
    return 1 / np.cosh(omega) ** 2 + 2 * (1 - omega ** 2) / (1 + omega ** 2) ** 2


def bit_torque(omega_bit, force, R_bh, bit_rock):
    """Bit-rock reaction torque ``-mu |F_BR| R_bh xi(omega)``.

    The torque opposes the rotation of the bit.
    """
    return -bit_rock.mu_BR * np.abs(force) * R_bh * regularization(omega_bit)


def bit_force_rate(u_dot_bit, bit_rock):
    """Magnitude of the derivative of ``bit_force`` with respect to the bit velocity."""
    u_dot_bit = np.asarray(u_dot_bit, dtype=float)
    positive = np.maximum(u_dot_bit, 0.0)
    return np.where(
        u_dot_bit > 0,
        bit_rock.Gamma_BR * bit_rock.alpha_BR * np.exp(-bit_rock.alpha_BR * positive),
        0.0,
    )


def normal_stiffness(state, contact, a1):
    """Tangent stiffness of the normal shock law at every node.

    ``a1`` converts the indentation rate into a displacement derivative, as in the
    effective stiffness of an implicit scheme. Nodes without contact get zero.
    """
    delta = np.maximum(state.delta, 0.0)
    stiffness = (
        contact.k_FS1 + 3 * contact.k_FS2 * delta ** 2 + contact.c_FS * delta ** 3 * a1)
    return np.where(state.in_contact, stiffness, 0.0)


@dataclasses.dataclass(frozen=True)
class NodalEfforts:
    """Wall and bit efforts acting on the nodes.

    Args:
        state (ContactState):
            Contact kinematics the efforts were computed from.
        normal (numpy.ndarray):
            Normal force per node in N.
        axial (numpy.ndarray):
            Axial friction force per node in N.
        torque (numpy.ndarray):
            Friction torque per node in N m.
        bit_force (float):
            Bit-rock force in N.
        bit_torque (float):
            Bit-rock torque in N m.
    """

    state: ContactState
    normal: np.ndarray
    axial: np.ndarray
    torque: np.ndarray
    bit_force: float
    bit_torque: float

    def nodal_components(self):
        """Wall efforts per node on the ``u, v, w, theta_x`` DOFs, shape ``(n_nodes, 4)``."""
        lateral = self.normal[:, None] * self.state.direction
        return np.column_stack([self.axial, lateral[:, 0], lateral[:, 1], self.torque])

    def nodal_array(self):
        """Wall and bit efforts on every nodal DOF, shape ``(n_nodes, 6)``."""
        efforts = np.zeros((len(self.normal), DOFS_PER_NODE))
        efforts[:, [U, V, W, THETA_X]] = self.nodal_components()
        efforts[-1, U] += self.bit_force
        efforts[-1, THETA_X] += self.bit_torque
        return efforts

    def to_vector(self):
        """Efforts as a full nodal vector."""
        return self.nodal_array().ravel()


def contact_scan(nodal, nodal_rates, model, friction_sign=None):
    """Evaluate wall and bit efforts from the nodal kinematics.

    Args:
        nodal (numpy.ndarray):
            Array of shape ``(n_nodes, 6)`` with the nodal displacements.
        nodal_rates (numpy.ndarray):
            Array of shape ``(n_nodes, 6)`` with the nodal velocities.
        model (BeamModel):
            Beam model.
        friction_sign (numpy.ndarray or None):
            Array of shape ``(n_nodes, 2)`` with the velocity signs used by the axial
            friction and the friction torque. If ``None``, the signs of ``nodal_rates``
            are used.

    Returns:
        NodalEfforts
    """
    state = contact_state(
        nodal[:, V], nodal[:, W], nodal_rates[:, V], nodal_rates[:, W], model.gap)
    normal = normal_force(state.delta, state.delta_dot, model.contact)
    if friction_sign is None:
        friction_sign = np.sign(nodal_rates[:, [U, THETA_X]])

    axial = friction_force_axial(normal, friction_sign[:, 0], model.contact)
    torque = friction_torque(normal, friction_sign[:, 1], model.geometry.R_bh, model.contact)

    force = float(bit_force(nodal_rates[-1, U], model.bit_rock))
    torque_bit = float(bit_torque(
        nodal_rates[-1, THETA_X], force, model.geometry.R_bh, model.bit_rock))
    return NodalEfforts(state, normal, axial, torque, force, torque_bit)


@dataclasses.dataclass(frozen=True)
class ShockEvent:
    """One contact episode of a node with the borehole wall."""

    node: int
    x: float
    entry: float
    exit: float


class ShockLog:
    """Accumulate contact episodes from successive contact flags.

    Args:
        positions (numpy.ndarray):
            Node coordinates in m.
    """

    COLUMNS = ('node', 'x', 't_entry', 't_exit')

    def __init__(self, positions):
        self.positions = np.asarray(positions, dtype=float)
        self.events = []
        self._open = {}
        self._previous = np.zeros(len(self.positions), dtype=bool)

    def update(self, t, in_contact):
        """Record the contact flags observed at time ``t``."""
        in_contact = np.asarray(in_contact, dtype=bool)
        for node in np.flatnonzero(in_contact & ~self._previous):
            self._open[int(node)] = t

        for node in np.flatnonzero(~in_contact & self._previous):
            self._close(int(node), t)

        self._previous = in_contact.copy()

    def _close(self, node, t):
        entry = self._open.pop(node)
        if t > entry:
            self.events.append(ShockEvent(node, float(self.positions[node]), entry, t))

    def close(self, t):
        """Close every open episode at the final time ``t``."""
        for node in sorted(self._open):
            self._close(node, t)

        self._previous[:] = False

    @property
    def n_open(self):
        return len(self._open)

    def counts_per_node(self):
        """Number of episodes of every node."""
        counts = np.zeros(len(self.positions), dtype=int)
        for event in self.events:
            counts[event.node] += 1

        return counts

    def to_frame(self):
        """Get the episodes as a ``pandas.DataFrame`` sorted by entry time and node."""
        rows = [
            (event.node, event.x, event.entry, event.exit)
            for event in self.events
        ]
        frame = pd.DataFrame(rows, columns=self.COLUMNS)
        return frame.sort_values(['t_entry', 'node'], kind='mergesort').reset_index(drop=True)
