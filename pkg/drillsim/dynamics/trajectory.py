"""Time histories of the reduced state."""

import dataclasses
import logging

import numpy as np
import pandas as pd

from drillsim.fem.mesh import FIELDS, THETA_X, U, V, W

LOGGER = logging.getLogger(__name__)


@dataclasses.dataclass
class IntegrationStats:
    """Counters of one integration run."""

    accepted: int = 0
    rejected: int = 0
    refinements: int = 0
    iterations: int = 0
    max_residual: float = 0.0

    def to_dict(self):
        return dataclasses.asdict(self)


class Trajectory:
    """Reduced state, multipliers and contact counts on the output grid.

    Args:
        reduced (ReducedSystem):
            Reduced-order model the coordinates refer to.
        times (numpy.ndarray):
            Output times in s.
        q, q_dot, q_ddot (numpy.ndarray):
            Reduced histories, shape ``(n_times, n_red)``.
        lam (numpy.ndarray):
            Multiplier history, shape ``(n_times, 8)``.
        n_contact (numpy.ndarray):
            Number of nodes touching the wall at every output time.
        shocks (ShockLog):
            Contact episodes of the run.
        stats (IntegrationStats):
            Counters of the run.
    """

    def __init__(self, reduced, times, q, q_dot, q_ddot, lam, n_contact, shocks, stats=None):
        self.reduced = reduced
        self.times = np.asarray(times, dtype=float)
        self.q = np.asarray(q)
        self.q_dot = np.asarray(q_dot)
        self.q_ddot = np.asarray(q_ddot)
        self.lam = np.asarray(lam)
        self.n_contact = np.asarray(n_contact, dtype=int)
        self.shocks = shocks
        self.stats = stats or IntegrationStats()
        self._phi_nodal = reduced.Phi.reshape(reduced.mesh.n_nodes, len(FIELDS), reduced.n_red)

    def __len__(self):
        return len(self.times)

    @property
    def mesh(self):
        return self.reduced.mesh

    def _history(self, coordinates, field, node):
        if isinstance(field, str):
            field = FIELDS.index(field)

        return coordinates @ self._phi_nodal[node, field]

    def displacement(self, field, node):
        """History of one nodal displacement or rotation."""
        return self._history(self.q, field, node)

    def velocity(self, field, node):
        """History of one nodal velocity."""
        return self._history(self.q_dot, field, node)

    def acceleration(self, field, node):
        """History of one nodal acceleration."""
        return self._history(self.q_ddot, field, node)

    def nearest_node(self, x):
        """Index of the node closest to the abscissa ``x``."""
        return int(np.argmin(np.abs(self.mesh.node_coords - x)))

    def full_state(self, index):
        """Full nodal displacement vector at output ``index``."""
        return self.reduced.expand(self.q[index])

    def constraint_residual(self, op_point):
        """Constraint residual ``|B q - h|`` at every output time."""
        system = self.reduced.system
        targets = np.stack([system.constraint_values(t, op_point) for t in self.times])
        return np.linalg.norm(self.q @ self.reduced.B_r.T - targets, axis=1)

    def kinetic_energy(self):
        """Kinetic energy of the reduced model at every output time."""
        return 0.5 * np.sum(self.reduced.m_r * self.q_dot ** 2, axis=1)

    def bit_axial_velocity(self):
        return self.velocity(U, -1)

    def bit_angular_velocity(self):
        return self.velocity(THETA_X, -1)

    def to_frame(self, x_section):
        """Get the observables of the run as a ``pandas.DataFrame``.

        Args:
            x_section (float):
                Abscissa of the cross section whose lateral motion is exported.

        Returns:
            pandas.DataFrame:
                Bit axial and angular motion, lateral motion of the section, first and fourth
                multipliers and the number of nodes in contact.
        """
        node = self.nearest_node(x_section)
        return pd.DataFrame({
            't': self.times,
            'u_bit': self.displacement(U, -1),
            'u_dot_bit': self.velocity(U, -1),
            'theta_x_bit': self.displacement(THETA_X, -1),
            'theta_x_dot_bit': self.velocity(THETA_X, -1),
            'v': self.displacement(V, node),
            'w': self.displacement(W, node),
            'v_dot': self.velocity(V, node),
            'w_dot': self.velocity(W, node),
            'lambda_1': self.lam[:, 0],
            'lambda_4': self.lam[:, 3],
            'n_contact': self.n_contact,
        })
