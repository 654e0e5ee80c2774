"""Rate of penetration, drilling efficiency and shock maps of a drilling run."""

import logging

import numpy as np
import pandas as pd
import scipy.integrate

from drillsim.errors import UndefinedEfficiencyError
from drillsim.fem.contact import bit_force, bit_torque
from drillsim.fem.mesh import THETA_X, U

LOGGER = logging.getLogger(__name__)


def time_mean(times, values):
    """Trapezoidal time mean of ``values`` over ``[times[0], times[-1]]``."""
    times = np.asarray(times, dtype=float)
    return float(scipy.integrate.trapezoid(values, times) / (times[-1] - times[0]))


def penetration_rate(times, u_dot_bit, positive_part=True):
    """Time mean of the bit axial velocity, by default of its positive part only.

    Args:
        times (numpy.ndarray):
            Output times in s.
        u_dot_bit (numpy.ndarray):
            Bit axial velocity in m/s.
        positive_part (bool):
            Whether only the forward motion of the bit counts.

    Returns:
        float:
            Rate of penetration in m/s.
    """
    u_dot_bit = np.asarray(u_dot_bit, dtype=float)
    if positive_part:
        u_dot_bit = np.maximum(u_dot_bit, 0.0)

    return time_mean(times, u_dot_bit)


def rate_of_penetration(trajectory, positive_part=True):
    """Rate of penetration of a drilling run, see ``penetration_rate``."""
    return penetration_rate(trajectory.times, trajectory.bit_axial_velocity(), positive_part)


def power_balance(trajectory, model=None):
    """Input and useful power of a drilling run at every output time.

    The input power is delivered at the origin by the axial reaction ``-lambda_1`` and the
    torque ``-lambda_4``; the useful power is spent by the bit against the rock. Only the
    positive parts of velocities and efforts count.

    Args:
        trajectory (Trajectory):
            Drilling run.
        model (BeamModel or None):
            Model whose bit-rock law drove the run. Defaults to the model of the reduction.

    Returns:
        pandas.DataFrame:
            Columns ``t``, ``p_in`` and ``p_out`` in W.
    """
    model = model or trajectory.reduced.model
    bit_rock = model.bit_rock
    u_dot_bit = trajectory.bit_axial_velocity()
    omega_bit = trajectory.bit_angular_velocity()
    force = bit_force(u_dot_bit, bit_rock)
    torque = bit_torque(omega_bit, force, model.geometry.R_bh, bit_rock)
    p_out = (
        np.maximum(u_dot_bit, 0) * np.maximum(-force, 0)
        + np.maximum(omega_bit, 0) * np.maximum(-torque, 0)
    )
    p_in = (
        np.maximum(trajectory.velocity(U, 0), 0) * np.maximum(-trajectory.lam[:, 0], 0)
        + np.maximum(trajectory.velocity(THETA_X, 0), 0) * np.maximum(-trajectory.lam[:, 3], 0)
    )
    return pd.DataFrame({'t': trajectory.times, 'p_in': p_in, 'p_out': p_out})


def efficiency_ratio(times, p_out, p_in):
    """Ratio of the time integrals of useful and input power.

    Raises:
        UndefinedEfficiencyError:
            If the input power integrates to zero.
    """
    energy_in = scipy.integrate.trapezoid(p_in, times)
    if energy_in == 0:
        raise UndefinedEfficiencyError('The input power integrates to zero')

    return float(scipy.integrate.trapezoid(p_out, times) / energy_in)


def drilling_efficiency(trajectory, model=None):
    """Fraction of the input energy used by the bit to drill, see ``power_balance``."""
    balance = power_balance(trajectory, model)
    return efficiency_ratio(balance['t'], balance['p_out'], balance['p_in'])


def shock_series(trajectory):
    """Number of nodes in contact at every output time."""
    return pd.DataFrame({'t': trajectory.times, 'n_contact': trajectory.n_contact})


def shock_counts(trajectory):
    """Number of contact episodes of every node along the column."""
    mesh = trajectory.mesh
    return pd.DataFrame({
        'node': np.arange(mesh.n_nodes),
        'x': mesh.node_coords,
        'shocks': trajectory.shocks.counts_per_node(),
    })
