"""Von Mises stress at the outer fiber of the column."""

import dataclasses
import logging

import numpy as np
import pandas as pd

from drillsim.fem.forces import section_strains
from drillsim.fem.shape import LINEAR_GAUSS_POINTS
from drillsim.reduction.projection import ModalInterpolation

LOGGER = logging.getLogger(__name__)

N_STATIONS = 8
TIME_CHUNK = 256


def station_points(radius, n_stations=N_STATIONS, offset=0.0):
    """Coordinates ``y`` and ``z`` of equally spaced stations on a circle of the section."""
    angles = offset + 2 * np.pi * np.arange(n_stations) / n_stations
    return radius * np.cos(angles), radius * np.sin(angles)


def von_mises_stress(eps_xx, eps_xy, eps_xz, model):
    """Equivalent stress of the one-dimensional constitutive law.

    ``sigma_xx = E eps_xx`` and the shear stresses are ``2 kappa_s G eps``.

    Returns:
        numpy.ndarray:
            ``sqrt(sigma_xx^2 + 3 (sigma_xy^2 + sigma_xz^2))`` in Pa.
    """
    shear = 2 * model.material.kappa_s * model.moduli.G
    sigma_xx = model.material.E * np.asarray(eps_xx)
    sigma_xy = shear * np.asarray(eps_xy)
    sigma_xz = shear * np.asarray(eps_xz)
    return np.sqrt(sigma_xx ** 2 + 3 * (sigma_xy ** 2 + sigma_xz ** 2))


@dataclasses.dataclass(frozen=True)
class StressField:
    """Outer-fiber stresses at one instant.

    Args:
        t (float):
            Time in s.
        x (numpy.ndarray):
            Abscissas of the quadrature points, shape ``(n_elem, n_points)``.
        angles (numpy.ndarray):
            Angular positions of the stations in rad.
        sigma_xx, sigma_xy, sigma_xz, sigma_vm (numpy.ndarray):
            Stresses in Pa, shape ``(n_elem, n_points, n_stations)``.
    """

    t: float
    x: np.ndarray
    angles: np.ndarray
    sigma_xx: np.ndarray
    sigma_xy: np.ndarray
    sigma_xz: np.ndarray
    sigma_vm: np.ndarray

    @property
    def max(self):
        return float(self.sigma_vm.max())

    def to_frame(self):
        """Get the stresses as a ``pandas.DataFrame`` with one row per point and station."""
        n_stations = len(self.angles)
        return pd.DataFrame({
            'x': np.repeat(self.x.ravel(), n_stations),
            'angle': np.tile(self.angles, self.x.size),
            'sigma_xx': self.sigma_xx.ravel(),
            'sigma_xy': self.sigma_xy.ravel(),
            'sigma_xz': self.sigma_xz.ravel(),
            'sigma_vm': self.sigma_vm.ravel(),
        })


class StressRecovery:
    """Outer-fiber stress recovery on the reduced basis.

    Args:
        reduced (ReducedSystem):
            Reduced-order model.
        model (BeamModel or None):
            Beam model. Defaults to the model of ``reduced``.
        n_stations (int):
            Number of angular stations on the outer radius.
        n_points (int):
            Number of Gauss points per element where the stresses are evaluated.
    """

    def __init__(self, reduced, model=None, n_stations=N_STATIONS,
                 n_points=LINEAR_GAUSS_POINTS):
        self.reduced = reduced
        self.model = model or reduced.model
        self.interpolation = ModalInterpolation(
            reduced.mesh, self.model, reduced.Phi, n_points=n_points)
        self.angles = 2 * np.pi * np.arange(n_stations) / n_stations
        self.y, self.z = station_points(self.model.geometry.R_ext, n_stations)

    def _stresses(self, values, derivatives):
        eps_xx, eps_xy, eps_xz = section_strains(values, derivatives, self.y, self.z)
        shear = 2 * self.model.material.kappa_s * self.model.moduli.G
        sigma_vm = von_mises_stress(eps_xx, eps_xy, eps_xz, self.model)
        return self.model.material.E * eps_xx, shear * eps_xy, shear * eps_xz, sigma_vm

    def field(self, q_r, t=0.0):
        """Stress field of one reduced state."""
        values, derivatives = self.interpolation.fields(q_r)
        sigma_xx, sigma_xy, sigma_xz, sigma_vm = self._stresses(values, derivatives)
        return StressField(
            t=t,
            x=self.interpolation.positions,
            angles=self.angles,
            sigma_xx=sigma_xx,
            sigma_xy=sigma_xy,
            sigma_xz=sigma_xz,
            sigma_vm=sigma_vm,
        )

    def max_history(self, q_history):
        """Largest von Mises stress along the column for every reduced state.

        Args:
            q_history (numpy.ndarray):
                Reduced states, shape ``(n_times, n_red)``.

        Returns:
            numpy.ndarray:
                Maximum over points and stations, shape ``(n_times,)``.
        """
        q_history = np.atleast_2d(q_history)
        maxima = np.empty(len(q_history))
        for start in range(0, len(q_history), TIME_CHUNK):
            chunk = q_history[start:start + TIME_CHUNK]
            values = np.einsum('egfn,tn->tegf', self.interpolation.values, chunk)
            derivatives = np.einsum('egfn,tn->tegf', self.interpolation.derivatives, chunk)
            sigma_vm = self._stresses(values, derivatives)[-1]
            maxima[start:start + len(chunk)] = sigma_vm.reshape(len(chunk), -1).max(axis=1)

        return maxima


def stress_field(trajectory, index, model=None):
    """Outer-fiber stress field of a run at output ``index``."""
    recovery = StressRecovery(trajectory.reduced, model)
    return recovery.field(trajectory.q[index], t=float(trajectory.times[index]))


def von_mises_history(trajectory, model=None):
    """Largest von Mises stress along the column at every output time."""
    return StressRecovery(trajectory.reduced, model).max_history(trajectory.q)


def von_mises_max(trajectory, model=None):
    """Largest von Mises stress over the column, the stations and the output times in Pa."""
    maximum = float(von_mises_history(trajectory, model).max())
    LOGGER.debug('Largest von Mises stress: %.6g Pa', maximum)
    return maximum
