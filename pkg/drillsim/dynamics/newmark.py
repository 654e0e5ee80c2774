"""Newmark time scheme."""

import dataclasses
import logging

from drillsim.errors import ParameterError

LOGGER = logging.getLogger(__name__)


def nominal_time_step(length, c_L, band_max=4.0):
    """Nominal step ``1 / (2 f_max)`` with ``f_max = band_max c_L / L``.

    Args:
        length (float):
            Column length in m.
        c_L (float):
            Longitudinal wave speed in m/s.
        band_max (float):
            Highest dimensionless frequency kept in the reduced model.

    Returns:
        float:
            Time step in s.
    """
    f_max = band_max * c_L / length
    LOGGER.debug('Nominal step for f_max=%.6g Hz', f_max)
    return 1.0 / (2.0 * f_max)


@dataclasses.dataclass(frozen=True)
class NewmarkParams:
    """Constants of the Newmark scheme and of the step refinement.

    ``gamma = 1/2 + alpha`` and ``beta = (1/2 + gamma)^2 / 4``; any ``alpha > 0`` adds numerical
    dissipation of the highest frequencies.

    Args:
        alpha (float):
            Dissipation offset, ``>= 0``.
        dt_nominal (float):
            Nominal step in s.
        refine_factor (int):
            Step divisor used around contact transitions.
        refine_trigger (int):
            Accepted steps without contact transitions before the step is doubled back.
        floor_factor (int):
            Smallest step is ``dt_nominal / floor_factor``.
    """

    alpha: float = 0.015
    dt_nominal: float = 2.466e-3
    refine_factor: int = 8
    refine_trigger: int = 10
    floor_factor: int = 1024

    def __post_init__(self):
        violations = []
        if not self.alpha >= 0:
            violations.append('alpha must be >= 0')
        if not self.dt_nominal > 0:
            violations.append('dt_nominal must be > 0')
        if self.refine_factor < 1:
            violations.append('refine_factor must be >= 1')
        if self.refine_trigger < 1:
            violations.append('refine_trigger must be >= 1')
        if self.floor_factor < self.refine_factor:
            violations.append('floor_factor must be >= refine_factor')

        if violations:
            raise ParameterError.from_violations('NewmarkParams', violations)

    @property
    def gamma(self):
        return 0.5 + self.alpha

    @property
    def beta(self):
        return 0.25 * (0.5 + self.gamma) ** 2

    @property
    def dt_refined(self):
        return self.dt_nominal / self.refine_factor

    @property
    def dt_floor(self):
        return self.dt_nominal / self.floor_factor

    def coefficients(self, dt):
        """Integration constants for a step of size ``dt``."""
        return NewmarkCoefficients.from_scheme(self.gamma, self.beta, dt)

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class NewmarkCoefficients:
    """Constants ``a0`` to ``a7`` of the Newmark scheme for one step size."""

    dt: float
    gamma: float
    beta: float
    a0: float
    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    a6: float
    a7: float

    @classmethod
    def from_scheme(cls, gamma, beta, dt):
        return cls(
            dt=dt,
            gamma=gamma,
            beta=beta,
            a0=1.0 / (beta * dt ** 2),
            a1=gamma / (beta * dt),
            a2=1.0 / (beta * dt),
            a3=1.0 / (2.0 * beta) - 1.0,
            a4=gamma / beta - 1.0,
            a5=dt / 2.0 * (gamma / beta - 2.0),
            a6=dt * (1.0 - gamma),
            a7=gamma * dt,
        )

    def accelerations(self, q_next, q, q_dot, q_ddot):
        """Acceleration at the end of the step implied by the end displacement."""
        return self.a0 * (q_next - q) - self.a2 * q_dot - self.a3 * q_ddot

    def velocities(self, q_ddot_next, q_dot, q_ddot):
        """Velocity at the end of the step implied by the end acceleration."""
        return q_dot + self.a6 * q_ddot + self.a7 * q_ddot_next

    def update(self, q_next, q, q_dot, q_ddot):
        """Velocity and acceleration at the end of the step.

        Returns:
            tuple[numpy.ndarray, numpy.ndarray]
        """
        q_ddot_next = self.accelerations(q_next, q, q_dot, q_ddot)
        return self.velocities(q_ddot_next, q_dot, q_ddot), q_ddot_next

    def inertia_history(self, q, q_dot, q_ddot):
        """Terms of the previous state multiplied by the mass in the effective force."""
        return self.a0 * q + self.a2 * q_dot + self.a3 * q_ddot

    def damping_history(self, q, q_dot, q_ddot):
        """Terms of the previous state multiplied by the damping in the effective force."""
        return self.a1 * q + self.a4 * q_dot + self.a5 * q_ddot


def newmark_predict(q, q_dot, q_ddot, dt, params):
    """Parts of the end-of-step state known before the end acceleration.

    The end state follows as ``q_next = q_pred + beta dt^2 q_ddot_next`` and
    ``q_dot_next = q_dot_pred + gamma dt q_ddot_next``.

    Args:
        q, q_dot, q_ddot (numpy.ndarray):
            State at the start of the step.
        dt (float):
            Step size in s.
        params (NewmarkParams):
            Scheme constants.

    Returns:
        tuple[numpy.ndarray, numpy.ndarray]:
            Displacement and velocity predictors.
    """
    q_pred = q + dt * q_dot + (0.5 - params.beta) * dt ** 2 * q_ddot
    q_dot_pred = q_dot + (1.0 - params.gamma) * dt * q_ddot
    return q_pred, q_dot_pred
