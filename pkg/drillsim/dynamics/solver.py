"""Constrained implicit step of the reduced nonlinear system.

Every step solves the saddle-point system

    K_eff q + B^T lambda = f_eff(q)
    B q = h

where ``K_eff`` is the effective stiffness of the Newmark scheme and ``f_eff`` collects the
nonlinear forces and the history terms. The multipliers are eliminated through their Schur
complement ``B K_eff^-1 B^T`` and the nonlinear dependence is resolved by a fixed-point
iteration with over-relaxation.
"""

import dataclasses
import logging

import numpy as np
import scipy.linalg

from drillsim.dynamics.errors import ConstraintError, ConvergenceError
from drillsim.errors import ParameterError

LOGGER = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class SolverControls:
    """Controls of the fixed-point iteration.

    Args:
        tolerance (float):
            Relative size of the last update below which the iteration has converged.
        max_iterations (int):
            Iterations allowed before the step is rejected.
        relaxation (float):
            Over-relaxation factor applied from the second iterate on, in ``(0, 2)``.
        multiplier_tolerance (float):
            Relative constraint residual accepted at the end of a step.
        absolute_tolerance (float):
            Absolute floor of the convergence test.
    """

    tolerance: float = 1e-6
    max_iterations: int = 50
    relaxation: float = 1.2
    multiplier_tolerance: float = 1e-9
    absolute_tolerance: float = 1e-12

    def __post_init__(self):
        violations = []
        if not self.tolerance > 0:
            violations.append('tolerance must be > 0')
        if self.max_iterations < 1:
            violations.append('max_iterations must be >= 1')
        if not 0 < self.relaxation < 2:
            violations.append('relaxation must satisfy 0 < relaxation < 2')
        if not self.multiplier_tolerance > 0:
            violations.append('multiplier_tolerance must be > 0')
        if not self.absolute_tolerance >= 0:
            violations.append('absolute_tolerance must be >= 0')

        if violations:
            raise ParameterError.from_violations('SolverControls', violations)

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class StepState:
    """Reduced state and multipliers at one instant."""

    t: float
    q: np.ndarray
    q_dot: np.ndarray
    q_ddot: np.ndarray
    lam: np.ndarray

    @property
    def kinetic_energy(self):
        return 0.5 * float(self.q_dot @ self.q_dot)


@dataclasses.dataclass(frozen=True)
class StepResult:
    """Outcome of an accepted step.

    Args:
        state (StepState):
            State at the end of the step.
        efforts (NodalEfforts):
            Wall and bit efforts at the end of the step.
        iterations (int):
            Fixed-point iterations used.
        residual (float):
            Constraint residual ``|B q - h|``.
    """

    state: StepState
    efforts: object
    iterations: int
    residual: float


def _factor(matrix, what, time, dt):
    try:
        return scipy.linalg.cho_factor(matrix)
    except np.linalg.LinAlgError as error:
        message = f'{what} is not positive definite at t={time:.6g}, dt={dt:.3g}'
        raise ConstraintError(message) from error


def step_constrained(state, dt, reduced, evaluator, params, controls, op_point,
                     damping=None, friction_sign=None):
    """Advance the constrained reduced system by one step.

    Args:
        state (StepState):
            State at the start of the step, satisfying the constraints.
        dt (float):
            Step size in s.
        reduced (ReducedSystem):
            Reduced-order model.
        evaluator (ReducedForceEvaluator):
            Nonlinear force of the reduced coordinates.
        params (NewmarkParams):
            Scheme constants.
        controls (SolverControls):
            Fixed-point controls.
        op_point (OperatingPoint):
            Velocities imposed at the origin.
        damping (numpy.ndarray or None):
            Diagonal reduced damping. Defaults to ``reduced.c_r``.
        friction_sign (numpy.ndarray or None):
            Velocity signs used by the friction laws. Defaults to the signs of the velocities
            at the start of the step.

    Returns:
        StepResult

    Raises:
        ConvergenceError:
            If the iteration does not converge or produces non-finite values.
        ConstraintError:
            If the multiplier system is singular.
    """
    coefficients = params.coefficients(dt)
    t_next = state.t + dt
    mass = reduced.m_r
    damping = reduced.c_r if damping is None else damping
    q, q_dot, q_ddot = state.q, state.q_dot, state.q_ddot
    if friction_sign is None:
        friction_sign = evaluator.friction_sign(q_dot)

    history = (
        mass * coefficients.inertia_history(q, q_dot, q_ddot)
        + damping * coefficients.damping_history(q, q_dot, q_ddot)
    )
    constraint = reduced.B_r
    target = reduced.system.constraint_values(t_next, op_point)

    iterate = q + dt * q_dot + 0.5 * dt ** 2 * q_ddot
    rates = coefficients.update(iterate, q, q_dot, q_ddot)
    force, efforts = evaluator(iterate, *rates, friction_sign=friction_sign)

    tangent = evaluator.tangent(efforts, rates[0], coefficients.a1)
    effective = tangent + np.diag(coefficients.a0 * mass + coefficients.a1 * damping + reduced.k_r)
    effective_factor = _factor(effective, 'Effective stiffness', state.t, dt)
    coupling = scipy.linalg.cho_solve(effective_factor, constraint.T)
    schur_factor = _factor(constraint @ coupling, 'Multiplier system', state.t, dt)

    lam = state.lam
    for iteration in range(1, controls.max_iterations + 1):
        solution = scipy.linalg.cho_solve(effective_factor, force + history + tangent @ iterate)
        lam_hat = scipy.linalg.cho_solve(schur_factor, constraint @ solution - target)
        q_hat = solution - coupling @ lam_hat
        if iteration == 1:
            update = q_hat - iterate
            lam = lam_hat
        else:
            update = controls.relaxation * (q_hat - iterate)
            lam = lam + controls.relaxation * (lam_hat - lam)

        iterate = iterate + update
        if not np.all(np.isfinite(iterate)):
            raise ConvergenceError(
                f'Non-finite iterate at t={state.t:.6g}', time=state.t, dt=dt)

        rates = coefficients.update(iterate, q, q_dot, q_ddot)
        force, efforts = evaluator(iterate, *rates, friction_sign=friction_sign)
        change = np.linalg.norm(update)
        if change <= controls.tolerance * np.linalg.norm(iterate) + controls.absolute_tolerance:
            break

        LOGGER.debug('t=%.6g dt=%.3g iteration %s: update %.3e', state.t, dt, iteration, change)
    else:
        raise ConvergenceError(
            f'Fixed-point iteration did not converge in {controls.max_iterations} iterations '
            f'at t={state.t:.6g}, dt={dt:.3g}',
            time=state.t,
            dt=dt,
        )

    residual = float(np.linalg.norm(constraint @ iterate - target))
    scale = 1.0 + np.linalg.norm(target) + np.linalg.norm(iterate)
    if residual > controls.multiplier_tolerance * scale:
        raise ConstraintError(
            f'Constraint residual {residual:.3e} at t={t_next:.6g} exceeds its tolerance')

    next_state = StepState(t_next, iterate, rates[0], rates[1], lam)
    return StepResult(next_state, efforts, iteration, residual)


def consistent_start(q, q_dot, t, reduced, evaluator, op_point, damping=None, passes=2):
    """Accelerations and multipliers that balance the equations of motion at ``t``.

    The imposed motion has a constant velocity, so the accelerations satisfy ``B q_ddot = 0``.

    Args:
        q, q_dot (numpy.ndarray):
            Initial reduced displacement and velocity.
        t (float):
            Initial time.
        reduced (ReducedSystem):
            Reduced-order model.
        evaluator (ReducedForceEvaluator):
            Nonlinear force of the reduced coordinates.
        op_point (OperatingPoint):
            Velocities imposed at the origin.
        damping (numpy.ndarray or None):
            Diagonal reduced damping. Defaults to ``reduced.c_r``.
        passes (int):
            Evaluations of the acceleration-dependent forces.

    Returns:
        tuple[StepState, NodalEfforts]
    """
    damping = reduced.c_r if damping is None else damping
    constraint = reduced.B_r
    gram = _factor(constraint @ constraint.T, 'Multiplier system', t, 0.0)
    q_ddot = np.zeros_like(q)
    for _ in range(passes):
        force, efforts = evaluator(q, q_dot, q_ddot)
        balance = (force - damping * q_dot - reduced.k_r * q) / reduced.m_r
        lam = scipy.linalg.cho_solve(gram, constraint @ balance)
        q_ddot = balance - constraint.T @ lam

    return StepState(t, q, q_dot, q_ddot, lam), efforts
