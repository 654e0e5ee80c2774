"""Time integration of the reduced model with step refinement around shocks."""

import dataclasses
import logging

import numpy as np
import tqdm

from drillsim.dynamics.errors import ConvergenceError, StaticEquilibriumError, TimeStepFloorError
from drillsim.dynamics.newmark import NewmarkParams
from drillsim.dynamics.solver import SolverControls, consistent_start, step_constrained
from drillsim.dynamics.trajectory import IntegrationStats, Trajectory
from drillsim.errors import ParameterError
from drillsim.fem.contact import ShockLog
from drillsim.fem.mesh import THETA_X, U
from drillsim.model import OperatingPoint
from drillsim.reduction.modal import constrained_frequencies
from drillsim.reduction.projection import ReducedForceEvaluator

LOGGER = logging.getLogger(__name__)


def output_grid(t0, tf, dt):
    """Uniform output times from ``t0`` to ``tf`` with spacing ``dt``.

    The last interval is shortened when ``tf - t0`` is not a multiple of ``dt``.
    """
    n_steps = int(np.floor((tf - t0) / dt * (1 + 1e-12)))
    grid = t0 + dt * np.arange(n_steps + 1)
    if tf - grid[-1] > 1e-9 * dt:
        grid = np.append(grid, tf)

    grid[-1] = tf
    return grid


class Integrator:
    """Advance the reduced model over a time interval.

    The step is the nominal one unless the fixed-point iteration fails, in which case it is
    halved, or a node enters or leaves contact during the step, in which case the step is
    taken again with the refined size. The nominal size is restored by doubling after enough
    accepted steps without contact transitions. Internal steps land on every output time.

    Args:
        reduced (ReducedSystem):
            Reduced-order model.
        evaluator (ReducedForceEvaluator):
            Nonlinear force of the reduced coordinates.
        op_point (OperatingPoint):
            Velocities imposed at the origin.
        params (NewmarkParams):
            Scheme constants.
        controls (SolverControls):
            Fixed-point controls.
        damping (numpy.ndarray or None):
            Diagonal reduced damping. Defaults to ``reduced.c_r``.
        refine (bool):
            Whether to refine the step around contact transitions.
    """

    def __init__(self, reduced, evaluator, op_point, params, controls, damping=None,
                 refine=True):
        self.reduced = reduced
        self.evaluator = evaluator
        self.op_point = op_point
        self.params = params
        self.controls = controls
        self.damping = reduced.c_r if damping is None else np.asarray(damping)
        self.refine = refine

    def start(self, q, q_dot, t0):
        """Consistent initial state, see ``consistent_start``."""
        return consistent_start(
            q, q_dot, t0, self.reduced, self.evaluator, self.op_point, self.damping)

    def _try_step(self, state, dt, friction_sign):
        return step_constrained(
            state, dt, self.reduced, self.evaluator, self.params, self.controls,
            self.op_point, damping=self.damping, friction_sign=friction_sign)

    def run(self, initial, efforts, t_final, stop=None, show_progress=False):
        """Integrate from ``initial`` up to ``t_final``.

        Args:
            initial (StepState):
                Initial state.
            efforts (NodalEfforts):
                Efforts of the initial state.
            t_final (float):
                Final time in s.
            stop (callable or None):
                Called with every state recorded on the output grid; the run ends early when
                it returns ``True``.
            show_progress (bool):
                Whether to show a progress bar.

        Returns:
            Trajectory

        Raises:
            TimeStepFloorError:
                If the step has to be halved below its floor.
        """
        params = self.params
        grid = output_grid(initial.t, t_final, params.dt_nominal)
        shocks = ShockLog(self.reduced.mesh.node_coords)
        stats = IntegrationStats()

        state = initial
        in_contact = efforts.state.in_contact
        shocks.update(state.t, in_contact)
        records = [(state, efforts.state.n_active)]
        friction_sign = self.evaluator.friction_sign(state.q_dot)

        dt = params.dt_nominal
        clean = 0
        index = 1
        progress = tqdm.tqdm(total=len(grid) - 1, disable=not show_progress)
        while index < len(grid):
            remaining = grid[index] - state.t
            landing = remaining <= dt * (1 + 1e-9)
            step = remaining if landing else dt
            try:
                result = self._try_step(state, step, friction_sign)
            except ConvergenceError as error:
                stats.rejected += 1
                dt = step / 2
                clean = 0
                if dt < params.dt_floor:
                    raise TimeStepFloorError(
                        f'Step fell below {params.dt_floor:.3g} s at t={state.t:.6g}: {error}',
                        time=state.t,
                        dt=dt,
                    ) from error

                LOGGER.debug('Step rejected at t=%.6g, retrying with dt=%.3g', state.t, dt)
                continue

            new_contact = result.efforts.state.in_contact
            transition = bool(np.any(new_contact != in_contact))
            if self.refine and transition and step > params.dt_refined * (1 + 1e-9):
                stats.rejected += 1
                stats.refinements += 1
                dt = params.dt_refined
                clean = 0
                LOGGER.debug('Contact transition at t=%.6g, refining to dt=%.3g', state.t, dt)
                continue

            state = result.state
            if landing:
                state = dataclasses.replace(state, t=float(grid[index]))

            stats.accepted += 1
            stats.iterations += result.iterations
            stats.max_residual = max(stats.max_residual, result.residual)
            shocks.update(state.t, new_contact)
            in_contact = new_contact
            friction_sign = self.evaluator.friction_sign(state.q_dot)

            clean = 0 if transition else clean + 1
            if clean >= params.refine_trigger and dt < params.dt_nominal:
                dt = min(2 * dt, params.dt_nominal)
                clean = 0

            if landing:
                records.append((state, result.efforts.state.n_active))
                index += 1
                progress.update()
                if stop is not None and stop(state):
                    break

        progress.close()
        shocks.close(state.t)
        LOGGER.info(
            'Integrated up to t=%.6g s: %s steps accepted, %s rejected, %s refinements',
            state.t, stats.accepted, stats.rejected, stats.refinements)

        states = [record[0] for record in records]
        return Trajectory(
            reduced=self.reduced,
            times=[item.t for item in states],
            q=np.stack([item.q for item in states]),
            q_dot=np.stack([item.q_dot for item in states]),
            q_ddot=np.stack([item.q_ddot for item in states]),
            lam=np.stack([item.lam for item in states]),
            n_contact=[record[1] for record in records],
            shocks=shocks,
            stats=stats,
        )


def imposed_state(reduced, op_point, t0, q_static=None):
    """Initial reduced displacement and velocity of a drilling run.

    The column starts from ``q_static`` (at rest when ``None``) shifted by the imposed axial
    and angular displacements at ``t0``, and moves as a rigid body with the imposed
    velocities.

    Returns:
        tuple[numpy.ndarray, numpy.ndarray]
    """
    mesh = reduced.mesh
    offset = np.zeros(mesh.n_dofs)
    offset[mesh.field_dofs(U)] = op_point.V0 * t0
    offset[mesh.field_dofs(THETA_X)] = op_point.Omega * t0
    rates = np.zeros(mesh.n_dofs)
    rates[mesh.field_dofs(U)] = op_point.V0
    rates[mesh.field_dofs(THETA_X)] = op_point.Omega

    q = reduced.project(offset)
    if q_static is not None:
        q = q + q_static

    return q, reduced.project(rates)


def simulate(reduced, op_point, params=None, controls=None, bit_rock=None, t0=0.0, tf=10.0,
             q_static=None, show_progress=False):
    """Simulate the drilling dynamics of the column.

    Args:
        reduced (ReducedSystem):
            Reduced-order model.
        op_point (OperatingPoint):
            Imposed axial and angular velocities.
        params (NewmarkParams or None):
            Scheme constants. Defaults to ``NewmarkParams()``.
        controls (SolverControls or None):
            Fixed-point controls. Defaults to ``SolverControls()``.
        bit_rock (BitRockParams or None):
            Bit-rock law of this run. Defaults to the law of the reduced model.
        t0, tf (float):
            Time interval in s.
        q_static (numpy.ndarray or None):
            Static equilibrium in reduced coordinates, used as initial configuration.
        show_progress (bool):
            Whether to show a progress bar.

    Returns:
        Trajectory
    """
    if not tf > t0:
        raise ParameterError(f'tf must be greater than t0, got t0={t0} and tf={tf}')

    params = params or NewmarkParams()
    controls = controls or SolverControls()
    model = reduced.model
    if bit_rock is not None:
        model = model.with_bit_rock(bit_rock)

    evaluator = ReducedForceEvaluator(reduced, model=model)
    integrator = Integrator(reduced, evaluator, op_point, params, controls)
    q, q_dot = imposed_state(reduced, op_point, t0, q_static)
    initial, efforts = integrator.start(q, q_dot, t0)
    return integrator.run(initial, efforts, tf, show_progress=show_progress)


@dataclasses.dataclass(frozen=True)
class StaticControls:
    """Controls of the relaxation towards static equilibrium.

    Args:
        zeta (float):
            Damping ratio added to every reduced coordinate.
        omega_min (float or None):
            Circular frequency in rad/s of the extra damping ``2 zeta omega_min``. Defaults
            to the lowest natural frequency of the constrained model.
        energy_ratio (float):
            The run stops when the kinetic energy falls below this fraction of its peak.
        min_steps (int):
            Output steps taken before the stopping test applies.
        max_time (float):
            Longest relaxation in s.
    """

    zeta: float = 1.0
    omega_min: float = None
    energy_ratio: float = 1e-8
    min_steps: int = 10
    max_time: float = 120.0

    def __post_init__(self):
        violations = []
        if not self.zeta > 0:
            violations.append('zeta must be > 0')
        if self.omega_min is not None and not self.omega_min > 0:
            violations.append('omega_min must be > 0')
        if not 0 < self.energy_ratio < 1:
            violations.append('energy_ratio must satisfy 0 < energy_ratio < 1')
        if self.min_steps < 1:
            violations.append('min_steps must be >= 1')
        if not self.max_time > 0:
            violations.append('max_time must be > 0')

        if violations:
            raise ParameterError.from_violations('StaticControls', violations)

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class StaticResult:
    """Static equilibrium of the column.

    Args:
        q_r (numpy.ndarray):
            Reduced coordinates.
        q_full (numpy.ndarray):
            Full nodal displacement vector.
        lam (numpy.ndarray):
            Constraint multipliers.
        time (float):
            Relaxation time in s.
        trajectory (Trajectory):
            Relaxation history.
    """

    q_r: np.ndarray
    q_full: np.ndarray
    lam: np.ndarray
    time: float
    trajectory: Trajectory

    def max_radial_displacement(self, mesh):
        return float(np.max(np.hypot(
            mesh.nodal_field(self.q_full, 'v'), mesh.nodal_field(self.q_full, 'w'))))


def relaxation_damping(reduced, zeta, omega_min=None):
    """Reduced damping ``c + 2 zeta omega_min`` used to reach equilibrium.

    The extra damping is proportional to the mass, so every constrained mode decays at least
    as fast as ``exp(-zeta omega_min t)``.
    """
    if omega_min is None:
        omega_min = 2 * np.pi * float(constrained_frequencies(reduced).min())

    return reduced.c_r + 2 * zeta * omega_min


def static_equilibrium(reduced, params=None, controls=None, static=None, evaluator=None,
                       show_progress=False):
    """Let the column settle under gravity with the origin at rest.

    Args:
        reduced (ReducedSystem):
            Reduced-order model.
        params (NewmarkParams or None):
            Scheme constants. Defaults to ``NewmarkParams()``.
        controls (SolverControls or None):
            Fixed-point controls. Defaults to ``SolverControls()``.
        static (StaticControls or None):
            Relaxation controls. Defaults to ``StaticControls()``.
        evaluator (ReducedForceEvaluator or None):
            Force evaluator. Defaults to the evaluator of the reduced model.
        show_progress (bool):
            Whether to show a progress bar.

    Returns:
        StaticResult

    Raises:
        StaticEquilibriumError:
            If the kinetic energy has not decayed within ``static.max_time``.
    """
    params = params or NewmarkParams()
    controls = controls or SolverControls()
    static = static or StaticControls()
    evaluator = evaluator or ReducedForceEvaluator(reduced)
    op_point = OperatingPoint(V0=0.0, Omega=0.0)
    damping = relaxation_damping(reduced, static.zeta, static.omega_min)
    integrator = Integrator(
        reduced, evaluator, op_point, params, controls, damping=damping, refine=False)

    zero = np.zeros(reduced.n_red)
    initial, efforts = integrator.start(zero, zero, 0.0)
    monitor = {'peak': 0.0, 'steps': 0, 'settled': False}

    def settled(state):
        energy = state.kinetic_energy
        monitor['peak'] = max(monitor['peak'], energy)
        monitor['steps'] += 1
        if monitor['steps'] < static.min_steps:
            return False

        monitor['settled'] = energy <= static.energy_ratio * monitor['peak']
        return monitor['settled']

    trajectory = integrator.run(
        initial, efforts, static.max_time, stop=settled, show_progress=show_progress)
    if not monitor['settled']:
        raise StaticEquilibriumError(
            f'Kinetic energy did not decay below {static.energy_ratio:g} of its peak '
            f'within {static.max_time:g} s'
        )

    q_r = trajectory.q[-1]
    LOGGER.info('Static equilibrium reached after %.3f s', trajectory.times[-1])
    return StaticResult(
        q_r=q_r,
        q_full=reduced.expand(q_r),
        lam=trajectory.lam[-1],
        time=float(trajectory.times[-1]),
        trajectory=trajectory,
    )
