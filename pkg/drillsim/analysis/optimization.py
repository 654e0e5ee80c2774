"""Grid search of the operating window for the fastest admissible drilling."""

import dataclasses
import functools
import logging
import math

import numpy as np
import pandas as pd
import tqdm

from drillsim.analysis.performance import drilling_efficiency, rate_of_penetration
from drillsim.analysis.stress import von_mises_max
from drillsim.dynamics.newmark import NewmarkParams
from drillsim.dynamics.simulation import simulate
from drillsim.dynamics.solver import SolverControls
from drillsim.errors import (
    DrillsimError, InfeasibleWindowError, ParameterError, UndefinedEfficiencyError)
from drillsim.model import OperatingPoint
from drillsim.uq.monte_carlo import run_monte_carlo
from drillsim.utils import parallel_map

LOGGER = logging.getLogger(__name__)

UTS = 650.0e6


@dataclasses.dataclass(frozen=True)
class OperatingWindow:
    """Rectangle of operating points explored by the grid search.

    Args:
        V0_min, V0_max (float):
            Range of the imposed axial velocity in m/s.
        Omega_min, Omega_max (float):
            Range of the imposed angular velocity in rad/s.
        n_V0, n_Omega (int):
            Number of grid values of every range.
    """

    V0_min: float = 1.0 / 360.0
    V0_max: float = 1.0 / 90.0
    Omega_min: float = 3.0 * math.pi / 2.0
    Omega_max: float = 7.0 * math.pi / 3.0
    n_V0: int = 7
    n_Omega: int = 7

    def __post_init__(self):
        violations = []
        for name in ('V0', 'Omega'):
            low, high = getattr(self, f'{name}_min'), getattr(self, f'{name}_max')
            count = getattr(self, f'n_{name}')
            if low < 0:
                violations.append(f'{name}_min must be >= 0')
            if int(count) != count or count < 1:
                violations.append(f'n_{name} must be a positive integer')
            elif count > 1 and not high > low:
                violations.append(f'{name}_max must be greater than {name}_min')
            elif count == 1 and high < low:
                violations.append(f'{name}_max must not be smaller than {name}_min')

        if violations:
            raise ParameterError.from_violations('OperatingWindow', violations)

    @property
    def V0_grid(self):
        return np.linspace(self.V0_min, self.V0_max, int(self.n_V0))

    @property
    def Omega_grid(self):
        return np.linspace(self.Omega_min, self.Omega_max, int(self.n_Omega))

    def points(self):
        """Grid points as ``(i, j, OperatingPoint)`` in row-major order of ``(V0, Omega)``."""
        return [
            (i, j, OperatingPoint(V0=float(V0), Omega=float(Omega)))
            for i, V0 in enumerate(self.V0_grid)
            for j, Omega in enumerate(self.Omega_grid)
        ]

    def to_dict(self):
        return dataclasses.asdict(self)


def summarize_trajectory(trajectory, model):
    """Scalar results of one drilling run.

    Returns:
        dict:
            ``rop`` and ``rop_mean`` in m/s, ``efficiency`` (``nan`` when the input power is
            zero) and ``sigma_vm_max`` in Pa.
    """
    try:
        efficiency = drilling_efficiency(trajectory, model)
    except UndefinedEfficiencyError:
        efficiency = float('nan')

    return {
        'rop': rate_of_penetration(trajectory),
        'rop_mean': rate_of_penetration(trajectory, positive_part=False),
        'efficiency': efficiency,
        'sigma_vm_max': von_mises_max(trajectory, model),
    }


@dataclasses.dataclass(frozen=True)
class PointTask:
    """Shared inputs of the runs of a grid search."""

    reduced: object
    params: NewmarkParams
    controls: SolverControls
    t0: float
    tf: float
    q_static: np.ndarray = None


def evaluate_point(task, point):
    """Deterministic run at one grid point; model failures mark the point as failed."""
    i, j, op_point = point
    row = {'i': i, 'j': j, 'V0': op_point.V0, 'Omega': op_point.Omega}
    try:
        trajectory = simulate(
            task.reduced, op_point, params=task.params, controls=task.controls, t0=task.t0,
            tf=task.tf, q_static=task.q_static)
    except DrillsimError as error:
        LOGGER.warning('Grid point V0=%.6g, Omega=%.6g failed: %s', op_point.V0,
                       op_point.Omega, error)
        return {**row, 'status': 'failed'}

    return {**row, **summarize_trajectory(trajectory, task.reduced.model), 'status': 'ok'}


class WindowResult:
    """Maps of a grid search and the best admissible point.

    Args:
        window (OperatingWindow):
            Explored window.
        frame (pandas.DataFrame):
            One row per grid point with the ``objective`` column maximized by the search and
            the boolean ``admissible`` column.
        objective (str):
            Name of the maximized column.
    """

    def __init__(self, window, frame, objective):
        self.window = window
        self.frame = frame
        self.objective = objective

    @property
    def admissible(self):
        return self.frame[self.frame['admissible']]

    @property
    def optimum(self):
        """Row of the admissible point with the largest objective."""
        admissible = self.admissible
        if admissible.empty:
            raise InfeasibleWindowError(
                'No point of the operating window is admissible', result=self)

        return admissible.loc[admissible[self.objective].idxmax()]

    def map(self, column):
        """Values of ``column`` as a table indexed by ``V0`` with one column per ``Omega``."""
        return self.frame.pivot(index='V0', columns='Omega', values=column)

    def contours(self, columns):
        """Long-format contour data ``V0, Omega`` plus the requested columns."""
        return self.frame[['V0', 'Omega', *columns]].copy()

    def summary(self):
        optimum = self.optimum
        return {
            'objective': self.objective,
            'V0': float(optimum['V0']),
            'Omega': float(optimum['Omega']),
            'value': float(optimum[self.objective]),
            'n_admissible': int(self.frame['admissible'].sum()),
            'n_failed': int((self.frame['status'] != 'ok').sum()),
            'window': self.window.to_dict(),
        }


def optimize_deterministic(reduced, window=None, uts=UTS, params=None, controls=None,
                           t0=0.0, tf=10.0, q_static=None, jobs=1, show_progress=False):
    """Maximize the rate of penetration over the operating window.

    A point is admissible when its largest von Mises stress does not exceed ``uts``.

    Args:
        reduced (ReducedSystem):
            Reduced-order model.
        window (OperatingWindow or None):
            Grid of operating points. Defaults to ``OperatingWindow()``.
        uts (float):
            Ultimate tensile strength in Pa.
        params (NewmarkParams or None):
            Scheme constants.
        controls (SolverControls or None):
            Fixed-point controls.
        t0, tf (float):
            Time interval of every run in s.
        q_static (numpy.ndarray or None):
            Static equilibrium used as initial configuration.
        jobs (int):
            Number of worker processes.
        show_progress (bool):
            Whether to show a progress bar.

    Returns:
        WindowResult:
            Columns ``rop``, ``rop_mean``, ``efficiency``, ``sigma_vm_max``, ``margin``
            (``uts - sigma_vm_max``) and ``admissible`` for every point.

    Raises:
        InfeasibleWindowError:
            If no point is admissible.
    """
    window = window or OperatingWindow()
    task = PointTask(
        reduced, params or NewmarkParams(), controls or SolverControls(), t0, tf, q_static)
    points = window.points()
    worker = functools.partial(evaluate_point, task)
    rows = list(tqdm.tqdm(
        parallel_map(worker, points, jobs), total=len(points), disable=not show_progress))

    frame = pd.DataFrame(rows).sort_values(['i', 'j']).reset_index(drop=True)
    for column in ('rop', 'rop_mean', 'efficiency', 'sigma_vm_max'):
        if column not in frame:
            frame[column] = np.nan

    frame['margin'] = uts - frame['sigma_vm_max']
    frame['admissible'] = (frame['status'] == 'ok') & (frame['margin'] >= 0)
    result = WindowResult(window, frame, 'rop')
    optimum = result.optimum
    LOGGER.info('Deterministic optimum at V0=%.6g m/s, Omega=%.6g rad/s, rop=%.6g m/s',
                optimum['V0'], optimum['Omega'], optimum['rop'])
    return result


def optimize_robust(reduced, stochastic, n_samples, window=None, p_risk=0.1, uts=UTS,
                    params=None, controls=None, t0=0.0, tf=10.0, q_static=None, jobs=1,
                    show_progress=False):
    """Maximize the expected rate of penetration under a probabilistic stress constraint.

    Every grid point runs a Monte Carlo propagation of ``n_samples`` realizations. A point is
    admissible when the fraction of its realizations with a largest von Mises stress not
    exceeding ``uts`` is at least ``1 - p_risk``. Failed realizations count as exceedances.

    Args:
        reduced (ReducedSystem):
            Reduced-order model.
        stochastic (StochasticBitRock):
            Probabilistic model of the bit-rock law.
        n_samples (int):
            Realizations per grid point.
        window (OperatingWindow or None):
            Grid of operating points.
        p_risk (float):
            Acceptable probability of exceeding ``uts``, in ``(0, 1)``.
        uts (float):
            Ultimate tensile strength in Pa.
        params, controls, t0, tf, q_static:
            See ``optimize_deterministic``.
        jobs (int):
            Number of worker processes of every Monte Carlo propagation.
        show_progress (bool):
            Whether to show a progress bar over the grid.

    Returns:
        WindowResult:
            Columns ``expected_rop``, ``expected_efficiency``, ``sigma_vm_mean``,
            ``probability``, ``n_failed`` and ``admissible`` for every point.

    Raises:
        InfeasibleWindowError:
            If no point is admissible.
    """
    if not 0 < p_risk < 1:
        raise ParameterError(f'p_risk must satisfy 0 < p_risk < 1, got {p_risk}')

    window = window or OperatingWindow()
    rows = []
    for i, j, op_point in tqdm.tqdm(window.points(), disable=not show_progress):
        run = run_monte_carlo(
            reduced, stochastic, n_samples, op_point, params=params, controls=controls,
            t0=t0, tf=tf, q_static=q_static, summarize=summarize_trajectory, jobs=jobs)
        successful = run.successful
        row = {'i': i, 'j': j, 'V0': op_point.V0, 'Omega': op_point.Omega,
               'n_failed': run.n_failed}
        if successful.empty:
            rows.append({**row, 'status': 'failed'})
            continue

        rows.append({
            **row,
            'expected_rop': float(successful['rop'].mean()),
            'expected_efficiency': float(successful['efficiency'].mean()),
            'sigma_vm_mean': float(successful['sigma_vm_max'].mean()),
            'probability': float(
                (successful['sigma_vm_max'] <= uts).sum() / (len(successful) + run.n_failed)),
            'status': 'ok',
        })

    frame = pd.DataFrame(rows)
    for column in ('expected_rop', 'expected_efficiency', 'sigma_vm_mean', 'probability'):
        if column not in frame:
            frame[column] = np.nan

    frame['admissible'] = (frame['status'] == 'ok') & (frame['probability'] >= 1 - p_risk)
    result = WindowResult(window, frame, 'expected_rop')
    optimum = result.optimum
    LOGGER.info('Robust optimum at V0=%.6g m/s, Omega=%.6g rad/s, E[rop]=%.6g m/s',
                optimum['V0'], optimum['Omega'], optimum['expected_rop'])
    return result
