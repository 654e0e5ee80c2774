"""Monte Carlo propagation of the bit-rock uncertainties."""

import dataclasses
import functools
import logging

import numpy as np
import pandas as pd
import scipy.integrate
import tqdm

from drillsim.dynamics.newmark import NewmarkParams
from drillsim.dynamics.simulation import simulate
from drillsim.dynamics.solver import SolverControls
from drillsim.errors import DrillsimError, ParameterError
from drillsim.uq.distributions import PARAMETERS, sample_parameters
from drillsim.utils import parallel_map

LOGGER = logging.getLogger(__name__)

DEFAULT_OBSERVABLES = ('u_bit', 'u_dot_bit', 'theta_x_bit', 'theta_x_dot_bit')
OK = 'ok'
FAILED = 'failed'


def state_norm(times, q):
    """L2 norm in time of the reduced state, ``sqrt(int |q(t)|^2 dt)``."""
    return float(np.sqrt(scipy.integrate.trapezoid(np.sum(q ** 2, axis=1), times)))


def conv_series(norms):
    """Mean-square convergence metric of the first ``k`` realizations, for every ``k``.

    Args:
        norms (numpy.ndarray):
            L2 norms of the realizations in index order.

    Returns:
        numpy.ndarray:
            ``conv(k) = sqrt(sum(norms[:k] ** 2) / k)``.
    """
    norms = np.asarray(norms, dtype=float)
    counts = np.arange(1, len(norms) + 1)
    return np.sqrt(np.cumsum(norms ** 2) / counts)


def tail_relative_change(conv, fraction=0.25):
    """Spread of the last ``fraction`` of a convergence series relative to its last value."""
    if not 0 < fraction <= 1:
        raise ParameterError(f'fraction must satisfy 0 < fraction <= 1, got {fraction}')

    conv = np.asarray(conv, dtype=float)
    if len(conv) == 0:
        return float('nan')

    start = min(len(conv) - 1, int(np.floor(len(conv) * (1 - fraction))))
    tail = conv[start:]
    if tail[-1] == 0:
        return 0.0 if np.all(tail == 0) else float('inf')

    return float((tail.max() - tail.min()) / abs(tail[-1]))


def envelope(samples, lower=2.5, upper=97.5):
    """Sample mean and empirical percentile band of a set of time series.

    Args:
        samples (numpy.ndarray):
            Realizations, shape ``(n_samples, n_times)``.
        lower, upper (float):
            Percentiles of the band.

    Returns:
        tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]:
            Mean, lower and upper bound at every time. The band always contains the mean.
    """
    mean = samples.mean(axis=0)
    low, high = np.percentile(samples, [lower, upper], axis=0)
    return mean, np.minimum(low, mean), np.maximum(high, mean)


def normalized_histogram(values):
    """Histogram density of standardized values with the Freedman-Diaconis bin width.

    Values are shifted to zero mean and scaled to unit standard deviation before binning.

    Returns:
        pandas.DataFrame:
            Columns ``left``, ``right`` and ``density``.
    """
    values = np.asarray(values, dtype=float)
    values = values[np.isfinite(values)]
    if len(values) == 0:
        return pd.DataFrame(columns=['left', 'right', 'density'])

    std = values.std()
    standard = (values - values.mean()) / std if std > 0 else np.zeros_like(values)
    density, edges = np.histogram(standard, bins='fd', density=True)
    return pd.DataFrame({'left': edges[:-1], 'right': edges[1:], 'density': density})


@dataclasses.dataclass(frozen=True)
class RealizationTask:
    """Everything a worker needs to run one realization."""

    reduced: object
    op_point: object
    params: NewmarkParams
    controls: SolverControls
    t0: float
    tf: float
    q_static: np.ndarray = None
    x_section: float = None
    observables: tuple = DEFAULT_OBSERVABLES
    summarize: object = None


@dataclasses.dataclass
class RealizationOutcome:
    """Result of one realization, or the reason it failed."""

    index: int
    draws: dict
    status: str
    norm: float = float('nan')
    times: np.ndarray = None
    series: np.ndarray = None
    summary: dict = dataclasses.field(default_factory=dict)
    message: str = ''


def run_realization(task, index, draws):
    """Simulate realization ``index`` with the bit-rock law ``draws``.

    Failures of the model are reported in the outcome instead of raised.
    """
    reduced = task.reduced
    bit_rock = reduced.model.bit_rock.replace(**{name: draws[name] for name in PARAMETERS})
    try:
        trajectory = simulate(
            reduced, task.op_point, params=task.params, controls=task.controls,
            bit_rock=bit_rock, t0=task.t0, tf=task.tf, q_static=task.q_static)
    except DrillsimError as error:
        return RealizationOutcome(index, draws, FAILED, message=str(error))

    x_section = reduced.mesh.length / 2 if task.x_section is None else task.x_section
    frame = trajectory.to_frame(x_section)
    summary = {}
    if task.summarize is not None:
        summary = task.summarize(trajectory, reduced.model.with_bit_rock(bit_rock))

    return RealizationOutcome(
        index=index,
        draws=draws,
        status=OK,
        norm=state_norm(trajectory.times, trajectory.q),
        times=trajectory.times,
        series=frame[list(task.observables)].to_numpy(),
        summary=summary,
    )


def _evaluate(task, item):
    index, draws = item
    return run_realization(task, index, draws)


class McRun:
    """Results of a Monte Carlo propagation.

    Args:
        stochastic (StochasticBitRock):
            Probabilistic model that produced the draws.
        times (numpy.ndarray):
            Output times shared by the realizations.
        ledger (pandas.DataFrame):
            One row per realization with its draws, status, norm and summary values.
        observables (tuple[str]):
            Names of the recorded time series.
        series (numpy.ndarray):
            Recorded time series of the successful realizations, shape
            ``(n_ok, n_times, n_observables)``.
    """

    def __init__(self, stochastic, times, ledger, observables, series):
        self.stochastic = stochastic
        self.times = np.asarray(times, dtype=float)
        self.ledger = ledger
        self.observables = tuple(observables)
        self.series = series

    @property
    def n_samples(self):
        return len(self.ledger)

    @property
    def successful(self):
        return self.ledger[self.ledger['status'] == OK]

    @property
    def n_failed(self):
        return int((self.ledger['status'] != OK).sum())

    @property
    def conv(self):
        """Convergence metric over the successful realizations in index order."""
        return conv_series(self.successful['norm'].to_numpy())

    def conv_frame(self):
        """Convergence series as a ``pandas.DataFrame`` with columns ``n_s`` and ``conv``."""
        conv = self.conv
        return pd.DataFrame({'n_s': np.arange(1, len(conv) + 1), 'conv': conv})

    def tail_relative_change(self, fraction=0.25):
        return tail_relative_change(self.conv, fraction)

    def observable(self, name):
        """Realizations of one observable, shape ``(n_ok, n_times)``."""
        return self.series[:, :, self.observables.index(name)]

    def envelopes(self, lower=2.5, upper=97.5):
        """Mean and probability band of every observable at every output time.

        Returns:
            pandas.DataFrame:
                Column ``t`` plus ``<name>_mean``, ``<name>_lower`` and ``<name>_upper`` for
                every observable.
        """
        columns = {'t': self.times}
        for name in self.observables:
            mean, low, high = envelope(self.observable(name), lower, upper)
            columns[f'{name}_mean'] = mean
            columns[f'{name}_lower'] = low
            columns[f'{name}_upper'] = high

        return pd.DataFrame(columns)

    def final_pdfs(self):
        """Normalized histograms of the observables at the final time, stacked by name."""
        frames = []
        for name in self.observables:
            frame = normalized_histogram(self.observable(name)[:, -1])
            frame.insert(0, 'quantity', name)
            frames.append(frame)

        return pd.concat(frames, ignore_index=True)

    def scalar_pdfs(self, quantities=None):
        """Normalized histograms of scalar summaries of the realizations, stacked by name."""
        successful = self.successful
        if quantities is None:
            excluded = {'index', 'status', 'message', *PARAMETERS}
            quantities = [column for column in successful.columns if column not in excluded]

        frames = []
        for name in quantities:
            frame = normalized_histogram(successful[name].to_numpy(dtype=float))
            frame.insert(0, 'quantity', name)
            frames.append(frame)

        return pd.concat(frames, ignore_index=True)

    def summary(self, fraction=0.25):
        """Headline numbers of the run."""
        conv = self.conv
        return {
            'n_samples': self.n_samples,
            'n_failed': self.n_failed,
            'conv_final': float(conv[-1]) if len(conv) else None,
            'tail_relative_change': self.tail_relative_change(fraction) if len(conv) else None,
            'stochastic': self.stochastic.to_dict(),
        }


def run_monte_carlo(reduced, stochastic, n_samples, op_point, params=None, controls=None,
                    t0=0.0, tf=10.0, q_static=None, x_section=None,
                    observables=DEFAULT_OBSERVABLES, summarize=None, jobs=1,
                    show_progress=False):
    """Propagate the bit-rock uncertainties through the drilling dynamics.

    Realization ``n`` uses the draws of the random stream ``(stochastic.seed, n)``, so the
    results do not depend on ``jobs``. Realizations whose integration fails are kept in the
    ledger with status ``failed`` and left out of every statistic.

    Args:
        reduced (ReducedSystem):
            Reduced-order model.
        stochastic (StochasticBitRock):
            Probabilistic model of the bit-rock law.
        n_samples (int):
            Number of realizations.
        op_point (OperatingPoint):
            Imposed axial and angular velocities.
        params (NewmarkParams or None):
            Scheme constants.
        controls (SolverControls or None):
            Fixed-point controls.
        t0, tf (float):
            Time interval in s.
        q_static (numpy.ndarray or None):
            Static equilibrium used as initial configuration.
        x_section (float or None):
            Cross section of the lateral observables. Defaults to midspan.
        observables (tuple[str]):
            Columns of ``Trajectory.to_frame`` recorded for every realization.
        summarize (callable or None):
            Called with the trajectory and the model of a realization, returns a dict of
            scalar values added to the ledger. It must be picklable when ``jobs > 1``.
        jobs (int):
            Number of worker processes.
        show_progress (bool):
            Whether to show a progress bar.

    Returns:
        McRun
    """
    if n_samples < 1:
        raise ParameterError(f'n_samples must be >= 1, got {n_samples}')
    if jobs < 1:
        raise ParameterError(f'jobs must be >= 1, got {jobs}')

    task = RealizationTask(
        reduced=reduced,
        op_point=op_point,
        params=params or NewmarkParams(),
        controls=controls or SolverControls(),
        t0=t0,
        tf=tf,
        q_static=q_static,
        x_section=x_section,
        observables=tuple(observables),
        summarize=summarize,
    )
    draws = sample_parameters(stochastic, range(n_samples))
    items = [
        (int(row['index']), {name: float(row[name]) for name in PARAMETERS})
        for _, row in draws.iterrows()
    ]

    worker = functools.partial(_evaluate, task)
    outcomes = []
    iterator = tqdm.tqdm(
        parallel_map(worker, items, jobs), total=n_samples, disable=not show_progress)
    for outcome in iterator:
        if outcome.status != OK:
            LOGGER.warning('Realization %s failed: %s', outcome.index, outcome.message)

        outcomes.append(outcome)

    outcomes.sort(key=lambda outcome: outcome.index)
    rows = [
        {
            'index': outcome.index,
            **outcome.draws,
            'norm': outcome.norm,
            **outcome.summary,
            'status': outcome.status,
            'message': outcome.message,
        }
        for outcome in outcomes
    ]
    ledger = pd.DataFrame(rows)
    ok = [outcome for outcome in outcomes if outcome.status == OK]
    n_times = len(ok[0].times) if ok else 0
    times = ok[0].times if ok else np.array([])
    series = np.stack([outcome.series for outcome in ok]) if ok else np.empty(
        (0, n_times, len(task.observables)))

    LOGGER.info(
        'Monte Carlo finished: %s realizations, %s failed', n_samples, n_samples - len(ok))
    return McRun(stochastic, times, ledger, task.observables, series)
