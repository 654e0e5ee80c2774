"""Main drillsim module."""

import logging
import pickle

from drillsim.analysis.optimization import (
    optimize_deterministic, optimize_robust, summarize_trajectory)
from drillsim.analysis.spectral import psd, uniform_part
from drillsim.config import RunConfig
from drillsim.dynamics.simulation import simulate, static_equilibrium
from drillsim.fem.assembly import assemble_constant_system
from drillsim.fem.mesh import build_mesh
from drillsim.reduction.modal import modal_analysis
from drillsim.uq.monte_carlo import run_monte_carlo
from drillsim.utils import get_package_versions, throw_version_mismatch_warning

LOGGER = logging.getLogger(__name__)

SPECTRA = ('u_dot_bit', 'theta_x_dot_bit', 'v_dot', 'w_dot', 'n_contact')


class Drillstring:
    """Drillstring model and its pipelines, built from a run configuration.

    The operators, the reduced-order model and the static equilibrium are computed on first
    use and reused by every later run.

    Args:
        config (RunConfig or dict or None):
            Run configuration. Defaults to the reference column.
    """

    _system = None
    _reduced = None
    _static = None

    def __init__(self, config=None):
        if not isinstance(config, RunConfig):
            config = RunConfig(config)

        config.check()
        self.config = config
        self.model = config.model()
        self.mesh = build_mesh(self.model.geometry, config.n_elem())

    @property
    def system(self):
        """Constant operators of the full model."""
        if self._system is None:
            self._system = assemble_constant_system(self.mesh, self.model)

        return self._system

    @property
    def reduced(self):
        """Reduced-order model."""
        if self._reduced is None:
            self._reduced = modal_analysis(self.system, self.config.selection_rule())

        return self._reduced

    def equilibrium(self, show_progress=False):
        """Static equilibrium of the column under gravity.

        Returns:
            StaticResult
        """
        if self._static is None:
            self._static = static_equilibrium(
                self.reduced, params=self.config.newmark(), controls=self.config.solver(),
                static=self.config.static(), show_progress=show_progress)

        return self._static

    def initial_configuration(self, show_progress=False):
        """Reduced coordinates the drilling runs start from, ``None`` for the straight column."""
        if not self.config.from_static():
            return None

        return self.equilibrium(show_progress=show_progress).q_r

    def _run_arguments(self):
        t0, tf = self.config.time_interval()
        return {
            'params': self.config.newmark(),
            'controls': self.config.solver(),
            't0': t0,
            'tf': tf,
            'q_static': self.initial_configuration(),
        }

    def simulate(self, op_point=None, bit_rock=None, show_progress=False):
        """Nonlinear drilling dynamics at one operating point.

        Args:
            op_point (OperatingPoint or None):
                Imposed velocities. Defaults to the configured operating point.
            bit_rock (BitRockParams or None):
                Bit-rock law of the run. Defaults to the configured law.
            show_progress (bool):
                Whether to show a progress bar.

        Returns:
            Trajectory
        """
        op_point = op_point or self.config.operating_point()
        LOGGER.info('Simulating %s', self.config.describe())
        return simulate(
            self.reduced, op_point, bit_rock=bit_rock, show_progress=show_progress,
            **self._run_arguments())

    def monte_carlo(self, n_samples=None, show_progress=False):
        """Propagate the bit-rock uncertainties at the configured operating point.

        Returns:
            McRun
        """
        uncertainty = self.config['uncertainty']
        return run_monte_carlo(
            self.reduced,
            self.config.stochastic(),
            n_samples or uncertainty['n_samples'],
            self.config.operating_point(),
            x_section=self.config.x_section(),
            observables=tuple(uncertainty['observables']),
            summarize=summarize_trajectory,
            jobs=self.config.jobs,
            show_progress=show_progress,
            **self._run_arguments(),
        )

    def optimize(self, show_progress=False):
        """Deterministic grid search of the configured operating window.

        Returns:
            WindowResult
        """
        optimization = self.config['optimization']
        return optimize_deterministic(
            self.reduced, self.config.window(), uts=optimization['uts'],
            jobs=self.config.jobs, show_progress=show_progress, **self._run_arguments())

    def optimize_robust(self, show_progress=False):
        """Grid search under the probabilistic stress constraint.

        Returns:
            WindowResult
        """
        optimization = self.config['optimization']
        return optimize_robust(
            self.reduced, self.config.stochastic(), optimization['n_samples'],
            self.config.window(), p_risk=optimization['p_risk'], uts=optimization['uts'],
            jobs=self.config.jobs, show_progress=show_progress, **self._run_arguments())

    def spectra(self, trajectory):
        """Power spectral densities of the observables of a run.

        The bit velocities, the lateral velocities of the configured section and the number
        of nodes in contact are analysed.

        Returns:
            dict[str, PsdEstimate]
        """
        frame = trajectory.to_frame(self.config.x_section())
        smoothing = self.config.smoothing()
        detrend = self.config['analysis']['detrend']
        spectra = {}
        for name in SPECTRA:
            times, signal = uniform_part(frame['t'], frame[name])
            spectra[name] = psd(times, signal, smoothing=smoothing, detrend=detrend)

        return spectra

    def save(self, path):
        """Save this instance, with the computed models, to the given path using pickle.

        Args:
            path (str):
                Path where the instance will be serialized.
        """
        self._package_versions = get_package_versions()

        with open(path, 'wb') as output:
            pickle.dump(self, output)

    @classmethod
    def load(cls, path):
        """Load an instance from a given path.

        Args:
            path (str):
                Path from which to load the instance.
        """
        with open(path, 'rb') as f:
            drillstring = pickle.load(f)
            throw_version_mismatch_warning(getattr(drillstring, '_package_versions', None))

            return drillstring
