"""Command line interface of drillsim.

Every run kind is a subcommand. A run writes its data tables and a ``manifest.json`` in the
output directory. Exit codes: 0 success, 1 unexpected error, 2 configuration error,
3 numerical failure.
"""

import argparse
import logging
import math
import os
import sys
import time

import numpy as np
import pandas as pd

from drillsim.analysis.optimization import summarize_trajectory
from drillsim.analysis.performance import power_balance, shock_counts, shock_series
from drillsim.analysis.stress import StressRecovery
from drillsim.config import KINDS, RunConfig
from drillsim.drillstring import Drillstring
from drillsim.errors import (
    ConfigError, InfeasibleWindowError, NumericalError, ParameterError)
from drillsim.fem.assembly import dump_matrix
from drillsim.fem.mesh import FIELDS
from drillsim.reduction.modal import constrained_frequencies, modal_density
from drillsim.utils import get_package_versions, write_json, write_table

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)
LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

DESCRIPTIONS = {
    'modal': 'Free-free modes of the column and the reduced basis.',
    'static': 'Static equilibrium of the column under gravity.',
    'simulate': 'Nonlinear drilling dynamics at the configured operating point.',
    'mc': 'Monte Carlo propagation of the bit-rock uncertainties.',
    'optimize': 'Deterministic search of the fastest admissible operating point.',
    'optimize-robust': 'Search under the probabilistic stress constraint.',
    'psd': 'Simulation followed by power spectral densities and shock maps.',
    'validate': 'Check the configuration without running anything.',
}


class Artifacts:
    """Writer of the data tables of one run.

    Args:
        directory (str):
            Output directory, created if needed.
        config_hash (str):
            Hash written in the header of every table.
    """

    def __init__(self, directory, config_hash):
        try:
            os.makedirs(directory, exist_ok=True)
        except OSError as error:
            raise ConfigError(f'output: cannot create {directory!r}: {error}') from error

        if not os.access(directory, os.W_OK):
            raise ConfigError(f'output: {directory!r} is not writable')

        self.directory = directory
        self.config_hash = config_hash
        self.written = []

    def path(self, name):
        return os.path.join(self.directory, name)

    def table(self, name, frame):
        write_table(self.path(name), frame, os.path.splitext(name)[0], self.config_hash)
        self.written.append(name)

    def matrix(self, name, matrix):
        dump_matrix(self.path(name), matrix)
        self.written.append(name)


def _clean(value):
    """Manifest-friendly copy of ``value``: builtins only and ``None`` for non finite floats."""
    if isinstance(value, dict):
        return {str(key): _clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(item) for item in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None

    return value


def _run_modal(drillstring, artifacts, dump_matrices=False, show_progress=False):
    reduced = drillstring.reduced
    table = reduced.table
    artifacts.table('modes.csv', table.to_frame(selected=reduced.selected))
    artifacts.table('modal_density.csv', modal_density(table))
    frequencies = constrained_frequencies(reduced)
    artifacts.table('frequencies.csv', pd.DataFrame({'f_n': frequencies}))
    if dump_matrices:
        artifacts.matrix('M.txt', drillstring.system.M)
        artifacts.matrix('K.txt', drillstring.system.K)

    classes = pd.Series(reduced.classes).value_counts().sort_index()
    return {
        'n_dofs': drillstring.mesh.n_dofs,
        'n_elem': drillstring.mesh.n_elem,
        'n_modes': len(table),
        'n_red': reduced.n_red,
        'selected_classes': classes.to_dict(),
    }


def _run_static(drillstring, artifacts, dump_matrices=False, show_progress=False):
    result = drillstring.equilibrium(show_progress=show_progress)
    mesh = drillstring.mesh
    columns = {'node': np.arange(mesh.n_nodes), 'x': mesh.node_coords}
    for name in FIELDS:
        columns[name] = mesh.nodal_field(result.q_full, name)

    frame = pd.DataFrame(columns)
    frame['r'] = np.hypot(frame['v'], frame['w'])
    frame['in_contact'] = (frame['r'] > drillstring.model.gap).astype(int)
    artifacts.table('static.csv', frame)
    return {
        'relaxation_time': result.time,
        'max_radial_displacement': result.max_radial_displacement(mesh),
        'gap': drillstring.model.gap,
        'n_contact': int(frame['in_contact'].sum()),
        'lambda': result.lam.tolist(),
    }


def _trajectory_artifacts(drillstring, trajectory, artifacts):
    artifacts.table('trajectory.csv', trajectory.to_frame(drillstring.config.x_section()))
    artifacts.table('shocks.csv', trajectory.shocks.to_frame())
    artifacts.table('power.csv', power_balance(trajectory))

    recovery = StressRecovery(drillstring.reduced)
    history = recovery.max_history(trajectory.q)
    worst = int(np.argmax(history))
    artifacts.table('stress_history.csv', pd.DataFrame({
        't': trajectory.times, 'sigma_vm_max': history}))
    artifacts.table('stress_field.csv', recovery.field(
        trajectory.q[worst], t=float(trajectory.times[worst])).to_frame())

    summary = summarize_trajectory(trajectory, drillstring.model)
    summary.update({
        't_sigma_vm_max': float(trajectory.times[worst]),
        'n_shocks': len(trajectory.shocks.events),
        'stats': trajectory.stats.to_dict(),
    })
    return summary


def _run_simulate(drillstring, artifacts, dump_matrices=False, show_progress=False):
    trajectory = drillstring.simulate(show_progress=show_progress)
    return _trajectory_artifacts(drillstring, trajectory, artifacts)


def _run_psd(drillstring, artifacts, dump_matrices=False, show_progress=False):
    trajectory = drillstring.simulate(show_progress=show_progress)
    summary = _trajectory_artifacts(drillstring, trajectory, artifacts)
    artifacts.table('shock_series.csv', shock_series(trajectory))
    artifacts.table('shock_counts.csv', shock_counts(trajectory))
    frequencies = constrained_frequencies(drillstring.reduced)
    artifacts.table('frequencies.csv', pd.DataFrame({'f_n': frequencies}))

    dominant = {}
    for name, estimate in drillstring.spectra(trajectory).items():
        artifacts.table(f'psd_{name}.csv', estimate.to_frame())
        peak = estimate.dominant_frequency(min_frequency=estimate.resolution / 2)
        nearest = frequencies[np.argmin(np.abs(frequencies - peak))]
        dominant[name] = {'peak': peak, 'nearest_natural_frequency': float(nearest)}

    summary['dominant_frequencies'] = dominant
    return summary


def _run_mc(drillstring, artifacts, dump_matrices=False, show_progress=False):
    run = drillstring.monte_carlo(show_progress=show_progress)
    artifacts.table('ledger.csv', run.ledger)
    if run.successful.empty:
        raise NumericalError('Every realization failed', stage='monte_carlo')

    artifacts.table('conv.csv', run.conv_frame())
    artifacts.table('envelopes.csv', run.envelopes())
    artifacts.table('final_pdfs.csv', run.final_pdfs())
    artifacts.table('scalar_pdfs.csv', run.scalar_pdfs())
    return run.summary(drillstring.config['uncertainty']['tail_fraction'])


def _window_artifacts(result, artifacts, columns):
    artifacts.table('window.csv', result.frame)
    artifacts.table('contours.csv', result.contours(columns))


def _run_window(search, columns):
    def runner(drillstring, artifacts, dump_matrices=False, show_progress=False):
        try:
            result = search(drillstring, show_progress)
        except InfeasibleWindowError as error:
            LOGGER.warning('%s', error)
            _window_artifacts(error.result, artifacts, columns)
            return {'feasible': False, 'window': error.result.window.to_dict()}

        _window_artifacts(result, artifacts, columns)
        return {'feasible': True, **result.summary()}

    return runner


RUNNERS = {
    'modal': _run_modal,
    'static': _run_static,
    'simulate': _run_simulate,
    'psd': _run_psd,
    'mc': _run_mc,
    'optimize': _run_window(
        lambda drillstring, progress: drillstring.optimize(show_progress=progress),
        ['rop', 'efficiency', 'sigma_vm_max', 'margin']),
    'optimize-robust': _run_window(
        lambda drillstring, progress: drillstring.optimize_robust(show_progress=progress),
        ['expected_rop', 'expected_efficiency', 'sigma_vm_mean', 'probability']),
}


def run(config, dump_matrices=False, show_progress=False):
    """Execute the pipeline of the configured kind and write its artifacts.

    Args:
        config (RunConfig):
            Valid configuration.
        dump_matrices (bool):
            Whether the ``modal`` kind also writes the mass and stiffness triplets.
        show_progress (bool):
            Whether to show progress bars.

    Returns:
        dict:
            The manifest written to ``manifest.json``.
    """
    start = time.perf_counter()
    drillstring = Drillstring(config)
    artifacts = Artifacts(config.output, config.config_hash())
    LOGGER.info('Running %s into %s', config.kind, config.output)
    summary = RUNNERS[config.kind](
        drillstring, artifacts, dump_matrices=dump_matrices, show_progress=show_progress)

    manifest = _clean({
        'kind': config.kind,
        'config': config.to_dict(),
        'seed': config.seed,
        'config_hash': config.config_hash(),
        'versions': get_package_versions(),
        'wall_time': time.perf_counter() - start,
        'artifacts': artifacts.written,
        'summary': summary,
    })
    write_json(artifacts.path('manifest.json'), manifest)
    LOGGER.info('%s finished in %.1f s', config.kind, manifest['wall_time'])
    return manifest


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-c', '--config', help='JSON configuration file.')
    common.add_argument('-j', '--jobs', type=int, help='Number of worker processes.')
    common.add_argument('-s', '--seed', type=int, help='Seed of every random draw.')
    common.add_argument('-o', '--out', help='Output directory.')
    common.add_argument('--set', action='append', default=[], metavar='BLOCK.KEY=VALUE',
                        help='Override one configuration value, parsed as JSON.')
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='Be verbose. Use -vv for increased verbosity.')
    common.add_argument('--progress', action='store_true', help='Show progress bars.')

    parser = argparse.ArgumentParser(
        prog='drillsim', description='Nonlinear stochastic dynamics of a drillstring.')
    subparsers = parser.add_subparsers(dest='command', metavar='<kind>')
    subparsers.required = True
    for command in (*KINDS, 'validate'):
        subparser = subparsers.add_parser(
            command, parents=[common], help=DESCRIPTIONS[command],
            description=DESCRIPTIONS[command])
        if command == 'modal':
            subparser.add_argument('--dump-matrices', action='store_true',
                                   help='Also write M and K as i j value triplets.')

    return parser


def _setup_logging(verbosity):
    level = LOG_LEVELS[min(verbosity, len(LOG_LEVELS) - 1)]
    logging.basicConfig(level=level, format=LOG_FORMAT)


def load_config(args):
    """Configuration of the command line: file, then ``--set`` overrides, then flags."""
    config = RunConfig.from_json(args.config) if args.config else RunConfig()
    kind = args.command if args.command != 'validate' else None
    return config.with_overrides(
        args.set, kind=kind, seed=args.seed, jobs=args.jobs, output=args.out)


def _report_config_error(error, source):
    location = source or 'configuration'
    if error.line is not None:
        location = f'{location}:{error.line}'

    print(f'{location}: invalid configuration', file=sys.stderr)
    for violation in error.errors:
        print(f' - {violation}', file=sys.stderr)


def main(argv=None):
    """Entry point of the ``drillsim`` command.

    Returns:
        int:
            Exit code.
    """
    args = _parser().parse_args(argv)
    _setup_logging(args.verbose)

    try:
        config = load_config(args)
        if args.command == 'validate':
            config.check()
            print('Configuration is valid')
            return EXIT_OK

        config.check()
        verbosity = max(args.verbose, config.verbosity)
        logging.getLogger().setLevel(LOG_LEVELS[min(verbosity, len(LOG_LEVELS) - 1)])

        manifest = run(config, dump_matrices=getattr(args, 'dump_matrices', False),
                       show_progress=args.progress)
    except ConfigError as error:
        _report_config_error(error, args.config)
        return EXIT_CONFIG
    except ParameterError as error:
        _report_config_error(ConfigError(str(error)), args.config)
        return EXIT_CONFIG
    except NumericalError as error:
        print(f'Numerical failure in stage {error.stage}: {error}', file=sys.stderr)
        return EXIT_NUMERICAL
    except Exception:
        LOGGER.exception('Unexpected error')
        return EXIT_FAILURE

    print(f'{manifest["kind"]} finished: {os.path.join(config.output, "manifest.json")}')
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
