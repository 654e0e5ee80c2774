"""Run configuration shared by every pipeline of the command line."""

import copy
import hashlib
import json
import logging
import math

from drillsim.analysis.optimization import UTS, OperatingWindow
from drillsim.analysis.spectral import SmoothingControls
from drillsim.dynamics.newmark import NewmarkParams
from drillsim.dynamics.simulation import StaticControls
from drillsim.dynamics.solver import SolverControls
from drillsim.errors import ConfigError, DrillsimError
from drillsim.model import (
    BeamModel, BitRockParams, ContactParams, GeometryParams, MaterialParams, OperatingPoint,
    default_element_count)
from drillsim.reduction.modal import SelectionRule
from drillsim.uq.distributions import StochasticBitRock
from drillsim.uq.monte_carlo import DEFAULT_OBSERVABLES

LOGGER = logging.getLogger(__name__)

KINDS = ('modal', 'static', 'simulate', 'mc', 'optimize', 'optimize-robust', 'psd')
RUN_ONLY = ('output', 'verbosity', 'jobs')
OBSERVABLES = (
    'u_bit', 'u_dot_bit', 'theta_x_bit', 'theta_x_dot_bit', 'v', 'w', 'v_dot', 'w_dot',
    'lambda_1', 'lambda_4', 'n_contact',
)
PARAMETER_BLOCKS = {
    'material': MaterialParams,
    'geometry': GeometryParams,
    'contact': ContactParams,
    'bit_rock': BitRockParams,
    'operating_point': OperatingPoint,
}


def _defaults():
    newmark = NewmarkParams()
    return {
        'kind': 'simulate',
        'seed': 0,
        'output': 'output',
        'verbosity': 0,
        'jobs': 1,
        **{name: block().to_dict() for name, block in PARAMETER_BLOCKS.items()},
        'mesh': {'n_elem': None},
        'reduction': SelectionRule().to_dict(),
        'integration': {
            't0': 0.0,
            'tf': 10.0,
            'from_static': True,
            'alpha': newmark.alpha,
            'dt_nominal': newmark.dt_nominal,
            'refine_factor': newmark.refine_factor,
            'refine_trigger': newmark.refine_trigger,
            'floor_factor': newmark.floor_factor,
        },
        'solver': SolverControls().to_dict(),
        'static': StaticControls().to_dict(),
        'uncertainty': {
            'delta_alpha': 0.005,
            'delta_Gamma': 0.01,
            'delta_mu': 0.005,
            'n_samples': 128,
            'observables': list(DEFAULT_OBSERVABLES),
            'tail_fraction': 0.25,
        },
        'optimization': {
            **OperatingWindow().to_dict(),
            'uts': UTS,
            'p_risk': 0.1,
            'n_samples': 32,
        },
        'analysis': {
            **SmoothingControls().to_dict(),
            'detrend': False,
            'x_section': None,
        },
    }


DEFAULTS = _defaults()


def deep_merge(base, changes):
    """Recursively update a copy of ``base`` with ``changes``."""
    merged = copy.deepcopy(base)
    for key, value in changes.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)

    return merged


def _is_integer(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _block_violations(name, error):
    """Prefix the violations of a block error with the field path."""
    message = str(error)
    lines = [line[3:] for line in message.splitlines() if line.startswith(' - ')]
    violations = []
    for violation in lines or [message]:
        field = violation.split(' ', 1)[0]
        if field in DEFAULTS[name]:
            violations.append(f'{name}.{field}: {violation}')
        else:
            violations.append(f'{name}: {violation}')

    return violations


class RunConfig:
    """Nested configuration of one run.

    Missing blocks and keys take the default values, so an empty document is a complete
    configuration of the reference column.

    Args:
        config (dict or None):
            Configuration document.
        source (str or None):
            Text of the JSON file the document was read from, used to locate keys.
    """

    def __init__(self, config=None, source=None):
        config = config or {}
        if not isinstance(config, dict):
            raise ConfigError(f'The configuration must be a JSON object, got {config!r}')

        self._raw = copy.deepcopy(config)
        self._source = source
        self.data = deep_merge(DEFAULTS, config)

    def __getitem__(self, name):
        return self.data[name]

    @property
    def kind(self):
        return self.data['kind']

    @property
    def seed(self):
        return self.data['seed']

    @property
    def output(self):
        return self.data['output']

    @property
    def jobs(self):
        return self.data['jobs']

    @property
    def verbosity(self):
        return self.data['verbosity']

    # Serialization

    def to_dict(self):
        """Get the full configuration, defaults included, as a dict."""
        return copy.deepcopy(self.data)

    @classmethod
    def from_dict(cls, config):
        """Load a configuration from a dict."""
        return cls(config)

    def to_json(self, path):
        """Dump the full configuration into a JSON file."""
        with open(path, 'w', encoding='utf-8') as out_file:
            json.dump(self.to_dict(), out_file, indent=4, sort_keys=True)

    @classmethod
    def from_json(cls, path):
        """Load a configuration from a JSON file.

        Raises:
            ConfigError:
                If the file is not valid JSON, with the line of the syntax error.
        """
        with open(path, 'r', encoding='utf-8') as in_file:
            text = in_file.read()

        if not text.strip():
            return cls({}, source=text)

        try:
            config = json.loads(text)
        except json.JSONDecodeError as error:
            raise ConfigError(f'{path}: {error.msg}', line=error.lineno) from error

        return cls(config, source=text)

    def config_hash(self):
        """SHA-256 of the canonical JSON of the settings that change the results.

        ``output``, ``verbosity`` and ``jobs`` are left out.
        """
        content = {key: value for key, value in self.data.items() if key not in RUN_ONLY}
        canonical = json.dumps(content, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

    def with_overrides(self, assignments=(), **settings):
        """Return a copy of this configuration with some values replaced.

        Args:
            assignments (list[str]):
                ``block.key=value`` strings; the value is parsed as JSON and kept as a string
                when it is not valid JSON.
            **settings:
                Top-level settings such as ``seed`` or ``jobs``; ``None`` values are ignored.

        Raises:
            ConfigError:
                If an assignment is malformed.
        """
        changes = {}
        errors = []
        for assignment in assignments:
            path, separator, text = assignment.partition('=')
            if not separator or not path:
                errors.append(f'{assignment!r}: overrides must look like block.key=value')
                continue

            keys = path.strip().split('.')
            target = changes
            for key in keys[:-1]:
                target = target.setdefault(key, {})

            target[keys[-1]] = _parse_value(text.strip())

        if errors:
            raise ConfigError(errors)

        changes.update({name: value for name, value in settings.items() if value is not None})
        return RunConfig(deep_merge(self._raw, changes), source=self._source)

    # Validation

    def locate(self, path):
        """Line of the source file where the key of ``path`` appears, if known."""
        if self._source is None:
            return None

        start = 0
        for key in path.split('.'):
            index = self._source.find(f'"{key}"', start)
            if index < 0:
                return None

            start = index

        return self._source.count('\n', 0, start) + 1

    def _setting_violations(self):
        violations = []
        if self.kind not in KINDS:
            violations.append(f'kind: must be one of {", ".join(KINDS)}, got {self.kind!r}')
        if not _is_integer(self.seed) or self.seed < 0:
            violations.append(f'seed: must be a non-negative integer, got {self.seed!r}')
        if not _is_integer(self.jobs) or self.jobs < 1:
            violations.append(f'jobs: must be a positive integer, got {self.jobs!r}')
        if not _is_integer(self.verbosity) or self.verbosity < 0:
            violations.append(f'verbosity: must be a non-negative integer, got {self.verbosity!r}')
        if not isinstance(self.output, str) or not self.output:
            violations.append('output: must be a non-empty path')

        return violations

    def _unknown_keys(self):
        violations = []
        for name, value in self._raw.items():
            if name not in DEFAULTS:
                violations.append(f'{name}: unknown key')
            elif isinstance(DEFAULTS[name], dict):
                if not isinstance(value, dict):
                    violations.append(f'{name}: must be an object')
                    continue

                violations.extend(
                    f'{name}.{key}: unknown key'
                    for key in value
                    if key not in DEFAULTS[name]
                )

        return violations

    def _check_block(self, name, builder):
        try:
            builder()
        except (DrillsimError, TypeError, ValueError) as error:
            return _block_violations(name, error)

        return []

    def validate(self):
        """Check the whole configuration without running anything.

        Returns:
            list[str]:
                Every violation found, each one starting with the field path.
        """
        violations = self._unknown_keys()
        if violations:
            return violations

        violations = self._setting_violations()
        builders = {
            **{name: getattr(self, name) for name in PARAMETER_BLOCKS},
            'mesh': self.n_elem,
            'reduction': self.selection_rule,
            'integration': self.newmark,
            'solver': self.solver,
            'static': self.static,
            'uncertainty': self.stochastic,
            'optimization': self.window,
            'analysis': self.smoothing,
        }
        for name, builder in builders.items():
            violations.extend(self._check_block(name, builder))

        try:
            violations.extend(self._run_violations())
        except TypeError as error:
            violations.append(f'settings: value of the wrong type, {error}')

        return violations

    def _run_violations(self):
        violations = []
        integration = self.data['integration']
        t0, tf = integration['t0'], integration['tf']
        if not isinstance(integration['from_static'], bool):
            violations.append('integration.from_static: must be true or false')
        if not (isinstance(t0, (int, float)) and isinstance(tf, (int, float)) and tf > t0):
            violations.append(f'integration.tf: must be greater than t0, got t0={t0}, tf={tf}')

        uncertainty = self.data['uncertainty']
        if not _is_integer(uncertainty['n_samples']) or uncertainty['n_samples'] < 1:
            violations.append('uncertainty.n_samples: must be a positive integer')
        if not 0 < uncertainty['tail_fraction'] <= 1:
            violations.append('uncertainty.tail_fraction: must satisfy 0 < fraction <= 1')
        unknown = sorted(set(uncertainty['observables']) - set(OBSERVABLES))
        if unknown:
            violations.append(f'uncertainty.observables: unknown observables {unknown}')

        optimization = self.data['optimization']
        if not optimization['uts'] > 0:
            violations.append('optimization.uts: must be > 0')
        if not 0 < optimization['p_risk'] < 1:
            violations.append('optimization.p_risk: must satisfy 0 < p_risk < 1')
        if not _is_integer(optimization['n_samples']) or optimization['n_samples'] < 1:
            violations.append('optimization.n_samples: must be a positive integer')

        x_section = self.data['analysis']['x_section']
        length = self.data['geometry']['L']
        if x_section is not None and not 0 <= x_section <= length:
            violations.append(f'analysis.x_section: must lie in [0, L], got {x_section}')

        return violations

    def check(self):
        """Raise if the configuration is not valid.

        Raises:
            ConfigError:
                Listing every violation, with the line of the first one when read from a file.
        """
        violations = self.validate()
        if violations:
            path = violations[0].split(':', 1)[0]
            raise ConfigError(violations, line=self.locate(path))

    # Builders of the domain objects

    def material(self):
        return MaterialParams.from_dict(self.data['material'])

    def geometry(self):
        return GeometryParams.from_dict(self.data['geometry'])

    def contact(self):
        return ContactParams.from_dict(self.data['contact'])

    def bit_rock(self):
        return BitRockParams.from_dict(self.data['bit_rock'])

    def operating_point(self):
        return OperatingPoint.from_dict(self.data['operating_point'])

    def model(self):
        return BeamModel(self.material(), self.geometry(), self.contact(), self.bit_rock())

    def n_elem(self):
        """Number of elements, from the mesh block or the default resolution of the length."""
        n_elem = self.data['mesh']['n_elem']
        if n_elem is None:
            return default_element_count(self.data['geometry']['L'])
        if not _is_integer(n_elem) or n_elem < 2:
            raise ConfigError(f'n_elem must be an integer >= 2, got {n_elem!r}')

        return n_elem

    def selection_rule(self):
        """Mode selection of the reduced basis."""
        reduction = dict(self.data['reduction'])
        violations = []
        if not reduction['band_max'] > 0:
            violations.append('band_max must be > 0')
        if not reduction['flexural_cutoff'] >= 0:
            violations.append('flexural_cutoff must be >= 0')
        if not 0 <= reduction['tolerance'] < 1:
            violations.append('tolerance must satisfy 0 <= tolerance < 1')
        dimension = reduction['reduced_dimension']
        if dimension is not None and (not _is_integer(dimension) or dimension < 1):
            violations.append('reduced_dimension must be a positive integer')

        if violations:
            raise ConfigError(violations)

        return SelectionRule(**reduction)

    def newmark(self):
        integration = {
            key: value
            for key, value in self.data['integration'].items()
            if key not in ('t0', 'tf', 'from_static')
        }
        return NewmarkParams(**integration)

    def solver(self):
        return SolverControls(**self.data['solver'])

    def static(self):
        return StaticControls(**self.data['static'])

    def stochastic(self):
        """Probabilistic bit-rock law centred on the ``bit_rock`` block."""
        uncertainty = self.data['uncertainty']
        return StochasticBitRock.around(
            self.bit_rock(),
            delta_alpha=uncertainty['delta_alpha'],
            delta_Gamma=uncertainty['delta_Gamma'],
            delta_mu=uncertainty['delta_mu'],
            seed=self.seed,
        )

    def window(self):
        fields = ('V0_min', 'V0_max', 'Omega_min', 'Omega_max', 'n_V0', 'n_Omega')
        return OperatingWindow(**{name: self.data['optimization'][name] for name in fields})

    def smoothing(self):
        analysis = self.data['analysis']
        return SmoothingControls(window=analysis['window'], order=analysis['order'])

    def x_section(self):
        """Abscissa of the exported cross section, mid-length by default."""
        x_section = self.data['analysis']['x_section']
        return self.data['geometry']['L'] / 2 if x_section is None else x_section

    def time_interval(self):
        integration = self.data['integration']
        return integration['t0'], integration['tf']

    def from_static(self):
        return self.data['integration']['from_static']

    def describe(self):
        """Short description of the column of this configuration."""
        length = self.data['geometry']['L']
        op_point = self.data['operating_point']
        return (
            f'L={length:g} m, V0={op_point["V0"]:.6g} m/s, '
            f'Omega={op_point["Omega"] / (2 * math.pi):.4g} rev/s'
        )
