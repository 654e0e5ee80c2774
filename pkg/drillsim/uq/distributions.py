"""Maximum-entropy laws of the bit-rock interface parameters."""

import dataclasses
import logging
import math

import numpy as np
import pandas as pd
from copulas import get_qualified_name
from copulas.univariate import BetaUnivariate, GammaUnivariate, Univariate

from drillsim.errors import ParameterError
from drillsim.model import BitRockParams
from drillsim.model.params import _ParameterBlock

LOGGER = logging.getLogger(__name__)

MAX_GAMMA_DISPERSION = 1.0 / math.sqrt(2.0)
PARAMETERS = ('alpha_BR', 'Gamma_BR', 'mu_BR')


def _gamma_violations(name, mean, delta):
    violations = []
    if not mean > 0:
        violations.append(f'm_{name} must be > 0')
    if not 0 <= delta < MAX_GAMMA_DISPERSION:
        violations.append(f'delta_{name} must satisfy 0 <= delta < 1/sqrt(2), got {delta}')

    return violations


def _beta_violations(name, mean, delta):
    if not 0 < mean < 1:
        return [f'm_{name} must satisfy 0 < m < 1']
    if delta < 0:
        return [f'delta_{name} must be >= 0']
    if delta > 0 and not delta ** 2 < (1 - mean) / mean:
        return [f'delta_{name}={delta} is too large for m_{name}={mean}: the beta shape '
                'parameters must be > 0']

    return []


def gamma_distribution(mean, delta):
    """Gamma law with the given mean and dispersion as a ``copulas`` univariate model.

    The shape is ``1 / delta^2`` and the scale ``delta^2 mean``.

    Args:
        mean (float):
            Mean value, > 0.
        delta (float):
            Dispersion, ratio of standard deviation to mean, in ``(0, 1/sqrt(2))``.

    Returns:
        copulas.univariate.GammaUnivariate
    """
    violations = _gamma_violations('gamma', mean, delta)
    if delta == 0:
        violations.append('delta_gamma must be > 0')
    if violations:
        raise ParameterError.from_violations('gamma law', violations)

    return Univariate.from_dict({
        'type': get_qualified_name(GammaUnivariate),
        'a': 1.0 / delta ** 2,
        'loc': 0.0,
        'scale': delta ** 2 * mean,
    })


def gamma_pdf(x, mean, delta):
    """Density of the gamma law with mean ``mean`` and dispersion ``delta``.

    Args:
        x (float or numpy.ndarray):
            Points where the density is evaluated.
        mean (float):
            Mean value, > 0.
        delta (float):
            Dispersion in ``(0, 1/sqrt(2))``.

    Returns:
        numpy.ndarray:
            Density, zero for ``x <= 0``.
    """
    x = np.asarray(x, dtype=float)
    density = gamma_distribution(mean, delta).probability_density(np.maximum(x, 0.0))
    return np.where(x > 0, density, 0.0)


def beta_shape_params(mean, delta):
    """Shape parameters of the beta law with the given mean and dispersion.

    ``a = (mean / delta^2) (1 / mean - delta^2 - 1)`` and ``b = a (1 / mean - 1)``.

    Returns:
        tuple[float, float]

    Raises:
        ParameterError:
            If the mean is outside ``(0, 1)`` or the dispersion gives non-positive shapes.
    """
    violations = _beta_violations('beta', mean, delta)
    if delta == 0:
        violations.append('delta_beta must be > 0')
    if violations:
        raise ParameterError.from_violations('beta law', violations)

    a = mean / delta ** 2 * (1 / mean - delta ** 2 - 1)
    b = a * (1 / mean - 1)
    return a, b


def beta_distribution(mean, delta):
    """Beta law on ``[0, 1]`` as a ``copulas`` univariate model."""
    a, b = beta_shape_params(mean, delta)
    return Univariate.from_dict({
        'type': get_qualified_name(BetaUnivariate),
        'a': a,
        'b': b,
        'loc': 0.0,
        'scale': 1.0,
    })


@dataclasses.dataclass(frozen=True)
class StochasticBitRock(_ParameterBlock):
    """Probabilistic model of the bit-rock interface law.

    ``alpha_BR`` and ``Gamma_BR`` follow gamma laws and ``mu_BR`` a beta law. A zero
    dispersion makes the parameter deterministic.

    Args:
        m_alpha, delta_alpha (float):
            Mean and dispersion of the rate of change of the bit force.
        m_Gamma, delta_Gamma (float):
            Mean and dispersion of the limit force.
        m_mu, delta_mu (float):
            Mean and dispersion of the bit-rock friction coefficient.
        seed (int):
            Seed shared by every realization.
    """

    m_alpha: float = 400.0
    delta_alpha: float = 0.005
    m_Gamma: float = 30.0e3
    delta_Gamma: float = 0.01
    m_mu: float = 0.4
    delta_mu: float = 0.005
    seed: int = 0

    def _check(self):
        violations = _gamma_violations('alpha', self.m_alpha, self.delta_alpha)
        violations += _gamma_violations('Gamma', self.m_Gamma, self.delta_Gamma)
        violations += _beta_violations('mu', self.m_mu, self.delta_mu)
        if int(self.seed) != self.seed or self.seed < 0:
            violations.append('seed must be a non-negative integer')

        return violations

    @classmethod
    def around(cls, bit_rock, delta_alpha=0.005, delta_Gamma=0.01, delta_mu=0.005, seed=0):
        """Model centred on a deterministic bit-rock law."""
        return cls(
            m_alpha=bit_rock.alpha_BR,
            delta_alpha=delta_alpha,
            m_Gamma=bit_rock.Gamma_BR,
            delta_Gamma=delta_Gamma,
            m_mu=bit_rock.mu_BR,
            delta_mu=delta_mu,
            seed=seed,
        )

    @property
    def nominal(self):
        """Bit-rock law at the mean values."""
        return BitRockParams(Gamma_BR=self.m_Gamma, alpha_BR=self.m_alpha, mu_BR=self.m_mu)

    @property
    def is_deterministic(self):
        return self.delta_alpha == 0 and self.delta_Gamma == 0 and self.delta_mu == 0

    def distributions(self):
        """Univariate laws of the random parameters, ``None`` for the deterministic ones."""
        return {
            'alpha_BR': (
                gamma_distribution(self.m_alpha, self.delta_alpha) if self.delta_alpha else None),
            'Gamma_BR': (
                gamma_distribution(self.m_Gamma, self.delta_Gamma) if self.delta_Gamma else None),
            'mu_BR': beta_distribution(self.m_mu, self.delta_mu) if self.delta_mu else None,
        }


def realization_uniforms(seed, index):
    """Three independent uniforms drawn from the stream of realization ``index``."""
    rng = np.random.default_rng([int(seed), int(index)])
    return rng.random(len(PARAMETERS))


def sample_parameters(model, indices):
    """Parameter draws of several realizations.

    Every realization reads its own random stream, keyed by the model seed and the
    realization index, so the draws do not depend on the order of evaluation.

    Args:
        model (StochasticBitRock):
            Probabilistic model.
        indices (iterable[int]):
            Realization indices.

    Returns:
        pandas.DataFrame:
            Columns ``index``, ``alpha_BR``, ``Gamma_BR`` and ``mu_BR``.
    """
    indices = np.asarray(list(indices), dtype=int)
    uniforms = np.array([realization_uniforms(model.seed, index) for index in indices])
    uniforms = uniforms.reshape(len(indices), len(PARAMETERS))
    means = {'alpha_BR': model.m_alpha, 'Gamma_BR': model.m_Gamma, 'mu_BR': model.m_mu}
    draws = {'index': indices}
    for column, (name, distribution) in enumerate(model.distributions().items()):
        if distribution is None:
            draws[name] = np.full(len(indices), means[name])
        else:
            draws[name] = distribution.percent_point(uniforms[:, column])

    return pd.DataFrame(draws)


def draw_realization(model, index):
    """Bit-rock law of realization ``index`` of the probabilistic model.

    Args:
        model (StochasticBitRock):
            Probabilistic model.
        index (int):
            Realization index.

    Returns:
        BitRockParams
    """
    row = sample_parameters(model, [index]).iloc[0]
    return BitRockParams(
        Gamma_BR=float(row['Gamma_BR']),
        alpha_BR=float(row['alpha_BR']),
        mu_BR=float(row['mu_BR']),
    )
