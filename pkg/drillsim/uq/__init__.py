"""Uncertainty quantification of the bit-rock interface law."""

from drillsim.uq.distributions import (
    StochasticBitRock, beta_distribution, beta_shape_params, draw_realization,
    gamma_distribution, gamma_pdf, sample_parameters)
from drillsim.uq.monte_carlo import (
    McRun, conv_series, envelope, normalized_histogram, run_monte_carlo, state_norm,
    tail_relative_change)

__all__ = (
    'McRun',
    'StochasticBitRock',
    'beta_distribution',
    'beta_shape_params',
    'conv_series',
    'draw_realization',
    'envelope',
    'gamma_distribution',
    'gamma_pdf',
    'normalized_histogram',
    'run_monte_carlo',
    'sample_parameters',
    'state_norm',
    'tail_relative_change',
)
