"""Post-processing of drilling runs and operating window optimization."""

from drillsim.analysis.optimization import (
    UTS, OperatingWindow, WindowResult, optimize_deterministic, optimize_robust,
    summarize_trajectory)
from drillsim.analysis.performance import (
    drilling_efficiency, power_balance, rate_of_penetration, shock_counts, shock_series)
from drillsim.analysis.spectral import PsdEstimate, SmoothingControls, psd, uniform_part
from drillsim.analysis.stress import (
    StressRecovery, stress_field, von_mises_history, von_mises_max)

__all__ = (
    'OperatingWindow',
    'PsdEstimate',
    'SmoothingControls',
    'StressRecovery',
    'UTS',
    'WindowResult',
    'drilling_efficiency',
    'optimize_deterministic',
    'optimize_robust',
    'power_balance',
    'psd',
    'rate_of_penetration',
    'shock_counts',
    'shock_series',
    'stress_field',
    'summarize_trajectory',
    'uniform_part',
    'von_mises_history',
    'von_mises_max',
)
