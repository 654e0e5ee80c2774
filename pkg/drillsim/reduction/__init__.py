"""Reduced-order model of the column built on its normal modes."""

from drillsim.reduction.modal import (
    ModeTable, ReducedSystem, SelectionRule, build_reduction, classify_modes,
    constrained_frequencies, degenerate_groups, modal_analysis, modal_density,
    solve_eigen)
from drillsim.reduction.projection import ModalInterpolation, ReducedForceEvaluator

__all__ = (
    'ModalInterpolation',
    'ModeTable',
    'ReducedForceEvaluator',
    'ReducedSystem',
    'SelectionRule',
    'build_reduction',
    'classify_modes',
    'constrained_frequencies',
    'degenerate_groups',
    'modal_analysis',
    'modal_density',
    'solve_eigen',
)
