"""Time integration of the constrained reduced model."""

from drillsim.dynamics.errors import (
    ConstraintError, ConvergenceError, StaticEquilibriumError, TimeStepFloorError)
from drillsim.dynamics.newmark import (
    NewmarkCoefficients, NewmarkParams, newmark_predict, nominal_time_step)
from drillsim.dynamics.simulation import (
    Integrator, StaticControls, StaticResult, imposed_state, output_grid, relaxation_damping,
    simulate, static_equilibrium)
from drillsim.dynamics.solver import (
    SolverControls, StepResult, StepState, consistent_start, step_constrained)
from drillsim.dynamics.trajectory import IntegrationStats, Trajectory

__all__ = (
    'ConstraintError',
    'ConvergenceError',
    'IntegrationStats',
    'Integrator',
    'NewmarkCoefficients',
    'NewmarkParams',
    'SolverControls',
    'StaticControls',
    'StaticEquilibriumError',
    'StaticResult',
    'StepResult',
    'StepState',
    'TimeStepFloorError',
    'Trajectory',
    'consistent_start',
    'imposed_state',
    'newmark_predict',
    'nominal_time_step',
    'output_grid',
    'relaxation_damping',
    'simulate',
    'static_equilibrium',
    'step_constrained',
)
