"""Time integration Exceptions."""

from drillsim.errors import NumericalError


class ConvergenceError(NumericalError):
    """Error raised when the fixed-point iteration of a time step does not converge.

    Args:
        message (str):
            Description of the failure.
        time (float or None):
            Time at the start of the failed step.
        dt (float or None):
            Size of the failed step.
    """

    stage = 'integration'

    def __init__(self, message='', time=None, dt=None):
        self.time = time
        self.dt = dt
        super().__init__(message)


class TimeStepFloorError(ConvergenceError):
    """Error raised when the step size would fall below its floor."""


class StaticEquilibriumError(NumericalError):
    """Error raised when the relaxation towards static equilibrium does not settle."""

    stage = 'static'


class ConstraintError(NumericalError):
    """Error raised when the multiplier system of the constraints is singular."""

    stage = 'integration'
