"""Drillsim Exceptions."""


class DrillsimError(Exception):
    """Base class for every error raised by drillsim."""


class ParameterError(DrillsimError, ValueError):
    """Error to raise when physical or numerical parameters are not valid."""

    def __init__(self, message=''):
        self.message = message
        super().__init__(self.message)

    @classmethod
    def from_violations(cls, what, violations):
        """Build a single error listing every violation found."""
        return cls(f'Invalid {what}:\n - ' + '\n - '.join(violations))


class ConfigError(DrillsimError):
    """Error to raise when a run configuration cannot be used.

    Args:
        errors (list[str]):
            Violations found, each one naming the field path.
        line (int or None):
            Line of the configuration file related to the first violation, if known.
    """

    def __init__(self, errors, line=None):
        if isinstance(errors, str):
            errors = [errors]

        self.errors = list(errors)
        self.line = line
        message = 'Invalid configuration:\n - ' + '\n - '.join(self.errors)
        super().__init__(message)


class NumericalError(DrillsimError):
    """Error raised when a numerical stage fails.

    Args:
        message (str):
            Description of the failure.
        stage (str):
            Name of the pipeline stage that failed.
    """

    stage = 'numerics'

    def __init__(self, message='', stage=None):
        self.message = message
        if stage is not None:
            self.stage = stage

        super().__init__(self.message)


class EigenSolverError(NumericalError):
    """Error raised when the generalized eigenproblem cannot be solved."""

    stage = 'eigen'


class InfeasibleWindowError(DrillsimError):
    """Error raised when no point of an operating window satisfies the stress constraint.

    Args:
        message (str):
            Description of the failure.
        result (WindowResult or None):
            Maps of the grid search, kept for inspection.
    """

    def __init__(self, message='', result=None):
        self.result = result
        super().__init__(message)


class UndefinedEfficiencyError(DrillsimError, ValueError):
    """Error raised when the input power of a trajectory integrates to zero."""
