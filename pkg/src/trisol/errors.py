"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DivergenceError(DomainError):
    """The requested quantity diverges at the given argument (e.g. K(1))."""


class DriveConditionError(ValueError):
    """Drive parameters violate the amplitude-frequency matching condition.

    Carries the absolute residual of the condition in ``residual``.
    """

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = float(residual)


class SingularityError(ArithmeticError):
    """A normalization factor vanished and the expression is singular."""


class IntegrationError(RuntimeError):
    """Adaptive integration failed; ``last_time`` holds the last good time."""

    def __init__(self, message, last_time):
        super().__init__(message)
        self.last_time = float(last_time)


class NonPhysicalWarning(UserWarning):
    """Algebraically valid parameters that do not describe a quantum state."""
