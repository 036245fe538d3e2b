"""Exception types shared across the package."""


class PeriodRHError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(PeriodRHError, ValueError):
    pass


class InsufficientPrecisionError(PeriodRHError):
    """Raised when stored coefficients or digits cannot support a computation."""


class PrecisionEscalationError(PeriodRHError):
    """Raised when repeated precision doubling failed.

    ``suggested`` carries the digit count the caller should retry with.
    """

    def __init__(self, message, suggested):
        super().__init__(message)
        self.suggested = suggested


class NumericalError(PeriodRHError):
    """Non-convergence or an unreliable numerical result."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class BudgetExceededError(PeriodRHError):
    pass
