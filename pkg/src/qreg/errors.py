"""Exception hierarchy shared by every module."""


class QregError(Exception):
    """Base class for all package errors."""


class DomainError(QregError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ContinuousSpectrumError(QregError, ValueError):
    """The requested system has no discrete closed-form spectrum."""


class ConventionError(QregError, ValueError):
    """Coefficients violate a branch-selection convention (e.g. c2 != 0 for a bound state)."""


class DegenerateFieldError(QregError, ValueError):
    """A sampled field is identically zero or has a non-finite norm."""


class ConvergenceError(QregError, ArithmeticError):
    """An iterative numerical procedure failed to converge."""


class FitError(QregError, ArithmeticError):
    """A regression is ill-conditioned (data below the noise floor)."""
