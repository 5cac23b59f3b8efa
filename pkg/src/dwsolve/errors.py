"""Exception and warning types shared across the package."""


class DWSolveError(Exception):
    """Base class for all package errors."""


class PoleError(DWSolveError, ZeroDivisionError):
    """A reciprocal bracket or a vanishing prefactor was evaluated at a pole."""


class PreconditionError(DWSolveError, ValueError):
    """A rapidity specialization required by an operation does not hold."""


class BudgetExceeded(DWSolveError):
    """The n**L transfer-matrix state space is larger than the configured budget."""


class AliasError(DWSolveError):
    """A retained Laurent exponent sits at the Nyquist edge of the DFT grid."""


class VanishingFunctionError(DWSolveError):
    """Every sampled value is zero, so no Laurent span exists."""


class ConditionWarning(UserWarning):
    """The determinant formula is evaluated off the discrete crossing values."""
