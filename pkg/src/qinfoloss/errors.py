"""Exception hierarchy shared by every module."""


class QInfoError(ValueError):
    """Base class for all library errors."""


class DimensionError(QInfoError):
    """Operand shapes are incompatible."""


class SizeLimitError(QInfoError):
    """A matrix would exceed the dimension budget."""


class NotHermitianError(QInfoError):
    pass


class ConvergenceError(QInfoError, ArithmeticError):
    pass


class InvalidStateError(QInfoError):
    """Normalization, trace or positivity violated."""


class BasisMismatchError(QInfoError):
    """A PMF was paired with a basis other than the one that produced it."""


class DomainError(QInfoError):
    """A scalar parameter lies outside its admissible range."""


class InconsistencyError(QInfoError, AssertionError):
    """Internal cross-checks disagree."""
