"""Exception hierarchy shared by all quatspec modules."""


class QuatSpecError(Exception):
    """Base class for every error raised by quatspec."""


class ShapeMismatchError(QuatSpecError, ValueError):
    pass


class NonSquareError(ShapeMismatchError):
    pass


class KOutOfRangeError(QuatSpecError, ValueError):
    pass


class InvalidExponentError(QuatSpecError, ValueError):
    pass


class TooLargeError(QuatSpecError, ValueError):
    pass


class NonRepresentableEntryError(QuatSpecError, ValueError):
    pass


class AllCoefficientsZeroError(QuatSpecError, ValueError):
    pass


class EmptyWindowError(QuatSpecError, ValueError):
    pass


class NumericalError(QuatSpecError, ArithmeticError):
    """Numerical breakdown; the CLI maps these to exit code 3."""


class NoConvergenceError(NumericalError):
    """The QR iteration ran out of budget.

    ``found`` holds the eigenvalues deflated before the budget ran out and
    ``unresolved`` the (lo, hi) index window still undeflated.
    """

    def __init__(self, message, found=(), unresolved=None):
        super().__init__(message)
        self.found = list(found)
        self.unresolved = unresolved


class NonFiniteResultError(NumericalError):
    """A computation overflowed or produced NaN from finite input."""


class ImaginaryResidueTooLargeError(NumericalError):
    pass


class PairingFailureError(NumericalError):
    pass


class NegativeEigenvalueError(NumericalError):
    pass


class OutsideConvergenceDiskError(NumericalError, ValueError):
    pass


class NotConvergedError(NumericalError):
    """Truncation schedule exhausted; ``table`` holds every level computed."""

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table
