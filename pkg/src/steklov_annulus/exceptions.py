"""Exception hierarchy for the solver.

Every error raised by the package derives from :class:`SteklovError`, so
callers can catch the whole family with one clause.
"""


class SteklovError(Exception):
    """Base class for all package errors."""


class InvalidAnnulus(SteklovError, ValueError):
    """Radii or offset violate ``0 < r1 < r2`` and ``0 <= t < r2 - r1``."""


class DegenerateFrame(SteklovError, ValueError):
    """The bipolar frame does not exist (concentric annulus, ``t == 0``)."""


class FrameMismatch(SteklovError, ValueError):
    pass


class OutOfDomain(SteklovError, ValueError):
    pass


class NotNormalized(SteklovError, ValueError):
    pass


class ZeroFunction(SteklovError, ArithmeticError):
    pass


class ConvergenceFailure(SteklovError, ArithmeticError):
    """An inner iteration (bisection, inverse iteration) ran out of budget."""


class NoConvergence(SteklovError, ArithmeticError):
    """Truncation doubling reached ``n_max`` without meeting the tolerance.

    The partial doubling history is kept on ``history`` so callers can
    report how far the solve got.
    """

    def __init__(self, message, history=()):
        super().__init__(message)
        self.history = list(history)


class QuadratureStall(SteklovError, ArithmeticError):
    pass


class DivisionNearZero(SteklovError, ArithmeticError):
    pass


class NoRootInBracket(SteklovError, ValueError):
    pass
