"""Exception types raised by shorprob."""


class ShorProbError(Exception):
    """Base class for all errors raised by this package."""


class NotCoprimeError(ShorProbError, ValueError):
    pass


class ModulusTooLargeError(ShorProbError, ValueError):
    pass


class RegisterTooSmallError(ShorProbError):
    """The input register does not exceed the output register, so the r - 1 targets may collide."""


class RegisterTooLargeError(ShorProbError):
    """A full 2^n table was requested beyond the memory guard."""


class GerjuoyInapplicableError(ShorProbError):
    """Window target sets need r < N/2, which is only guaranteed when N is not a prime power."""


class UnreachableError(ShorProbError):
    """A threshold search did not meet its target within the search cap."""


class ConsistencyError(ShorProbError, AssertionError):
    """Two independent computations of the same quantity disagreed."""
