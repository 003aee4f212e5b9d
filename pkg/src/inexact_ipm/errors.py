"""Exception hierarchy.

Validation errors abort before any solve. Solver-side errors are caught by
:func:`inexact_ipm.ipm.run` and mapped onto a :class:`~inexact_ipm.ipm.Status`.
"""


class IPMError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(IPMError, ValueError):
    """The problem data violates a prerequisite of the method."""


class DimensionMismatch(ValidationError):
    pass


class RankDeficient(ValidationError):
    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class NotSymmetric(ValidationError):
    def __init__(self, message, indices=None):
        super().__init__(message)
        # (i, j) of the worst offending pair, 0-based
        self.indices = indices


class NotPSD(ValidationError):
    pass


class SingularSystem(IPMError):
    """Factorization breakdown: rank loss or loss of interiority."""


class MaxInnerIterations(IPMError):
    def __init__(self, message, iterations=None, ratio=None):
        super().__init__(message)
        self.iterations = iterations
        self.ratio = ratio


class AuditViolation(IPMError):
    """A lemma bound, contraction or neighbourhood assertion failed."""


class NumericalBreakdown(IPMError):
    pass


class ParamsInfeasible(IPMError, ValueError):
    pass


class StepsizeUnderflow(IPMError):
    pass


class StartOutsideNeighbourhood(IPMError, ValueError):
    pass


class RankResampleExhausted(IPMError):
    pass


class MarginOutOfRange(IPMError, ValueError):
    pass


class ParseError(IPMError):
    def __init__(self, message, path=None, line=None):
        super().__init__(message)
        self.path = path
        self.line = line


class ValidationFailed(IPMError):
    """Wraps a :class:`ValidationError` raised while loading an instance."""

    def __init__(self, cause):
        super().__init__(f"{type(cause).__name__}: {cause}")
        self.cause = cause


class MissingFile(IPMError, FileNotFoundError):
    pass
