"""Exception hierarchy shared by all modules."""


class GraphSchroError(Exception):
    """Base class for every error raised by the package."""


class NonSquare(GraphSchroError, ValueError):
    pass


class NonSymmetric(GraphSchroError, ValueError):
    pass


class TruncationTooShort(GraphSchroError, ValueError):
    pass


class NotMaximal(GraphSchroError, ValueError):
    pass


class AtPole(GraphSchroError, ZeroDivisionError):
    pass


class EmptyCluster(GraphSchroError, ValueError):
    pass


class InvalidSeed(GraphSchroError, ValueError):
    pass


class ZeroTheta(GraphSchroError, ZeroDivisionError):
    pass


class ZeroCoefficient(GraphSchroError, ValueError):
    pass


class OnSingularSet(GraphSchroError, ValueError):
    pass


class TNotInvertible(GraphSchroError, ArithmeticError):
    pass


class DimensionMismatch(GraphSchroError, ValueError):
    pass


class SupportTooDeep(GraphSchroError, ValueError):
    pass


class PreconditionFailed(GraphSchroError, ValueError):
    pass


class ParseError(GraphSchroError, ValueError):
    pass


class ToleranceOutOfRange(GraphSchroError, ValueError):
    pass
