"""Exception hierarchy shared by all modules."""


class DemandPathsError(Exception):
    """Base class for every error raised by this package."""


class MissingEdge(DemandPathsError):
    pass


class InvalidTarget(DemandPathsError):
    pass


class DegreeTooHigh(DemandPathsError):
    pass


class TargetTooSmall(DemandPathsError):
    pass


class OddDegree(DemandPathsError):
    pass


class NotRegular(DemandPathsError):
    pass


class NotEvenRegular(DemandPathsError):
    pass


class SeedNotTwoMatching(DemandPathsError):
    pass


class PinsAdjacent(DemandPathsError):
    pass


class ColoringFailed(DemandPathsError):
    pass


class PreconditionViolated(DemandPathsError):
    pass


class DegreeBoundExceeded(DemandPathsError):
    pass


class Unrealizable(DemandPathsError):
    pass


class TooLarge(DemandPathsError):
    pass


class BadParams(DemandPathsError):
    pass


class SameColumn(DemandPathsError):
    pass


class OutOfRange(DemandPathsError):
    pass


class DegenerateN(DemandPathsError):
    pass


class ParseError(DemandPathsError):
    pass
