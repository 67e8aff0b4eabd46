"""Exception hierarchy shared by all modules."""


class SteklovError(Exception):
    """Base class for every error raised by this package."""


class DegenerateCurve(SteklovError):
    pass


class SelfIntersection(SteklovError):
    pass


class OrientationMismatch(SteklovError):
    pass


class HoleOutsideOuter(SteklovError):
    pass


class HolesOverlap(SteklovError):
    pass


class GenusUnsupported(SteklovError):
    pass


class NotUnivalent(SteklovError):
    pass


class NotSymmetric(SteklovError):
    pass


class NotPositiveDefinite(SteklovError):
    pass


class NoSignChange(SteklovError):
    pass


class InsufficientQuadrature(SteklovError):
    pass


class EpsilonOutOfRange(SteklovError):
    pass


class TooFewNodes(SteklovError):
    pass


class SingularSystem(SteklovError):
    pass


class BranchOnBoundary(SteklovError):
    pass


class ZeroDenominator(SteklovError):
    pass


class BadParameters(SteklovError):
    pass


class NoSecondSolver(SteklovError):
    pass


class ConfigParse(SteklovError):
    pass
