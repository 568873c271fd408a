"""Exception hierarchy.

Every error raised on purpose by the engine derives from :class:`KslopeError`;
the CLI maps all of them to exit code 2.
"""


class KslopeError(Exception):
    """Base class for engine errors."""


class MalformedRational(KslopeError, ValueError):
    pass


class NotNegativeDefinite(KslopeError):
    pass


class SingularSystem(KslopeError):
    pass


class DimensionMismatch(KslopeError):
    pass


class ArityMismatch(KslopeError):
    pass


class NonPositiveVolume(KslopeError):
    pass


class ConeViolation(KslopeError):
    pass


class DivisorMismatch(KslopeError):
    """Declared total class disagrees with the sum of its components."""


class SetupError(KslopeError):
    """Structural problem with a setup document."""


class DegenerateDivisor(KslopeError):
    pass


class NonpositiveDenominator(KslopeError):
    pass


class NotASurface(KslopeError):
    pass


class AssumptionViolated(KslopeError):
    pass


class NonpositiveCoefficient(KslopeError):
    pass


class NonpositiveSolution(KslopeError):
    pass


class CriterionNotSatisfied(KslopeError):
    """The adjunction criterion fails, so the witness search is refused."""


class NonpositiveDegree(KslopeError):
    pass


class RankMismatch(KslopeError):
    pass


class IncompleteAmbientData(KslopeError):
    pass
