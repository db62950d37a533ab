"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`OrbitfoldError`
so the CLI can map it to a usage-style exit code.
"""


class OrbitfoldError(Exception):
    pass


class NotGCM(OrbitfoldError):
    pass


class NotSymmetrizable(OrbitfoldError):
    pass


class Disconnected(OrbitfoldError):
    pass


class DimensionMismatch(OrbitfoldError):
    pass


class NotAutomorphism(OrbitfoldError):
    pass


class LinkingConditionViolated(OrbitfoldError):
    pass


class NotInvariant(OrbitfoldError):
    pass


class NotSymmetricWeight(OrbitfoldError):
    pass


class NotDominantIntegral(OrbitfoldError):
    pass


class StepBudgetExceeded(OrbitfoldError):
    pass


class DepthInsufficient(OrbitfoldError):
    pass


class DepthBudgetExceeded(OrbitfoldError):
    pass


class NotRotation(OrbitfoldError):
    pass


class WeightNotAtLevel(OrbitfoldError):
    pass


class UnsupportedAlgebra(OrbitfoldError):
    pass


class NegativeMultiplicity(OrbitfoldError):
    """Internal consistency failure in a character decomposition."""


class NotFixedPoint(OrbitfoldError):
    pass


class NonIntegralResolution(OrbitfoldError):
    pass


class NonIntegralFusion(OrbitfoldError):
    pass
