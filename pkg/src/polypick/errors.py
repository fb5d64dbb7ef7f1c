"""Exception hierarchy.

Every failure mode of the library raises a subclass of :class:`PolypickError`
so callers (and the CLI) can distinguish library errors from bugs.
"""


class PolypickError(Exception):
    """Base class for all library errors."""


class NodesNotDistinct(PolypickError):
    """Two interpolation nodes coincide (as full tuples)."""


class TargetsNotDistinct(PolypickError):
    """Two target values coincide."""


class NotExtremal(PolypickError):
    """A disc datum handed to the Blaschke interpolator is not extremal."""


class EqualAlphas(PolypickError):
    """Rotation parameter requested for two equal disc points."""


class DegenerateCombination(PolypickError):
    """An intermediate convex combination collides with the next parameter.

    The caller should permute the variables or switch the association order.
    """


class DimensionMismatch(PolypickError):
    """Evaluation point has fewer coordinates than the function expects."""


class NoConvergence(PolypickError):
    """All Newton starts were exhausted without meeting the tolerance."""


class DegenerateData(PolypickError):
    """Inversion pre-check failed: the data cannot lie in the maximal region."""


class LowerDimensional(PolypickError):
    """Recovered parameters hit the boundary of the parameter region.

    The caller should reclassify the problem at a lower dimension.
    """


class InconsistentRatio(PolypickError):
    """The two extremal-target moduli ratios disagree beyond tolerance."""


class NotExtremalDatum(PolypickError):
    """Targets lie strictly inside the extremal scale.

    Carries ``extremal_scale`` so the caller can rescale deliberately.
    """

    def __init__(self, message, extremal_scale=None):
        super().__init__(message)
        self.extremal_scale = extremal_scale


class UnsolvableDatum(PolypickError):
    """The interpolation data admit no solution in the closed unit ball."""


class UnsolvablePair(PolypickError):
    """A two-point subproblem already violates the Schwarz-Pick bound."""


class IncompatibleDegenerateThirdValue(PolypickError):
    """Degenerate route: the forced one-variable solution misses the third value."""
