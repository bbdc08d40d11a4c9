"""Exception types shared across the toolkit."""


class DegenerateInputError(ValueError):
    """A Mobius denominator is too close to zero to evaluate reliably."""


class IllConditionedBoundaryError(ValueError):
    """A zero or segment endpoint sits too close to the unit circle."""


class CardinalityError(ValueError):
    """Two zero lists that must have equal total multiplicity do not."""


class RegionEmptyError(ValueError):
    """A sampling region contains no admissible sample points."""


class AtlasInconsistencyError(ValueError):
    """Harmonic-measure totals of an atlas are not integers within tolerance."""


class HypothesisViolationError(ValueError):
    """Per-component zero counts of the two products disagree."""


class BranchError(ValueError):
    """A supplied logarithm is inconsistent with the function it claims to log."""


class ResolutionError(RuntimeError):
    """A quadrature or grid did not resolve the quantity within its cap."""


class ConstructionExhaustedError(RuntimeError):
    """The inductive radius search ran out of room below the boundary."""

    def __init__(self, message: str, radii_placed: int = 0):
        super().__init__(message)
        self.radii_placed = radii_placed


class GridTooCoarseError(RuntimeError):
    """The conjugation residual on the grid exceeds its tolerance."""


class AmbiguousTopologyError(RuntimeError):
    """A level set could not be resolved into clean Jordan components."""


class ContourThroughZeroError(RuntimeError):
    """The function modulus on a contour is too small for a safe winding count."""


class RefinementExhaustedError(RuntimeError):
    """Repeated refinement failed to bring a step norm under its target."""
