"""Exception types shared across the package."""


class OrliczLabError(Exception):
    """Base class for all package-specific errors."""


class DomainCapExceeded(OrliczLabError):
    """An evaluation was requested beyond the numerically trusted range."""


class SupremumOutOfRange(OrliczLabError):
    """A conjugate maximizer would exceed the trusted range of the base function."""


class InvalidExponents(OrliczLabError):
    """Exponent parameters violate the constraints of the construction."""


class GridMismatch(OrliczLabError):
    """Two sampled fields do not share dimension, resolution, or extent."""


class EmptyTail(OrliczLabError):
    """Too few distinct sample levels to estimate a tail quantity."""


class AtomTooCloseToBoundary(OrliczLabError):
    """A point mass sits too close to the boundary for the requested mollifier level."""


class NonConvergence(OrliczLabError):
    """Iteration budget exhausted before the residual tolerance was met.

    Carries the best iterate so callers can inspect or flag it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NotStronglyMonotone(OrliczLabError):
    """An operation requiring strong monotonicity received a weakly monotone operator."""


class UndeterminedGrowth(OrliczLabError):
    """The growth dichotomy heuristic could not classify and no override was given."""


class BoundaryNotZero(OrliczLabError):
    """A field that must vanish on boundary cells does not."""


class ParseError(OrliczLabError):
    """Malformed input file; message includes line/column where known."""
