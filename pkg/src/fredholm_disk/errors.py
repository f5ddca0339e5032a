"""Exception types raised across the package."""


class FredholmDiskError(Exception):
    """Base class for all package errors."""


class NonPositiveArgument(FredholmDiskError):
    """Bessel argument z must be strictly positive."""


class OrderOutOfRange(FredholmDiskError):
    """Bessel order outside the supported range [0, 64]."""


class OverflowBeyondRange(FredholmDiskError):
    """Result is not representable in double precision; use the scaled variant."""


class NonPositiveRadius(FredholmDiskError):
    """Radial coordinate must be strictly positive."""


class GridTooCoarse(FredholmDiskError):
    """Grid resolution insufficient for the requested operation."""


class GridTooNarrow(FredholmDiskError):
    """Grid does not cover the radial window the construction needs."""


class ShapeMismatch(FredholmDiskError):
    """Array shape does not match the grid layout."""


class TailTruncationError(FredholmDiskError):
    """Estimated contribution beyond r_max exceeds tolerance."""


class ResonantWeight(FredholmDiskError):
    """Weight pair sits on (or within tolerance of) a resonant threshold."""


class SolvabilityViolated(FredholmDiskError):
    """Right-hand side pairs non-trivially with a cokernel element."""


class UnknownFamily(FredholmDiskError):
    """Unknown manufactured-solution family id."""


class ZeroDenominator(FredholmDiskError):
    """Ratio undefined: denominator vanishes."""
