"""Exception types shared across the package."""


class TopoevalError(Exception):
    """Base class for errors raised by this package."""


class DimensionMismatchError(TopoevalError, ValueError):
    """Two grids that must share extents do not."""


class UndefinedMetricError(TopoevalError, ValueError):
    """A metric is mathematically undefined for the given input
    (empty comparison scope, empty skeleton, too few samples, ...)."""


class UndefinedCorrelationError(UndefinedMetricError):
    """Correlation requested on a zero-variance score vector."""


class MaskFormatError(TopoevalError, ValueError):
    """A mask file cannot be decoded under the supported formats."""
