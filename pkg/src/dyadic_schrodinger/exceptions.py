class DyadicError(ValueError):
    """Base class for errors raised by this package."""


class ResolutionError(DyadicError):
    """Raised when a computation needs finer resolution than the grid offers,
    or when two objects live on different grids."""


class PreconditionError(DyadicError):
    """Raised when an input violates a mathematical precondition
    (nonzero unit-interval means, bad parameter ranges, divergent integrals)."""


class FormatError(DyadicError):
    """Raised for malformed grid-function or coefficient files."""
