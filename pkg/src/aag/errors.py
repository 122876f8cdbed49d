"""Exception types shared across the package."""


class AagError(Exception):
    """Base class for errors raised by this package."""


class ParseError(AagError):
    """Malformed input data (ragged CSV rows, unparseable cells)."""


class SchemaError(AagError):
    """Data does not match the schema a fitted model expects."""


class UnusableColumnError(AagError):
    """A column cannot be fitted (for example, all values missing)."""


class GenerationError(AagError):
    """A benchmark split cannot be generated from the given data."""


class UndefinedStabilityError(AagError):
    """Stability index is undefined (no size group with two members)."""
