"""Exception types shared across the package."""


class TensorHopError(Exception):
    """Base class for errors raised by this package."""


class ParseError(TensorHopError, ValueError):
    """Malformed textual or binary input."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ResourceLimitError(TensorHopError, RuntimeError):
    """A configured resource cap was exceeded before the computation started."""


class IntegerOverflowError(TensorHopError, OverflowError):
    """An exact integer result would not fit the 64-bit carrier."""


class DimensionError(TensorHopError, ValueError):
    """Requested dimensions are out of range or inconsistent."""
