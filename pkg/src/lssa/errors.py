"""Exception types raised across the package."""


class LssaError(Exception):
    """Base class for all package errors."""


class DimensionError(LssaError, ValueError):
    """Array or configuration length does not match the problem."""


class ArgumentError(LssaError, ValueError):
    """An argument is outside its admissible range."""


class SizeError(LssaError, ValueError):
    """Problem too large for an exhaustive or statevector method."""


class ConfigError(LssaError, ValueError):
    """Invalid or unknown configuration entry."""


class DataError(LssaError, ValueError):
    """Input data violates a domain rule (e.g. non-positive prices)."""


class ParseError(DataError):
    """A file could not be parsed; message carries the location."""


class UndefinedRatioError(LssaError, ArithmeticError):
    """A ratio (Sharpe, approximation ratio) is undefined for the inputs."""


class ReproducibilityError(LssaError):
    """A replayed run did not reproduce its logged result."""


class StageError(LssaError):
    """Wraps a failure inside one pipeline stage, keeping the stage name."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
