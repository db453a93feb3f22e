"""Exception hierarchy shared by every module in the package."""


class AnfisError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(AnfisError, ValueError):
    """A scalar argument is outside its admissible domain."""


class ShapeError(AnfisError, ValueError):
    """Array dimensions do not match what the model expects."""


class DegenerateFiringError(AnfisError, ArithmeticError):
    """Firing strengths cannot be normalized (zero or non-finite sum)."""


class NumericError(AnfisError, ArithmeticError):
    """A numerical routine received or produced non-finite values."""


class ConfigError(AnfisError, ValueError):
    """A configuration value is missing, unknown or invalid."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class DataError(AnfisError, ValueError):
    """Input data could not be read or failed validation."""


class InsufficientDataError(DataError):
    """Not enough rows for the requested operation."""


class SplitError(DataError):
    """A train/test split would leave one side empty."""
