"""Shared exception types."""


class ConfigurationError(ValueError):
    """Inconsistent dimensions, shapes, or parameter values."""


class CapacityError(RuntimeError):
    """Requested register or outcome space exceeds what dense simulation supports."""


class DegenerateBranchError(ArithmeticError):
    """A measurement branch with probability at or below the underflow floor was forced."""
