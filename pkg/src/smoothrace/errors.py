"""Exception types shared across the package."""


class SmoothraceError(Exception):
    """Base class for all package errors."""


class ParameterError(SmoothraceError, ValueError):
    """An argument violates an operation's precondition."""


class ShapeError(SmoothraceError, ValueError):
    """Array shapes do not line up."""


class NumericError(SmoothraceError, ArithmeticError):
    """Non-finite values appeared where finite ones are required."""


class StateError(SmoothraceError, RuntimeError):
    """Operation called out of order (e.g. backward without a cached forward)."""


class ConfigError(SmoothraceError, ValueError):
    """Invalid or inconsistent experiment configuration."""


class CompatibilityError(SmoothraceError):
    """Artifact was produced under a different configuration hash."""
