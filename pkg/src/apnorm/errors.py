"""
Exception hierarchy for apnorm.

Every error raised on purpose by the library derives from ApNormError, so
callers can catch one type. The subclasses also derive from the matching
builtin (ValueError, TypeError, RuntimeError) where that reads naturally.
"""

from typing import Optional


class ApNormError(Exception):
    """Base class for all apnorm errors."""


class DomainError(ApNormError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConstructionError(ApNormError):
    """
    A construction cannot be carried out.

    Args:
        message: Human readable description
        scale: The length scale at which the construction failed, if any
    """

    def __init__(self, message: str, scale: Optional[float] = None):
        super().__init__(message)
        self.scale = scale


class PreconditionError(ApNormError, ValueError):
    """A numeric precondition of an operation is not met."""


class LambdaTooSmallError(PreconditionError):
    """
    The frequency multiplier is below one of the witness thresholds.

    Args:
        message: Human readable description
        binding: Name of the threshold that binds
    """

    def __init__(self, message: str, binding: str):
        super().__init__(message)
        self.binding = binding


class DispatchError(ApNormError, TypeError):
    """A phase was handed to an engine that cannot represent it."""


class NumericError(ApNormError, RuntimeError):
    """
    Root finding or quadrature did not converge.

    Args:
        message: Human readable description
        residual: Last residual seen before giving up
    """

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class ConfigError(ApNormError):
    """
    Experiment configuration could not be parsed or validated.

    Args:
        message: Human readable description
        source: Config file name (or "<string>")
        line: 1-based line number, when the problem has one
    """

    def __init__(
        self, message: str, source: str = "<string>", line: Optional[int] = None
    ):
        location = source if line is None else f"{source}:{line}"
        super().__init__(f"{location}: {message}")
        self.source = source
        self.line = line


__all__ = [
    "ApNormError",
    "DomainError",
    "ConstructionError",
    "PreconditionError",
    "LambdaTooSmallError",
    "DispatchError",
    "NumericError",
    "ConfigError",
]
