"""
Custom exceptions for the viprox package.

This module defines all custom exceptions used throughout the solvers,
geometries, problem library and experiment harness.
"""
from typing import Iterable, Optional, Sequence


class ViproxError(Exception):
    """Base exception for all viprox errors."""
    pass


# Configuration and argument errors
class ConfigurationError(ViproxError, ValueError):
    """Raised when a problem, test domain or experiment is misconfigured."""
    pass


class ConfigValidationError(ConfigurationError):
    """Raised when an experiment configuration fails validation."""

    def __init__(self, message: str, fields: Sequence[str] = ()):
        super().__init__(message)
        self.fields = list(fields)


class UnknownTagError(ConfigurationError):
    """Raised when a tagged spec names a kind that is not registered."""

    def __init__(self, category: str, tag: str, valid: Iterable[str]):
        self.category = category
        self.tag = tag
        self.valid = sorted(valid)
        super().__init__(
            f"Unknown {category} '{tag}'; valid {category} tags: {', '.join(self.valid)}"
        )


class RegistrationError(ViproxError):
    """Raised when a registry entry would be silently replaced."""
    pass


class InvalidArgumentError(ViproxError, ValueError):
    """Raised when an argument has the wrong kind or shape."""
    pass


class InvalidPointError(ViproxError, ValueError):
    """Raised when a point lies outside the domain of a metric, Bregman function or field."""
    pass


# Numerical errors
class NumericalError(ViproxError):
    """Base exception for numerical failures."""
    pass


class ProxConvergenceError(NumericalError):
    """Raised when an iterative prox solve exhausts its iteration budget."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations


class EstimationError(NumericalError):
    """Raised when a rate fit has no usable data."""
    pass


# Solver errors
class SolverError(ViproxError):
    """Base exception for solver errors."""
    pass


class DivergenceError(SolverError):
    """Raised when a run diverges and the caller asked for an exception."""

    def __init__(self, message: str, iteration: Optional[int] = None):
        super().__init__(message)
        self.iteration = iteration


# Harness errors
class HarnessError(ViproxError):
    """Base exception for experiment harness errors."""
    pass


class ArtifactIOError(HarnessError):
    """Raised when a config or artifact cannot be read or written."""

    def __init__(self, message: str, path: str):
        super().__init__(f"{message}: {path}")
        self.path = path
