"""
Core components of viprox.

This module provides the exception hierarchy, the pydantic base models and
the keyed registries shared by the geometry, problem, solver, merit and
harness subpackages.
"""

# Import base classes
from .base import FrozenModel, ViproxModel, as_vector, build_model, error_fields

# Import registry
from .registry import Registry

# Import exceptions
from .exceptions import (
    # Base exception
    ViproxError,

    # Configuration and argument exceptions
    ConfigurationError,
    ConfigValidationError,
    UnknownTagError,
    RegistrationError,
    InvalidArgumentError,
    InvalidPointError,

    # Numerical exceptions
    NumericalError,
    ProxConvergenceError,
    EstimationError,

    # Solver exceptions
    SolverError,
    DivergenceError,

    # Harness exceptions
    HarnessError,
    ArtifactIOError,
)

__all__ = [
    # Core classes
    'FrozenModel',
    'ViproxModel',
    'as_vector',
    'build_model',
    'error_fields',
    'Registry',

    # Exceptions
    'ViproxError',
    'ConfigurationError',
    'ConfigValidationError',
    'UnknownTagError',
    'RegistrationError',
    'InvalidArgumentError',
    'InvalidPointError',
    'NumericalError',
    'ProxConvergenceError',
    'EstimationError',
    'SolverError',
    'DivergenceError',
    'HarnessError',
    'ArtifactIOError',
]
