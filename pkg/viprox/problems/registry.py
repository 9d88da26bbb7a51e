# viprox/problems/registry.py
from typing import Any, Callable

from ..core.registry import Registry
from .base import VIProblem

ProblemBuilder = Callable[[Any], VIProblem]

# Global registry instance
PROBLEMS: Registry[ProblemBuilder] = Registry("problem")


def register_problem(kind: str):
    """
    Decorator to register a problem builder under a config tag.

    Example:
        @register_problem("bilinear")
        def build_bilinear(spec: BilinearSpec) -> VIProblem:
            ...
    """
    return PROBLEMS.decorator(kind)


def build_problem(spec: Any) -> VIProblem:
    """Build the problem described by a tagged spec."""
    return PROBLEMS.get(spec.kind)(spec)


__all__ = ['PROBLEMS', 'ProblemBuilder', 'register_problem', 'build_problem']
