# viprox/merit/hooks.py
"""
Merit hooks for solver runs.

Each harness merit name maps to a builder that returns the trace columns it
fills and the hook computing each column from a checkpoint record.
"""
from typing import Callable, Dict, Optional

from ..core.exceptions import ConfigurationError
from ..core.registry import Registry
from ..problems.base import VIProblem
from ..solvers.runner import CheckpointRecord, MeritHook
from .gap import restricted_gap
from .regions import TestDomain
from .residuals import distance_to_solution, grad_norm_sq, require_resource_problem, wardrop_residual

HookBuilder = Callable[[VIProblem, TestDomain], Dict[str, MeritHook]]

# Global registry instance
MERITS: Registry[HookBuilder] = Registry("merit")


@MERITS.decorator("gap")
def gap_hooks(problem: VIProblem, test_domain: TestDomain) -> Dict[str, MeritHook]:
    """Gap of the ergodic average and of the last iterate."""
    test_domain.resolve(problem.domain, problem.known_solution)

    def gap_avg(record: CheckpointRecord) -> float:
        return restricted_gap(problem, test_domain, record.avg)

    def gap_last(record: CheckpointRecord) -> float:
        return restricted_gap(problem, test_domain, record.x_next)

    return {"gap_avg": gap_avg, "gap_last": gap_last}


@MERITS.decorator("wardrop")
def wardrop_hooks(problem: VIProblem, test_domain: TestDomain) -> Dict[str, MeritHook]:
    """Wardrop residual of the ergodic average and of the last iterate, mapped to load coordinates."""
    require_resource_problem(problem)

    def wardrop(record: CheckpointRecord) -> float:
        return wardrop_residual(problem, problem.to_loads(record.avg))

    def wardrop_last(record: CheckpointRecord) -> float:
        return wardrop_residual(problem, problem.to_loads(record.x_next))

    return {"wardrop": wardrop, "wardrop_last": wardrop_last}


@MERITS.decorator("grad_norm_sq")
def grad_norm_hooks(problem: VIProblem, test_domain: TestDomain) -> Dict[str, MeritHook]:
    def grad_norm(record: CheckpointRecord) -> float:
        return grad_norm_sq(problem, record.avg)

    return {"grad_norm_sq": grad_norm}


@MERITS.decorator("distance")
def distance_hooks(problem: VIProblem, test_domain: TestDomain) -> Dict[str, MeritHook]:
    """Distance of the last iterate to the known solution."""
    if problem.known_solution is None:
        raise ConfigurationError(f"distance merit needs a known solution for {problem.kind}")

    def distance(record: CheckpointRecord) -> float:
        return distance_to_solution(problem, record.x_next)

    return {"distance": distance}


def build_hooks(problem: VIProblem, names, test_domain: Optional[TestDomain] = None) -> Dict[str, MeritHook]:
    """Hooks for the merit ``names``, keyed by trace column."""
    test_domain = test_domain or TestDomain()
    hooks: Dict[str, MeritHook] = {}
    for name in names:
        hooks.update(MERITS.get(name)(problem, test_domain))
    return hooks
