"""Pointwise merits: Wardrop residual, squared field norm, distance to the solution."""
import numpy as np

from ..core.base import as_vector
from ..core.exceptions import ConfigurationError, InvalidArgumentError, InvalidPointError
from ..problems.base import VIProblem
from ..problems.resource_allocation import ResourceAllocationProblem, TransformedResourceAllocation

# A node counts as loaded above this share of its capacity.
LOADED_SHARE = 1e-9
# Tolerance on the flow-conservation constraint of averaged loads.
FLOW_TOL = 1e-8


def require_resource_problem(problem: VIProblem) -> ResourceAllocationProblem:
    if isinstance(problem, TransformedResourceAllocation):
        return problem.base
    if isinstance(problem, ResourceAllocationProblem):
        return problem
    raise InvalidArgumentError(f"Wardrop residual needs a resource allocation problem, got {problem.kind}")


def wardrop_residual(problem: VIProblem, loads) -> float:
    """Largest latency on a loaded node minus the smallest latency overall.

    ``loads`` are in load coordinates for both resource problem variants.

    Raises:
        InvalidPointError: If ``loads`` violates capacities or flow conservation.
    """
    base = require_resource_problem(problem)
    loads = as_vector(loads, base.dim, "loads")
    c = base.capacities
    if (np.any(loads < -FLOW_TOL) or np.any(loads >= c)
            or abs(loads.sum() - base.inflow) > FLOW_TOL * max(1.0, base.inflow)):
        raise InvalidPointError("loads are not feasible for this network")
    if base.dim == 1:
        return 0.0
    latency = base.latencies(np.maximum(loads, 0.0))
    loaded = loads > LOADED_SHARE * c
    if not loaded.any():
        return 0.0
    return float(max(latency[loaded].max() - latency.min(), 0.0))


def grad_norm_sq(problem: VIProblem, x) -> float:
    """``||V(x)||_2^2`` of the deterministic field."""
    v = problem.field(problem.check(x))
    return float(v @ v)


def distance_to_solution(problem: VIProblem, x) -> float:
    """``||x - x*||_2``.

    Raises:
        ConfigurationError: If the problem has no known solution.
    """
    if problem.known_solution is None:
        raise ConfigurationError(f"{problem.kind} has no known solution")
    return float(np.linalg.norm(as_vector(x, problem.dim) - problem.known_solution))
