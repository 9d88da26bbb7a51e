"""
Resource allocation over parallel M/M/1 servers.

A unit of traffic ``R`` is split across servers with capacities ``c``; the
latency of server ``r`` is the Kleinrock response time ``1/(c_r - l_r)``
plus a fixed activation cost ``lambda`` once it carries load. Equilibria
are Wardrop equilibria of the latencies.

The change of variables ``x_r = 1 - l_r/c_r`` moves the singularity at full
capacity to the face ``x_r = 0``, where the inverse-box metric and the
inverse barrier live.
"""
import logging
from typing import Sequence

import numpy as np
from scipy.optimize import bisect

from ..core.exceptions import ConfigurationError, InvalidArgumentError, InvalidPointError
from ..geometry.domains import CapacitySimplex
from .base import Regularity, VIProblem
from .registry import register_problem
from .specs import ResourceAllocationSpec, TransformedResourceAllocationSpec

logger = logging.getLogger(__name__)


class ResourceAllocationProblem(VIProblem):
    """The load-coordinate problem, ``V_r(l) = 1/(c_r - l_r) + lambda * 1{l_r > 0}``."""

    kind = "resource_allocation"

    def __init__(self, domain: CapacitySimplex, lambda_reg: float, params: dict):
        d = domain.dim
        # constants of the transformed field under the inverse-box metric
        regularity = Regularity(
            is_monotone=True,
            metric="inverse_box",
            G=d * (1.0 + lambda_reg),
            L=float(d) if lambda_reg == 0 else None,
        )
        self.capacities = domain.c
        self.inflow = domain.inflow
        self.lambda_reg = lambda_reg
        solution = _water_filling(self.capacities, self.inflow) if lambda_reg == 0 else None
        super().__init__(domain, regularity, solution, params)

    def latencies(self, loads) -> np.ndarray:
        loads = np.asarray(loads, dtype=float)
        if np.any(loads >= self.capacities):
            raise InvalidPointError("loads must stay below capacity")
        return 1.0 / (self.capacities - loads) + self.lambda_reg * (loads > 0)

    def field(self, x: np.ndarray) -> np.ndarray:
        return self.latencies(x)

    def to_transformed(self, loads) -> np.ndarray:
        return 1.0 - np.asarray(loads, dtype=float) / self.capacities

    def to_loads(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float)

    def initial_point(self) -> np.ndarray:
        # proportional split
        return self.inflow * self.capacities / self.capacities.sum()


class TransformedResourceAllocation(VIProblem):
    """The resource problem in ``x = 1 - l/c`` coordinates.

    ``V_r(x) = -1/x_r - lambda * s_r * 1{x_r < 1}`` with ``s_r = 1`` by
    default and ``s_r = c_r`` under ``jacobian_scaling``, which is the exact
    chain-rule image of the load-coordinate field.
    """

    kind = "resource_allocation_transformed"

    def __init__(self, base: ResourceAllocationProblem, jacobian_scaling: bool, params: dict):
        c = base.capacities
        d = c.shape[0]
        lam = base.lambda_reg
        self.base = base
        self.jacobian_scaling = jacobian_scaling
        self.scaling = c.copy() if jacobian_scaling else np.ones(d)
        G = d + lam * float(self.scaling.sum())
        regularity = Regularity(
            is_monotone=True,
            metric="inverse_box",
            G=G,
            L=float(d) if lam == 0 else None,
        )
        domain = base.domain.with_coordinates("transformed")
        solution = None if base.known_solution is None else base.to_transformed(base.known_solution)
        super().__init__(domain, regularity, solution, params)

    def field(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise InvalidPointError("transformed coordinates must be positive")
        return -1.0 / x - self.base.lambda_reg * self.scaling * (x < 1.0)

    def to_loads(self, x) -> np.ndarray:
        return self.base.capacities * (1.0 - np.asarray(x, dtype=float))

    def to_transformed(self, loads) -> np.ndarray:
        return self.base.to_transformed(loads)

    def latencies(self, x) -> np.ndarray:
        return self.base.latencies(self.to_loads(x))

    def initial_point(self) -> np.ndarray:
        return self.to_transformed(self.base.initial_point())


def _water_filling(capacities: np.ndarray, inflow: float) -> np.ndarray:
    """Equilibrium loads without activation cost: ``l_r = max(0, c_r - s)`` with ``sum(l) = R``."""
    def excess(s: float) -> float:
        return float(np.maximum(capacities - s, 0.0).sum() - inflow)

    s = bisect(excess, 0.0, float(capacities.max()), xtol=1e-15, maxiter=200)
    loads = np.maximum(capacities - s, 0.0)
    free = loads > 0
    loads[free] += (inflow - loads.sum()) / free.sum()
    return loads


def make_resource_allocation(capacities: Sequence[float], inflow: float,
                             lambda_reg: float = 0.0) -> ResourceAllocationProblem:
    """Build the load-coordinate resource allocation problem.

    Raises:
        ConfigurationError: If a capacity is not positive, ``lambda_reg`` is
            negative, or the inflow is not strictly between 0 and the total
            capacity.
    """
    c = tuple(float(v) for v in capacities)
    if not c or min(c) <= 0:
        raise ConfigurationError("capacities must be non-empty and positive")
    if lambda_reg < 0:
        raise ConfigurationError("lambda_reg must be non-negative")
    if not 0 < inflow < sum(c):
        raise ConfigurationError(f"inflow {inflow} is infeasible: it must lie in (0, {sum(c)})")
    domain = CapacitySimplex(capacities=c, inflow=float(inflow))
    params = {"capacities": list(c), "inflow": float(inflow), "lambda_reg": float(lambda_reg)}
    return ResourceAllocationProblem(domain, float(lambda_reg), params)


def to_transformed_coordinates(problem: VIProblem, jacobian_scaling: bool = False) -> TransformedResourceAllocation:
    """Rewrite a resource allocation problem in ``x = 1 - l/c`` coordinates.

    Raises:
        InvalidArgumentError: If ``problem`` is not a load-coordinate resource allocation problem.
    """
    if not isinstance(problem, ResourceAllocationProblem):
        raise InvalidArgumentError(f"expected a resource allocation problem, got {problem.kind}")
    params = dict(problem.params, jacobian_scaling=jacobian_scaling)
    logger.debug("transforming resource problem (jacobian_scaling=%s)", jacobian_scaling)
    return TransformedResourceAllocation(problem, jacobian_scaling, params)


@register_problem("resource_allocation")
def build_resource_allocation(spec: ResourceAllocationSpec) -> ResourceAllocationProblem:
    return make_resource_allocation(spec.capacities, spec.inflow, spec.lambda_reg)


@register_problem("resource_allocation_transformed")
def build_transformed_resource_allocation(spec: TransformedResourceAllocationSpec) -> TransformedResourceAllocation:
    base = make_resource_allocation(spec.capacities, spec.inflow, spec.lambda_reg)
    return to_transformed_coordinates(base, spec.jacobian_scaling)
