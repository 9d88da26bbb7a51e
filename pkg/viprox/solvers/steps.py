"""
Single iterations of extra-gradient and AdaProx.

Both methods share one template: a leading step from ``X_n`` along the
signal at ``X_n``, an update step from ``X_n`` along the signal at the
leading point, a residual ``delta_n`` between the two signals, and
averaging of the leading point with weight ``eta_n``. They differ in the
mirror map (Euclidean projection versus Bregman prox) and in the norm used
for ``delta_n``.
"""
from typing import Callable, Optional

import numpy as np

from ..config import settings
from ..geometry.bregman import BregmanFunction
from ..geometry.domains import Box, CapacitySimplex, Domain, Unconstrained
from ..geometry.metrics import FinslerMetric
from ..geometry.projection import project_capacity_simplex
from ..core.exceptions import InvalidArgumentError
from ..problems.oracle import StochasticOracle
from .state import SolverState

Projection = Callable[[np.ndarray], np.ndarray]
Mirror = Callable[[np.ndarray, np.ndarray], np.ndarray]
DualNorm = Callable[[np.ndarray, np.ndarray], float]


def euclidean_projection(domain: Domain) -> Projection:
    """Euclidean projection onto a closed domain."""
    if isinstance(domain, Box):
        lower, upper = domain.bounds()
        return lambda z: np.clip(z, lower, upper)
    if isinstance(domain, CapacitySimplex) and domain.coordinates == "loads":
        c, total = domain.c, domain.inflow
        return lambda z: project_capacity_simplex(z, c, total)
    if isinstance(domain, Unconstrained):
        return lambda z: z
    raise InvalidArgumentError(f"no Euclidean projection onto a {domain.kind} domain")


def escaped(x: np.ndarray, bound: Optional[float] = None) -> bool:
    """Divergence test: a non-finite coordinate or a Euclidean norm beyond ``bound``."""
    bound = settings.DIVERGENCE_NORM if bound is None else bound
    return not np.all(np.isfinite(x)) or float(np.linalg.norm(x)) > bound


def _template_step(state: SolverState, oracle: StochasticOracle, mirror: Mirror,
                   dual_norm: DualNorm, divergence_norm: Optional[float]) -> SolverState:
    eta = state.policy.current
    x = state.x
    g = oracle.evaluate(x)
    x_lead = mirror(x, -eta * g)
    if escaped(x_lead, divergence_norm):
        return SolverState(x=x, n=state.n, policy=state.policy, avg_num=state.avg_num,
                           avg_den=state.avg_den, x_lead=x_lead, x_prev=x, g=g,
                           eta_used=eta, diverged=True)
    g_lead = oracle.evaluate(x_lead)
    x_next = mirror(x, -eta * g_lead)
    delta = dual_norm(x_lead, g_lead - g)
    return SolverState(
        x=x_next,
        n=state.n + 1,
        policy=state.policy.advanced(delta, state.n),
        avg_num=state.avg_num + eta * x_lead,
        avg_den=state.avg_den + eta,
        x_lead=x_lead,
        x_prev=x,
        g=g,
        g_lead=g_lead,
        delta=delta,
        eta_used=eta,
        diverged=escaped(x_next, divergence_norm),
    )


def eg_step(state: SolverState, oracle: StochasticOracle, projection: Optional[Projection] = None,
            divergence_norm: Optional[float] = None) -> SolverState:
    """One extra-gradient iteration with Euclidean residual ``||g_lead - g||_2``.

    The step size comes from ``state.policy`` (constant, inverse square root
    or adaptive).
    """
    project = projection or euclidean_projection(oracle.base.domain)

    def mirror(x, y):
        return project(x + y)

    def dual_norm(x, w):
        return float(np.linalg.norm(w))

    return _template_step(state, oracle, mirror, dual_norm, divergence_norm)


def adaprox_step(state: SolverState, oracle: StochasticOracle, metric: FinslerMetric,
                 h: BregmanFunction, domain: Optional[Domain] = None,
                 divergence_norm: Optional[float] = None) -> SolverState:
    """One AdaProx iteration.

    The residual is measured in the dual local norm at the leading point;
    the policy in ``state`` is expected to be adaptive.
    """
    domain = domain or oracle.base.domain
    if not h.supports(domain):
        raise InvalidArgumentError(f"{h.kind} is not compatible with a {domain.kind} domain")

    def mirror(x, y):
        return h.prox(domain, x, y)

    return _template_step(state, oracle, mirror, metric.dual_norm, divergence_norm)
