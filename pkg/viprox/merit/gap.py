"""
Restricted gap and Bregman depth over box test domains.

    gap_C(x_hat) = sup_{p in C} <V(p), x_hat - p>
    depth_C(x_1) = sup_{p in C} D(p, x_1)

The gap is computed in closed form when the problem provides one, by a
tensor grid for small dimensions, or by Sobol sampling followed by
projected ascent from the best samples. Sampling underestimates the
supremum; the refinement narrows the gap from below.
"""
import itertools
import logging
from typing import Optional

import numpy as np
from scipy.stats import qmc

from ..config import settings
from ..core.base import as_vector
from ..core.exceptions import ConfigurationError, InvalidArgumentError
from ..geometry.bregman import BregmanFunction
from ..geometry.domains import Domain
from ..problems.base import VIProblem
from .regions import TestDomain

logger = logging.getLogger(__name__)

GRID_MAX_DIM = 3
GRID_POINTS = 101
VERTEX_MAX_DIM = 12
FD_STEP = 1e-6


def sobol_points(lower: np.ndarray, upper: np.ndarray, budget: int) -> np.ndarray:
    """At least ``budget`` unscrambled Sobol points scaled to ``[lower, upper]``."""
    m = max(int(np.ceil(np.log2(max(budget, 2)))), 1)
    unit = qmc.Sobol(d=lower.shape[0], scramble=False).random_base2(m)
    return lower + unit * (upper - lower)


def gap_objective(problem: VIProblem, x_hat: np.ndarray, points: np.ndarray) -> np.ndarray:
    """``<V(p), x_hat - p>`` for every row ``p`` of ``points``."""
    points = np.atleast_2d(points)
    return np.sum(problem.field_batch(points) * (x_hat - points), axis=1)


def _objective_gradient(problem: VIProblem, x_hat: np.ndarray, p: np.ndarray, scale: float) -> np.ndarray:
    jac = problem.jacobian(p)
    if jac is not None:
        return jac.T @ (x_hat - p) - problem.field(p)
    step = FD_STEP * max(scale, 1.0)
    eye = np.eye(p.shape[0]) * step
    forward = gap_objective(problem, x_hat, p + eye)
    backward = gap_objective(problem, x_hat, p - eye)
    return (forward - backward) / (2 * step)


def _ascend(problem: VIProblem, x_hat: np.ndarray, start: np.ndarray, lower: np.ndarray,
            upper: np.ndarray, steps: int) -> float:
    """Projected gradient ascent with backtracking; only improving moves are accepted."""
    width = float(np.max(upper - lower))
    p = start.copy()
    value = float(gap_objective(problem, x_hat, p)[0])
    size = 0.25 * width
    for _ in range(steps):
        if size < 1e-12 * max(width, 1.0):
            break
        grad = _objective_gradient(problem, x_hat, p, width)
        norm = float(np.linalg.norm(grad))
        if norm == 0 or not np.isfinite(norm):
            break
        candidate = np.clip(p + size * grad / norm, lower, upper)
        candidate_value = float(gap_objective(problem, x_hat, candidate)[0])
        if candidate_value > value:
            p, value = candidate, candidate_value
            size *= 1.5
        else:
            size *= 0.5
    return value


def restricted_gap(problem: VIProblem, test_domain: TestDomain, x_hat, method: str = "auto",
                   refine_starts: Optional[int] = None, refine_steps: Optional[int] = None,
                   grid_points: int = GRID_POINTS) -> float:
    """Estimate ``sup_{p in C} <V(p), x_hat - p>``.

    ``method`` is ``auto`` (closed form when available, else sampled),
    ``exact``, ``grid`` (dimension at most 3) or ``sampled``.

    Raises:
        ConfigurationError: If ``C`` is empty or not a box inside the domain,
            or the requested method is unavailable for the problem.
    """
    x_hat = as_vector(x_hat, problem.dim, "x_hat")
    lower, upper = test_domain.resolve(problem.domain, problem.known_solution)

    if method in ("auto", "exact"):
        value = problem.exact_gap(x_hat, lower, upper)
        if value is not None:
            return float(value)
        if method == "exact":
            raise ConfigurationError(f"{problem.kind} has no closed-form gap")
        method = "sampled"

    if method == "grid":
        if problem.dim > GRID_MAX_DIM:
            raise ConfigurationError(f"grid gap is limited to dimension {GRID_MAX_DIM}, got {problem.dim}")
        axes = [np.linspace(lo, hi, grid_points) for lo, hi in zip(lower, upper)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, problem.dim)
        return float(np.max(gap_objective(problem, x_hat, mesh)))

    if method != "sampled":
        raise InvalidArgumentError(f"unknown gap method '{method}'")

    starts = settings.GAP_REFINE_STARTS if refine_starts is None else refine_starts
    steps = settings.GAP_REFINE_STEPS if refine_steps is None else refine_steps
    samples = sobol_points(lower, upper, test_domain.sample_budget)
    if np.all(x_hat >= lower) and np.all(x_hat <= upper):
        samples = np.vstack([samples, x_hat])
    values = gap_objective(problem, x_hat, samples)
    best = float(np.max(values))
    for idx in np.argsort(values)[::-1][:starts]:
        best = max(best, _ascend(problem, x_hat, samples[idx], lower, upper, steps))
    logger.debug("sampled gap %.6g from %d samples", best, samples.shape[0])
    return best


def bregman_depth(h: BregmanFunction, test_domain: TestDomain, x1, domain: Optional[Domain] = None,
                  center: Optional[np.ndarray] = None) -> float:
    """``sup_{p in C} D(p, x_1)``.

    ``D(., x_1)`` is convex, so the supremum over a box sits at a vertex;
    vertices are enumerated up to dimension 12 and sampled beyond.
    """
    x1 = as_vector(x1, name="x1")
    lower, upper = test_domain.resolve(domain, center)
    if lower.shape != x1.shape:
        raise ConfigurationError(f"test domain has dimension {lower.shape[0]}, expected {x1.shape[0]}")
    if x1.shape[0] <= VERTEX_MAX_DIM:
        points = np.array(list(itertools.product(*zip(lower, upper))))
    else:
        points = sobol_points(lower, upper, test_domain.sample_budget)
    return float(max(h.divergence(p, x1) for p in points))
