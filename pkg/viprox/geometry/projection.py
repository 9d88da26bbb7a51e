"""Euclidean projections onto boxes and capped simplices."""
import numpy as np
from scipy.optimize import bisect

from ..core.exceptions import ConfigurationError, ProxConvergenceError

TOLERANCE = 1e-10
MAX_ITER = 200


def project_box(x, lower, upper) -> np.ndarray:
    return np.clip(np.asarray(x, dtype=float), lower, upper)


def project_capacity_simplex(x, capacities, total: float) -> np.ndarray:
    """Project x onto ``{0 <= z <= c, sum(z) = total}``.

    The projection is ``clip(x - tau, 0, c)`` for the shift ``tau`` solving
    the budget equation, found by bisection and then polished on the free
    coordinates so the budget holds to rounding.
    """
    x = np.asarray(x, dtype=float)
    c = np.asarray(capacities, dtype=float)
    if not 0 <= total <= c.sum():
        raise ConfigurationError(f"budget {total} is infeasible for capacities summing to {c.sum()}")
    if total == 0:
        return np.zeros_like(x)
    if total == c.sum():
        return c.copy()

    def excess(tau: float) -> float:
        return float(np.clip(x - tau, 0.0, c).sum() - total)

    tau_min = float(np.min(x - c)) - 1.0
    tau_max = float(np.max(x)) + 1.0
    tau, info = bisect(excess, tau_min, tau_max, xtol=1e-14, maxiter=MAX_ITER,
                       full_output=True, disp=False)
    z = np.clip(x - tau, 0.0, c)
    residual = z.sum() - total
    free = (z > 0) & (z < c)
    if free.any():
        z[free] -= residual / free.sum()
        z = np.clip(z, 0.0, c)
        residual = z.sum() - total
    if abs(residual) > TOLERANCE * max(1.0, total):
        raise ProxConvergenceError("capped-simplex projection did not converge",
                                   residual=abs(residual), iterations=info.iterations)
    return z
