"""Empirical convergence rates and the logarithmic summation inequality."""
import logging
from typing import Sequence, Tuple

import numpy as np
from pydantic import Field
from scipy.stats import linregress

from ..core.base import ViproxModel
from ..core.exceptions import EstimationError, InvalidArgumentError

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 10


class RateFit(ViproxModel):
    """Least-squares fit of ``log m_n = intercept + slope * log n``."""
    slope: float
    intercept: float
    r_squared: float
    window: Tuple[int, int]
    points: int = Field(ge=2)


def fit_rate(iterations: Sequence[int], values: Sequence[float], window_fraction: float = 0.5,
             min_points: int = MIN_FIT_POINTS) -> RateFit:
    """Fit the log-log slope of a merit series over its last ``window_fraction`` of iterations.

    Non-positive or non-finite values in the window are dropped with a warning.

    Raises:
        EstimationError: If fewer than ``min_points`` usable values remain.
    """
    if not 0 < window_fraction <= 1:
        raise InvalidArgumentError("window_fraction must lie in (0, 1]")
    n = np.asarray(iterations, dtype=float)
    m = np.asarray(values, dtype=float)
    if n.shape != m.shape or n.ndim != 1 or n.size == 0:
        raise InvalidArgumentError("iterations and values must be non-empty vectors of equal length")

    in_window = n >= (1.0 - window_fraction) * n.max()
    usable = in_window & np.isfinite(m) & (m > 0) & (n > 0)
    dropped = int(in_window.sum() - usable.sum())
    if dropped:
        logger.warning("fit_rate: excluded %d non-positive or non-finite merit values", dropped)
    if usable.sum() < max(min_points, 2):
        raise EstimationError(
            f"need at least {max(min_points, 2)} positive merit values in the window, got {int(usable.sum())}"
        )
    log_n = np.log(n[usable])
    log_m = np.log(m[usable])
    result = linregress(log_n, log_m)
    slope = float(result.slope)
    if not np.isfinite(slope):
        raise EstimationError("rate fit produced a non-finite slope")
    return RateFit(
        slope=slope,
        intercept=float(result.intercept),
        r_squared=float(result.rvalue ** 2),
        window=(int(n[usable].min()), int(n[usable].max())),
        points=int(usable.sum()),
    )


def log_sum_inequality(a: Sequence[float]) -> Tuple[float, float]:
    """Both sides of ``sum_n a_n / (1 + sum_{i<=n} a_i) <= 1 + log(1 + sum_n a_n)`` for ``a >= 0``."""
    a = np.asarray(a, dtype=float)
    if np.any(a < 0):
        raise InvalidArgumentError("the sequence must be non-negative")
    partial = np.cumsum(a)
    lhs = float(np.sum(a / (1.0 + partial)))
    rhs = float(1.0 + np.log1p(partial[-1] if a.size else 0.0))
    return lhs, rhs


def check_log_sum_inequality(a: Sequence[float], slack: float = 1e-12) -> bool:
    lhs, rhs = log_sum_inequality(a)
    return lhs <= rhs + slack
