"""
Finsler metrics: point-dependent primal and dual norms.

A metric is regular with constant ``beta`` when

    ||w||_{x',*} / ||w||_{x,*} <= 1 + beta * (||x - x'||_x + ||x - x'||_{x'})

and is bounded below by ``nu`` times the Euclidean norm.
"""
from typing import Literal, Optional

import numpy as np

from ..core.base import FrozenModel, as_vector
from ..core.exceptions import InvalidPointError
from ..core.registry import Registry


class FinslerMetric(FrozenModel):
    """Base class for Finsler metrics."""
    kind: str
    beta: float = 0.0

    def primal_norm(self, x, t) -> float:
        raise NotImplementedError("Subclasses must implement primal_norm()")

    def dual_norm(self, x, w) -> float:
        raise NotImplementedError("Subclasses must implement dual_norm()")

    def nu(self, dim: int) -> float:
        """Lower bound ``||t||_x >= nu * ||t||_2`` on a ``dim``-dimensional domain."""
        raise NotImplementedError("Subclasses must implement nu()")

    def dual_norm_by_sampling(self, x, w, n: int = 10_000,
                              rng: Optional[np.random.Generator] = None) -> float:
        """Estimate ``max <w, t>`` over the unit primal sphere at ``x`` from ``n`` directions."""
        x = as_vector(x, name="x")
        w = as_vector(w, x.shape[0], name="w")
        rng = rng or np.random.default_rng(0)
        directions = rng.standard_normal((n, x.shape[0]))
        if x.shape[0] == 2:
            angles = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
            directions = np.column_stack([np.cos(angles), np.sin(angles)])
        scales = np.array([self.primal_norm(x, t) for t in directions])
        unit = directions / scales[:, None]
        return float(np.max(unit @ w))


class EuclideanMetric(FinslerMetric):
    """The constant Euclidean norm; regular with beta = 0."""
    kind: Literal["euclidean"] = "euclidean"
    beta: float = 0.0

    def primal_norm(self, x, t) -> float:
        return float(np.linalg.norm(as_vector(t, name="t")))

    def dual_norm(self, x, w) -> float:
        return float(np.linalg.norm(as_vector(w, name="w")))

    def nu(self, dim: int) -> float:
        return 1.0


class InverseBoxMetric(FinslerMetric):
    """``||t||_x = max |t_i| / x_i`` on the positive orthant, dual ``sum x_i |w_i|``."""
    kind: Literal["inverse_box"] = "inverse_box"
    beta: float = 1.0

    @staticmethod
    def _base(x) -> np.ndarray:
        x = as_vector(x, name="x")
        if np.any(x <= 0) or not np.all(np.isfinite(x)):
            raise InvalidPointError("inverse-box metric requires every coordinate of x to be positive")
        return x

    def primal_norm(self, x, t) -> float:
        x = self._base(x)
        t = as_vector(t, x.shape[0], name="t")
        return float(np.max(np.abs(t) / x))

    def dual_norm(self, x, w) -> float:
        x = self._base(x)
        w = as_vector(w, x.shape[0], name="w")
        return float(np.sum(x * np.abs(w)))

    def nu(self, dim: int) -> float:
        # max|t_i|/x_i >= max|t_i| >= ||t||_2 / sqrt(d) on (0, 1]^d
        return 1.0 / np.sqrt(dim)


METRICS: Registry[FinslerMetric] = Registry("metric")
METRICS.register("euclidean", EuclideanMetric())
METRICS.register("inverse_box", InverseBoxMetric())


def primal_norm(metric: FinslerMetric, x, t) -> float:
    return metric.primal_norm(x, t)


def dual_norm(metric: FinslerMetric, x, w) -> float:
    return metric.dual_norm(x, w)
