"""Discontinuous monotone field ``g * sign(x - x*)``, the subgradient of ``g * ||x - x*||_1``."""
from typing import Optional, Sequence

import numpy as np

from ..core.exceptions import ConfigurationError
from ..geometry.domains import Box
from .base import Regularity, VIProblem
from .registry import register_problem
from .specs import SignFieldSpec


class SignFieldProblem(VIProblem):

    kind = "sign_field"

    def __init__(self, g_scale: float, x_star: np.ndarray, box_radius: float, params: dict):
        d = x_star.shape[0]
        bound = g_scale * np.sqrt(d)
        regularity = Regularity(is_monotone=True, G=bound, euclidean_G=bound)
        super().__init__(Box.symmetric(box_radius, d), regularity, x_star, params)
        self.g_scale = g_scale
        self.box_radius = box_radius

    def field(self, x: np.ndarray) -> np.ndarray:
        # np.sign(0) == 0 selects the zero subgradient at the kink
        return self.g_scale * np.sign(np.asarray(x, dtype=float) - self.known_solution)

    def field_batch(self, points: np.ndarray) -> np.ndarray:
        return self.g_scale * np.sign(np.atleast_2d(points) - self.known_solution)

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        # zero almost everywhere
        return np.zeros((self.dim, self.dim))

    def exact_gap(self, x_hat, lower, upper) -> float:
        x_hat = np.asarray(x_hat, dtype=float)
        g = self.g_scale
        s = self.known_solution
        total = 0.0
        for xi, si, lo, hi in zip(x_hat, s, lower, upper):
            # coordinatewise supremum of g * sign(p - s) * (xi - p) over p in [lo, hi]
            candidates = []
            if hi > si:
                candidates.append(g * (xi - max(lo, si)))
            if lo < si:
                candidates.append(g * (min(hi, si) - xi))
            if lo <= si <= hi:
                candidates.append(0.0)
            total += max(candidates)
        return float(total)

    def initial_point(self) -> np.ndarray:
        return np.full(self.dim, 0.9 * self.box_radius)


def make_sign_field(dim: int, g_scale: float = 1.0, x_star: Optional[Sequence[float]] = None,
                    box_radius: float = 1.0) -> SignFieldProblem:
    if dim < 1:
        raise ConfigurationError("sign-field dimension must be at least 1")
    if g_scale <= 0:
        raise ConfigurationError("g_scale must be positive")
    if box_radius <= 0:
        raise ConfigurationError("box_radius must be positive")
    solution = np.zeros(dim) if x_star is None else np.asarray(x_star, dtype=float)
    if solution.shape != (dim,):
        raise ConfigurationError(f"x_star must have length {dim}")
    if np.any(np.abs(solution) > box_radius):
        raise ConfigurationError(f"x_star must lie inside the box of radius {box_radius}")
    params = {"dim": dim, "g_scale": g_scale, "x_star": solution.tolist(), "box_radius": box_radius}
    return SignFieldProblem(g_scale, solution, box_radius, params)


@register_problem("sign_field")
def build_sign_field(spec: SignFieldSpec) -> SignFieldProblem:
    return make_sign_field(spec.dim, spec.g_scale, spec.x_star, spec.box_radius)
