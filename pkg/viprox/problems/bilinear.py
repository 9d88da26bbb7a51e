"""Bilinear min-max games on a box."""
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import svdvals

from ..core.exceptions import ConfigurationError
from ..geometry.domains import Box
from .base import Regularity, VIProblem
from .registry import register_problem
from .specs import BilinearSpec


class BilinearProblem(VIProblem):
    """``V(theta, phi) = (M (phi - phi*), -M^T (theta - theta*))``.

    The field is affine with a skew-symmetric Jacobian, so the restricted
    gap over a box is linear in the test point and has a closed form.
    """

    kind = "bilinear"

    def __init__(self, matrix: np.ndarray, theta_star: np.ndarray, phi_star: np.ndarray,
                 box_radius: float, params: dict):
        self.matrix = np.asarray(matrix, dtype=float)
        d = self.matrix.shape[0]
        self.half = d
        solution = np.concatenate([theta_star, phi_star])
        sigma_max = float(svdvals(self.matrix)[0])
        # ||V(x)|| <= sigma_max * ||x - x*|| and ||x - x*|| is largest at a corner of the box
        reach = float(np.linalg.norm(box_radius + np.abs(solution)))
        regularity = Regularity(
            is_monotone=True,
            G=sigma_max * reach,
            L=sigma_max,
            euclidean_G=sigma_max * reach,
            euclidean_L=sigma_max,
        )
        super().__init__(Box.symmetric(box_radius, 2 * d), regularity, solution, params)
        self.box_radius = box_radius
        self._jacobian = np.block([
            [np.zeros((d, d)), self.matrix],
            [-self.matrix.T, np.zeros((d, d))],
        ])

    def field(self, x: np.ndarray) -> np.ndarray:
        return self._jacobian @ (np.asarray(x, dtype=float) - self.known_solution)

    def field_batch(self, points: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(points) - self.known_solution) @ self._jacobian.T

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        return self._jacobian

    def loss(self, x: np.ndarray) -> float:
        """``f(theta, phi) = (theta - theta*)^T M (phi - phi*)``."""
        diff = np.asarray(x, dtype=float) - self.known_solution
        return float(diff[: self.half] @ self.matrix @ diff[self.half:])

    def exact_gap(self, x_hat, lower, upper) -> float:
        # <V(p), x_hat - p> = <x* - p, V(x_hat)> for a skew Jacobian
        v = self.field(x_hat)
        x_star = self.known_solution
        return float(np.sum(x_star * v - np.minimum(lower * v, upper * v)))

    def initial_point(self) -> np.ndarray:
        return np.full(self.dim, 0.5 * self.box_radius)


def make_bilinear(dim: int, matrix_seed: int = 0, theta_star: Optional[Sequence[float]] = None,
                  phi_star: Optional[Sequence[float]] = None, box_radius: float = 1.0,
                  matrix: Optional[Sequence[Sequence[float]]] = None,
                  solution_seed: Optional[int] = None, unit_norm: bool = False) -> BilinearProblem:
    """Build a bilinear game of dimension ``2 * dim``.

    Raises:
        ConfigurationError: If the solution does not lie strictly inside the box.
    """
    if dim < 1:
        raise ConfigurationError("bilinear dimension must be at least 1")
    if box_radius <= 0:
        raise ConfigurationError("box_radius must be positive")

    if matrix is not None:
        M = np.asarray(matrix, dtype=float)
        if M.shape != (dim, dim):
            raise ConfigurationError(f"matrix must be {dim}x{dim}, got {M.shape}")
    else:
        M = np.random.default_rng(matrix_seed).standard_normal((dim, dim))
    if unit_norm:
        sigma_max = float(svdvals(M)[0])
        if sigma_max == 0.0:
            raise ConfigurationError("cannot rescale a zero matrix")
        M = M / sigma_max

    if solution_seed is not None:
        draw = np.random.default_rng(solution_seed).uniform(-0.5 * box_radius, 0.5 * box_radius, 2 * dim)
        default_theta, default_phi = draw[:dim], draw[dim:]
    else:
        default_theta = default_phi = np.zeros(dim)
    theta = default_theta if theta_star is None else np.asarray(theta_star, dtype=float)
    phi = default_phi if phi_star is None else np.asarray(phi_star, dtype=float)
    for name, value in (("theta_star", theta), ("phi_star", phi)):
        if value.shape != (dim,):
            raise ConfigurationError(f"{name} must have length {dim}")
        if np.any(np.abs(value) >= box_radius):
            raise ConfigurationError(f"{name} must lie strictly inside the box of radius {box_radius}")

    params = {
        "dim": dim,
        "matrix": M.tolist() if matrix is not None else None,
        "matrix_seed": None if matrix is not None else matrix_seed,
        "theta_star": theta.tolist(),
        "phi_star": phi.tolist(),
        "box_radius": box_radius,
        "unit_norm": unit_norm,
    }
    return BilinearProblem(M, theta, phi, box_radius, params)


@register_problem("bilinear")
def build_bilinear(spec: BilinearSpec) -> BilinearProblem:
    return make_bilinear(
        spec.dim,
        matrix_seed=spec.matrix_seed,
        theta_star=spec.theta_star,
        phi_star=spec.phi_star,
        box_radius=spec.box_radius,
        matrix=spec.matrix,
        solution_seed=spec.solution_seed,
        unit_norm=spec.unit_norm,
    )
