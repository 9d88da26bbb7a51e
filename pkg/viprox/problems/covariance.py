"""
Covariance-learning game.

The generator ``G(z) = V z`` tries to match the covariance ``Sigma`` of the
data while the discriminator ``D(x) = x^T W x`` tries to tell them apart:

    f(V, W) = E[x^T W x] - E[z^T V^T W V z] = tr(W Sigma) - tr(W V V^T)

``V`` minimizes and ``W`` maximizes. The iterate is the flat vector
``(V.ravel(), W.ravel())``.
"""
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import ConfigurationError
from ..geometry.domains import Box, Unconstrained
from .base import Regularity, VIProblem
from .oracle import MinibatchNoise, NoNoise, StochasticOracle
from .registry import register_problem
from .specs import CovarianceSpec


def pack(V: np.ndarray, W: np.ndarray) -> np.ndarray:
    return np.concatenate([np.asarray(V, dtype=float).ravel(), np.asarray(W, dtype=float).ravel()])


def unpack(x: np.ndarray, dim: int) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    size = dim * dim
    return x[:size].reshape(dim, dim), x[size:].reshape(dim, dim)


class CovarianceGame(VIProblem):

    kind = "covariance"

    def __init__(self, covariance: np.ndarray, box_radius: Optional[float], params: dict):
        d = covariance.shape[0]
        self.n = d
        self.covariance = covariance
        self.chol = np.linalg.cholesky(covariance)
        domain = Unconstrained(dim=2 * d * d) if box_radius is None else Box.symmetric(box_radius, 2 * d * d)
        super().__init__(domain, Regularity(is_monotone=False), pack(self.chol, np.zeros((d, d))), params)

    def loss(self, x: np.ndarray) -> float:
        V, W = unpack(x, self.n)
        return float(np.trace(W @ self.covariance) - np.trace(W @ V @ V.T))

    def _field_from_moments(self, V, W, data_moment, latent_moment) -> np.ndarray:
        grad_V = -(W + W.T) @ V @ latent_moment
        grad_W = data_moment - V @ latent_moment @ V.T
        # min player descends, max player ascends
        return pack(grad_V, -grad_W)

    def field(self, x: np.ndarray) -> np.ndarray:
        V, W = unpack(x, self.n)
        return self._field_from_moments(V, W, self.covariance, np.eye(self.n))

    def minibatch_field(self, x: np.ndarray, rng: np.random.Generator, batch: int) -> np.ndarray:
        """Field with ``Sigma`` and ``I`` replaced by 1/m-normalized minibatch second moments."""
        V, W = unpack(x, self.n)
        data = rng.standard_normal((batch, self.n)) @ self.chol.T
        latent = rng.standard_normal((batch, self.n))
        return self._field_from_moments(V, W, data.T @ data / batch, latent.T @ latent / batch)

    def initial_point(self) -> np.ndarray:
        return pack(np.eye(self.n), np.zeros((self.n, self.n)))


def random_covariance(dim: int, seed: int) -> np.ndarray:
    """``B B^T / d + 0.5 I`` with ``B`` standard Gaussian; always positive definite."""
    B = np.random.default_rng(seed).standard_normal((dim, dim))
    return B @ B.T / dim + 0.5 * np.eye(dim)


def covariance_problem(dim: int, true_covariance: Optional[Sequence[Sequence[float]]] = None,
                       covariance_seed: int = 0, box_radius: Optional[float] = None) -> CovarianceGame:
    """Build the deterministic covariance game.

    Raises:
        ConfigurationError: If the covariance is not symmetric positive definite.
    """
    if dim < 1:
        raise ConfigurationError("covariance dimension must be at least 1")
    if true_covariance is None:
        sigma = random_covariance(dim, covariance_seed)
    else:
        sigma = np.atleast_2d(np.asarray(true_covariance, dtype=float))
    if sigma.shape != (dim, dim):
        raise ConfigurationError(f"covariance must be {dim}x{dim}, got {sigma.shape}")
    if not np.allclose(sigma, sigma.T):
        raise ConfigurationError("covariance must be symmetric")
    if np.linalg.eigvalsh(sigma).min() <= 0:
        raise ConfigurationError("covariance must be positive definite")
    params = {
        "dim": dim,
        "covariance": sigma.tolist(),
        "box_radius": box_radius,
    }
    return CovarianceGame(sigma, box_radius, params)


def make_covariance_game(dim: int, true_covariance: Optional[Sequence[Sequence[float]]] = None,
                         batch: Optional[int] = 32, seed: int = 0, covariance_seed: int = 0,
                         box_radius: Optional[float] = None) -> StochasticOracle:
    """Build the covariance game behind a stochastic oracle.

    With ``batch=None`` the oracle returns the exact field.
    """
    problem = covariance_problem(dim, true_covariance, covariance_seed, box_radius)
    if batch is not None and batch < 1:
        raise ConfigurationError("batch must be at least 1")
    noise = NoNoise() if batch is None else MinibatchNoise(batch=batch)
    return StochasticOracle(problem, noise, seed)


@register_problem("covariance")
def build_covariance(spec: CovarianceSpec) -> CovarianceGame:
    return covariance_problem(spec.dim, spec.covariance, spec.covariance_seed, spec.box_radius)
