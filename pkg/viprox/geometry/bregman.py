"""
Bregman-Finsler functions, their divergences and prox-mappings.

For a regularizer ``h`` the divergence is

    D(x', x) = h(x') - h(x) - <grad h(x), x' - x>

and the prox-mapping is ``prox_x(y) = argmin_{x'} <y, x - x'> + D(x', x)``
over the feasible domain.
"""
import logging
from typing import ClassVar, Literal, Tuple, Type

import numpy as np
from scipy.optimize import brentq

from ..core.base import FrozenModel, as_vector
from ..core.exceptions import InvalidArgumentError, InvalidPointError, ProxConvergenceError
from ..core.registry import Registry
from .domains import Box, CapacitySimplex, Domain, OpenUnitBoxUpperClosed, Unconstrained
from .projection import project_capacity_simplex

logger = logging.getLogger(__name__)

PROX_TOLERANCE = 1e-10
PROX_MAX_ITER = 200
PROX_NEWTON_STEPS = 3


class BregmanFunction(FrozenModel):
    """Base class for regularizers ``h`` with strong-convexity modulus ``strong_convexity``."""
    kind: str
    strong_convexity: float = 1.0

    supported_domains: ClassVar[Tuple[Type[Domain], ...]] = ()

    def value(self, x) -> float:
        raise NotImplementedError("Subclasses must implement value()")

    def gradient(self, x) -> np.ndarray:
        raise NotImplementedError("Subclasses must implement gradient()")

    def divergence(self, x_to, x_from) -> float:
        x_to = as_vector(x_to, name="x_to")
        x_from = as_vector(x_from, x_to.shape[0], name="x_from")
        return float(self.value(x_to) - self.value(x_from) - self.gradient(x_from) @ (x_to - x_from))

    def prox(self, domain: Domain, x, y) -> np.ndarray:
        raise NotImplementedError("Subclasses must implement prox()")

    def supports(self, domain: Domain) -> bool:
        return isinstance(domain, self.supported_domains)

    def _require(self, domain: Domain) -> None:
        if not self.supports(domain):
            raise InvalidArgumentError(f"{self.kind} prox is not available on a {domain.kind} domain")


class HalfSquaredEuclidean(BregmanFunction):
    """``h(x) = ||x||^2 / 2``; the prox is the Euclidean projection of ``x + y``."""
    kind: Literal["half_squared_euclidean"] = "half_squared_euclidean"
    strong_convexity: float = 1.0

    supported_domains: ClassVar[Tuple[Type[Domain], ...]] = (Box, Unconstrained, CapacitySimplex)

    def supports(self, domain: Domain) -> bool:
        if isinstance(domain, CapacitySimplex):
            return domain.coordinates == "loads"
        return super().supports(domain)

    def value(self, x) -> float:
        x = as_vector(x)
        return 0.5 * float(x @ x)

    def gradient(self, x) -> np.ndarray:
        return as_vector(x).copy()

    def divergence(self, x_to, x_from) -> float:
        diff = as_vector(x_to, name="x_to") - as_vector(x_from, name="x_from")
        return 0.5 * float(diff @ diff)

    def prox(self, domain: Domain, x, y) -> np.ndarray:
        self._require(domain)
        x = as_vector(x, domain.dim)
        y = as_vector(y, domain.dim, name="y")
        step = x + y
        if isinstance(domain, Box):
            lower, upper = domain.bounds()
            return np.clip(step, lower, upper)
        if isinstance(domain, CapacitySimplex):
            return project_capacity_simplex(step, domain.c, domain.inflow)
        return step


class InverseBarrier(BregmanFunction):
    """``h(x) = sum 1/x_i`` on ``(0, 1]^d``.

    Strongly convex relative to the inverse-box metric in the sense
    ``D(x', x) >= ||x' - x||_x^2``, i.e. modulus 2 under the half-factor
    convention.
    """
    kind: Literal["inverse_barrier"] = "inverse_barrier"
    strong_convexity: float = 2.0

    supported_domains: ClassVar[Tuple[Type[Domain], ...]] = (OpenUnitBoxUpperClosed, CapacitySimplex)

    def supports(self, domain: Domain) -> bool:
        if isinstance(domain, CapacitySimplex):
            return domain.coordinates == "transformed"
        return super().supports(domain)

    @staticmethod
    def _positive(x, name: str = "x") -> np.ndarray:
        x = as_vector(x, name=name)
        if np.any(x <= 0) or not np.all(np.isfinite(x)):
            raise InvalidPointError(f"{name} must be positive for the inverse barrier")
        return x

    def value(self, x) -> float:
        return float(np.sum(1.0 / self._positive(x)))

    def gradient(self, x) -> np.ndarray:
        return -1.0 / self._positive(x) ** 2

    def divergence(self, x_to, x_from) -> float:
        x_to = self._positive(x_to, "x_to")
        x_from = self._positive(x_from, "x_from")
        return float(np.sum((x_to - x_from) ** 2 / (x_from ** 2 * x_to)))

    def prox(self, domain: Domain, x, y) -> np.ndarray:
        self._require(domain)
        x = self._positive(as_vector(x, domain.dim))
        y = as_vector(y, domain.dim, name="y")
        # 1/x'^2 = 1/x^2 - y at an interior stationary point
        b = 1.0 / x ** 2 - y
        if isinstance(domain, OpenUnitBoxUpperClosed):
            return _clamped_inverse_sqrt(b)
        return self._prox_capacity(domain, b)

    def _prox_capacity(self, domain: CapacitySimplex, b: np.ndarray) -> np.ndarray:
        c = domain.c
        R = domain.inflow

        def constraint(mu: float) -> float:
            return float(np.sum(c * (1.0 - _clamped_inverse_sqrt(b + mu * c))) - R)

        # every coordinate sits at the upper face at lo, so constraint(lo) = -R
        lo = float(np.min((1.0 - b) / c))
        width = 1.0
        hi = lo + width
        for _ in range(PROX_MAX_ITER):
            if constraint(hi) > 0:
                break
            width *= 2.0
            hi = lo + width
        else:
            raise ProxConvergenceError("could not bracket the capacity multiplier",
                                       residual=abs(constraint(hi)), iterations=PROX_MAX_ITER)

        mu, info = brentq(constraint, lo, hi, xtol=1e-15, maxiter=PROX_MAX_ITER,
                          full_output=True, disp=False)
        # Newton on mu only, so x stays a function of mu and stationarity holds exactly
        residual = constraint(mu)
        for _ in range(PROX_NEWTON_STEPS):
            a = b + mu * c
            free = a > 1.0
            if residual == 0.0 or not free.any():
                break
            slope = 0.5 * float(np.sum(c[free] ** 2 * a[free] ** -1.5))
            candidate = mu - residual / slope
            candidate_residual = constraint(candidate)
            if abs(candidate_residual) >= abs(residual):
                break
            mu, residual = candidate, candidate_residual
        if abs(residual) > PROX_TOLERANCE * max(1.0, R):
            raise ProxConvergenceError("inverse-barrier prox on the capacity simplex did not converge",
                                       residual=abs(residual), iterations=info.iterations)
        logger.debug("capacity prox: mu=%.6g after %d root-finding steps", mu, info.iterations)
        return _clamped_inverse_sqrt(b + mu * c)


def _clamped_inverse_sqrt(a: np.ndarray) -> np.ndarray:
    """``a^{-1/2}`` where ``a > 1``, else the closed upper face value 1."""
    out = np.ones_like(a)
    inside = a > 1.0
    out[inside] = 1.0 / np.sqrt(a[inside])
    return out


BREGMAN_FUNCTIONS: Registry[BregmanFunction] = Registry("bregman")
BREGMAN_FUNCTIONS.register("half_squared_euclidean", HalfSquaredEuclidean())
BREGMAN_FUNCTIONS.register("inverse_barrier", InverseBarrier())


def bregman_divergence(h: BregmanFunction, x_to, x_from) -> float:
    return h.divergence(x_to, x_from)


def prox_map(h: BregmanFunction, domain: Domain, x, y) -> np.ndarray:
    return h.prox(domain, x, y)
