"""
Stochastic first-order oracles.

An oracle wraps a problem with a noise model and owns the random stream
used to draw the noise. The stream is seeded from ``(seed, problem.stable_id)``
so two oracles for different problems never share draws, and the same
(seed, problem, call sequence) always reproduces the same outputs.
"""
from typing import List, Literal, Union

import numpy as np
from pydantic import Field, field_validator
from typing_extensions import Annotated

from ..core.base import ViproxModel
from ..core.exceptions import ConfigurationError
from .base import VIProblem


class NoNoise(ViproxModel):
    """Exact field evaluations."""
    kind: Literal["none"] = "none"


class GaussianNoise(ViproxModel):
    """Additive zero-mean Gaussian noise with per-coordinate standard deviation ``sigma``."""
    kind: Literal["gaussian"] = "gaussian"
    sigma: Union[float, List[float]] = 1.0

    @field_validator("sigma")
    @classmethod
    def _positive(cls, v):
        values = v if isinstance(v, list) else [v]
        if not values or any(s <= 0 for s in values):
            raise ValueError("sigma must be positive")
        return v


class MinibatchNoise(ViproxModel):
    """Replace population moments by minibatch estimates (covariance game only)."""
    kind: Literal["minibatch"] = "minibatch"
    batch: int = Field(default=32, ge=1)


NoiseModel = Annotated[Union[NoNoise, GaussianNoise, MinibatchNoise], Field(discriminator="kind")]


class StochasticOracle:
    """Noisy evaluator of a problem's field.

    The oracle carries mutable RNG state and is meant for a single owner;
    concurrent runs construct their own oracles.
    """

    def __init__(self, base: VIProblem, noise: Union[NoNoise, GaussianNoise, MinibatchNoise, None] = None,
                 seed: int = 0):
        if seed < 0:
            raise ConfigurationError("seed must be non-negative")
        self.base = base
        self.noise = noise or NoNoise()
        self.seed = seed
        if isinstance(self.noise, GaussianNoise):
            sigma = np.asarray(self.noise.sigma, dtype=float)
            if sigma.ndim == 1 and sigma.shape[0] != base.dim:
                raise ConfigurationError(f"sigma must be a scalar or have length {base.dim}")
            self._sigma = sigma
        if isinstance(self.noise, MinibatchNoise) and type(base).minibatch_field is VIProblem.minibatch_field:
            raise ConfigurationError(f"minibatch noise is not available for {base.kind}")
        self.rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, base.stable_id])))

    @property
    def is_deterministic(self) -> bool:
        return isinstance(self.noise, NoNoise)

    def evaluate(self, x) -> np.ndarray:
        """Return ``V(x)`` plus one noise draw.

        Raises:
            InvalidPointError: If ``x`` is outside the problem domain.
        """
        x = self.base.check(x)
        if isinstance(self.noise, GaussianNoise):
            return self.base.field(x) + self._sigma * self.rng.standard_normal(self.base.dim)
        if isinstance(self.noise, MinibatchNoise):
            return self.base.minibatch_field(x, self.rng, self.noise.batch)
        return self.base.field(x)

    __call__ = evaluate

    def __repr__(self) -> str:
        return f"StochasticOracle({self.base!r}, noise={self.noise.kind}, seed={self.seed})"
