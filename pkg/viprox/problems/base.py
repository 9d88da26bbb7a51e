"""
The variational-inequality problem primitive.

A problem bundles a feasible domain, a deterministic vector field ``V`` and
regularity metadata. Solvers never call ``field`` directly; they go through a
:class:`~viprox.problems.oracle.StochasticOracle`, which adds noise when
configured.
"""
import hashlib
import json
from typing import Any, Dict, Optional

import numpy as np
from pydantic import Field

from ..core.base import ViproxModel, as_vector
from ..geometry.domains import Domain


class Regularity(ViproxModel):
    """Regularity metadata of a vector field.

    ``G`` and ``L`` are the bound and smoothness constants measured in the
    dual local norms of ``metric``; the ``euclidean_*`` fields are their
    Euclidean counterparts.
    """
    is_monotone: bool
    metric: str = "euclidean"
    G: Optional[float] = Field(default=None, ge=0)
    L: Optional[float] = Field(default=None, ge=0)
    euclidean_G: Optional[float] = Field(default=None, ge=0)
    euclidean_L: Optional[float] = Field(default=None, ge=0)


class VIProblem:
    """Base class for problem instances.

    Subclasses set ``kind`` and implement :meth:`field`. Instances are treated
    as immutable once built.
    """

    kind: str = "problem"

    def __init__(self, domain: Domain, regularity: Regularity,
                 known_solution: Optional[np.ndarray] = None,
                 params: Optional[Dict[str, Any]] = None):
        self.domain = domain
        self.regularity = regularity
        self.known_solution = None if known_solution is None else as_vector(known_solution, domain.dim)
        self.params = dict(params or {})

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def stable_id(self) -> int:
        """64-bit identifier derived from the kind and the construction parameters."""
        payload = json.dumps({"kind": self.kind, "params": self.params}, sort_keys=True, default=float)
        digest = hashlib.blake2b(payload.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")

    def field(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError("Subclasses must implement field()")

    def field_batch(self, points: np.ndarray) -> np.ndarray:
        """Evaluate the field on the rows of ``points``."""
        return np.array([self.field(p) for p in np.atleast_2d(points)])

    def jacobian(self, x: np.ndarray) -> Optional[np.ndarray]:
        """Jacobian of the field where it is available in closed form."""
        return None

    def exact_gap(self, x_hat: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> Optional[float]:
        """Closed-form restricted gap over the box ``[lower, upper]``, if known."""
        return None

    def minibatch_field(self, x: np.ndarray, rng: np.random.Generator, batch: int) -> np.ndarray:
        raise NotImplementedError(f"{self.kind} has no minibatch oracle")

    def initial_point(self) -> np.ndarray:
        """Default starting point of a run."""
        lower, upper = self.domain.bounds()
        if np.all(np.isfinite(lower)) and np.all(np.isfinite(upper)):
            return 0.5 * (lower + upper)
        return np.zeros(self.dim)

    def check(self, x, name: str = "x") -> np.ndarray:
        return self.domain.check(x, name)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim}, domain={self.domain.kind})"

