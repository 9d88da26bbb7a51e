"""
Feasible domains.

Every domain is a frozen pydantic model tagged by ``kind`` so that problem
configurations can carry it verbatim. ``DomainSpec`` is the discriminated
union of the shipped kinds.
"""
from typing import Literal, Tuple, Union

import numpy as np
from pydantic import Field, field_validator, model_validator
from typing_extensions import Annotated

from ..core.base import FrozenModel, as_vector
from ..core.exceptions import ConfigurationError, InvalidPointError
from .projection import project_capacity_simplex

# Membership slack for iterates that sit on a face up to rounding.
FEASIBILITY_TOL = 1e-9


class Domain(FrozenModel):
    """Common interface of the feasible sets."""

    def contains(self, x, tol: float = FEASIBILITY_TOL) -> bool:
        raise NotImplementedError("Subclasses must implement contains()")

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        """Coordinatewise box hull ``(lower, upper)``; may hold infinities."""
        raise NotImplementedError("Subclasses must implement bounds()")

    def interior_sample(self, rng: np.random.Generator, n: int, margin: float = 1e-3) -> np.ndarray:
        """Draw ``n`` points, shape ``(n, dim)``, kept ``margin`` away from singular faces."""
        raise NotImplementedError("Subclasses must implement interior_sample()")

    def check(self, x, name: str = "x") -> np.ndarray:
        """Return ``x`` as a vector, raising :class:`InvalidPointError` when outside the domain."""
        arr = as_vector(x, self.dim, name)
        if not self.contains(arr):
            raise InvalidPointError(f"{name} lies outside the {self.kind} domain")
        return arr


class Box(Domain):
    """Closed box ``[lower, upper]``."""
    kind: Literal["box"] = "box"
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    @model_validator(mode="after")
    def _ordered(self) -> "Box":
        if len(self.lower) != len(self.upper) or not self.lower:
            raise ValueError("box bounds must be non-empty and of equal length")
        if any(lo >= hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("box requires lower < upper componentwise")
        return self

    @classmethod
    def symmetric(cls, radius: float, dim: int) -> "Box":
        if radius <= 0:
            raise ConfigurationError("box radius must be positive")
        return cls(lower=(-radius,) * dim, upper=(radius,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def bounds(self):
        return np.array(self.lower), np.array(self.upper)

    def contains(self, x, tol: float = FEASIBILITY_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        lo, hi = self.bounds()
        return bool(np.all(np.isfinite(x)) and np.all(x >= lo - tol) and np.all(x <= hi + tol))

    def interior_sample(self, rng, n, margin=1e-3):
        lo, hi = self.bounds()
        pad = margin * (hi - lo)
        return rng.uniform(lo + pad, hi - pad, size=(n, self.dim))


class OpenUnitBoxUpperClosed(Domain):
    """The set ``(0, 1]^d``."""
    kind: Literal["open_unit_box"] = "open_unit_box"
    dim: int = Field(gt=0)

    def bounds(self):
        return np.zeros(self.dim), np.ones(self.dim)

    def contains(self, x, tol: float = FEASIBILITY_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(np.isfinite(x)) and np.all(x > 0) and np.all(x <= 1 + tol))

    def interior_sample(self, rng, n, margin=1e-3):
        return rng.uniform(margin, 1.0, size=(n, self.dim))


class CapacitySimplex(Domain):
    """Feasible loads of a parallel-link network.

    In ``loads`` coordinates the set is ``{0 <= l < c, sum(l) = R}``; in
    ``transformed`` coordinates ``x = 1 - l/c`` it is
    ``{0 < x <= 1, sum(c * (1 - x)) = R}``.
    """
    kind: Literal["capacity_simplex"] = "capacity_simplex"
    capacities: Tuple[float, ...]
    inflow: float
    coordinates: Literal["loads", "transformed"] = "loads"

    @field_validator("capacities")
    @classmethod
    def _positive(cls, v):
        if not v or any(c <= 0 for c in v):
            raise ValueError("capacities must be non-empty and positive")
        return v

    @model_validator(mode="after")
    def _feasible(self) -> "CapacitySimplex":
        if not 0 < self.inflow < sum(self.capacities):
            raise ValueError(
                f"inflow {self.inflow} must lie in (0, {sum(self.capacities)}) for these capacities"
            )
        return self

    @property
    def dim(self) -> int:
        return len(self.capacities)

    @property
    def c(self) -> np.ndarray:
        return np.array(self.capacities)

    def to_loads(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return x if self.coordinates == "loads" else self.c * (1.0 - x)

    def from_loads(self, loads) -> np.ndarray:
        loads = np.asarray(loads, dtype=float)
        return loads if self.coordinates == "loads" else 1.0 - loads / self.c

    def with_coordinates(self, coordinates: str) -> "CapacitySimplex":
        return self.model_copy(update={"coordinates": coordinates})

    def bounds(self):
        c = self.c
        upper_loads = np.minimum(c, self.inflow)
        if self.coordinates == "loads":
            return np.zeros(self.dim), upper_loads
        return 1.0 - upper_loads / c, np.ones(self.dim)

    def contains(self, x, tol: float = FEASIBILITY_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,) or not np.all(np.isfinite(x)):
            return False
        c = self.c
        if self.coordinates == "loads":
            loads = x
            in_range = np.all(x >= -tol) and np.all(x < c)
        else:
            loads = c * (1.0 - x)
            in_range = np.all(x > 0) and np.all(x <= 1 + tol)
        return bool(in_range and abs(loads.sum() - self.inflow) <= tol * max(1.0, self.inflow))

    def interior_sample(self, rng, n, margin=1e-3):
        c = self.c
        slack = 1.0 - self.inflow / c.sum()
        shrink = min(margin, slack / 2)
        cap = c * (1.0 - shrink)
        raw = rng.uniform(0.0, cap, size=(n, self.dim))
        loads = np.array([project_capacity_simplex(row, cap, self.inflow) for row in raw])
        return np.array([self.from_loads(row) for row in loads])


class Unconstrained(Domain):
    """The whole space ``R^d``."""
    kind: Literal["unconstrained"] = "unconstrained"
    dim: int = Field(gt=0)

    def bounds(self):
        return np.full(self.dim, -np.inf), np.full(self.dim, np.inf)

    def contains(self, x, tol: float = FEASIBILITY_TOL) -> bool:
        return bool(np.all(np.isfinite(np.asarray(x, dtype=float))))

    def interior_sample(self, rng, n, margin=1e-3):
        return rng.standard_normal((n, self.dim))


DomainSpec = Annotated[
    Union[Box, OpenUnitBoxUpperClosed, CapacitySimplex, Unconstrained],
    Field(discriminator="kind"),
]
