"""
Base classes and helpers shared by the viprox subpackages.

Configuration-like values are pydantic models that reject unknown fields;
geometry values are additionally frozen. Arrays cross module boundaries as
one-dimensional float64 numpy vectors.
"""
from typing import Any, Optional, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from .exceptions import ConfigValidationError, InvalidArgumentError

M = TypeVar("M", bound=BaseModel)


class ViproxModel(BaseModel):
    """Base model for specs and reports."""
    model_config = ConfigDict(extra="forbid")


class FrozenModel(BaseModel):
    """Base model for immutable geometry values."""
    model_config = ConfigDict(extra="forbid", frozen=True)


def as_vector(x: Any, dim: Optional[int] = None, name: str = "x") -> np.ndarray:
    """Coerce ``x`` to a one-dimensional float64 array, optionally of length ``dim``."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise InvalidArgumentError(f"{name} must have length {dim}, got {arr.shape[0]}")
    return arr


def error_fields(exc: ValidationError) -> list:
    """Dotted locations of the fields named in a pydantic validation error."""
    return [".".join(str(part) for part in err["loc"]) for err in exc.errors()]


def build_model(model: Type[M], **values: Any) -> M:
    """Validate ``values`` into ``model``, raising :class:`ConfigValidationError` on failure."""
    try:
        return model.model_validate(values)
    except ValidationError as exc:
        fields = error_fields(exc)
        details = "; ".join(f"{'.'.join(map(str, e['loc'])) or model.__name__}: {e['msg']}" for e in exc.errors())
        raise ConfigValidationError(f"invalid {model.__name__}: {details}", fields) from exc
