"""Serializable problem specifications, tagged by ``kind`` as they appear in experiment configs."""
from typing import List, Literal, Optional, Union

from pydantic import Field, model_validator
from typing_extensions import Annotated

from ..core.base import ViproxModel


class BilinearSpec(ViproxModel):
    """``f(theta, phi) = (theta - theta*)^T M (phi - phi*)`` on ``[-r, r]^{2d}``.

    ``M`` is either given explicitly or drawn i.i.d. standard Gaussian from
    ``matrix_seed``; ``unit_norm`` rescales it to spectral norm one. The
    solution is given explicitly, drawn from ``solution_seed``, or zero.
    """
    kind: Literal["bilinear"] = "bilinear"
    dim: int = Field(ge=1)
    matrix: Optional[List[List[float]]] = None
    matrix_seed: int = 0
    theta_star: Optional[List[float]] = None
    phi_star: Optional[List[float]] = None
    solution_seed: Optional[int] = None
    box_radius: float = Field(default=1.0, gt=0)
    unit_norm: bool = False

    @model_validator(mode="after")
    def _shapes(self) -> "BilinearSpec":
        if self.matrix is not None and (
            len(self.matrix) != self.dim or any(len(row) != self.dim for row in self.matrix)
        ):
            raise ValueError(f"matrix must be {self.dim}x{self.dim}")
        for name in ("theta_star", "phi_star"):
            value = getattr(self, name)
            if value is not None and len(value) != self.dim:
                raise ValueError(f"{name} must have length {self.dim}")
        return self


class SignFieldSpec(ViproxModel):
    """``V(x)_i = g * sign(x_i - x*_i)`` on ``[-r, r]^d``."""
    kind: Literal["sign_field"] = "sign_field"
    dim: int = Field(ge=1)
    g_scale: float = Field(default=1.0, gt=0)
    x_star: Optional[List[float]] = None
    box_radius: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _shapes(self) -> "SignFieldSpec":
        if self.x_star is not None and len(self.x_star) != self.dim:
            raise ValueError(f"x_star must have length {self.dim}")
        return self


class ResourceAllocationSpec(ViproxModel):
    """Parallel M/M/1 servers with capacities ``c`` sharing inflow ``R``, in load coordinates."""
    kind: Literal["resource_allocation"] = "resource_allocation"
    capacities: List[float] = Field(min_length=1)
    inflow: float = Field(gt=0)
    lambda_reg: float = Field(default=0.0, ge=0)


class TransformedResourceAllocationSpec(ViproxModel):
    """The resource-allocation problem in coordinates ``x = 1 - l/c``.

    With ``jacobian_scaling`` the regularization term carries the chain-rule
    factor ``c_r``; otherwise the unscaled form is used.
    """
    kind: Literal["resource_allocation_transformed"] = "resource_allocation_transformed"
    capacities: List[float] = Field(min_length=1)
    inflow: float = Field(gt=0)
    lambda_reg: float = Field(default=0.0, ge=0)
    jacobian_scaling: bool = False


class CovarianceSpec(ViproxModel):
    """Covariance-learning game between a linear generator ``V`` and a quadratic discriminator ``W``.

    The true covariance is given explicitly or generated from
    ``covariance_seed`` as ``B B^T / d + 0.5 I``.
    """
    kind: Literal["covariance"] = "covariance"
    dim: int = Field(ge=1)
    covariance: Optional[List[List[float]]] = None
    covariance_seed: int = 0
    box_radius: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _shapes(self) -> "CovarianceSpec":
        if self.covariance is not None and (
            len(self.covariance) != self.dim or any(len(row) != self.dim for row in self.covariance)
        ):
            raise ValueError(f"covariance must be {self.dim}x{self.dim}")
        return self


ProblemSpec = Annotated[
    Union[BilinearSpec, SignFieldSpec, ResourceAllocationSpec, TransformedResourceAllocationSpec, CovarianceSpec],
    Field(discriminator="kind"),
]
