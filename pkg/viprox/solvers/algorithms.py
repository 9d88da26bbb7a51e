"""Algorithm specifications, tagged by ``kind`` as they appear in experiment configs."""
from typing import Literal, Union

from pydantic import Field, field_validator
from typing_extensions import Annotated

from ..core.base import ViproxModel
from ..geometry.bregman import BREGMAN_FUNCTIONS
from ..geometry.metrics import METRICS
from .policy import StepPolicy


class EGConstant(ViproxModel):
    """Extra-gradient with a fixed step ``eta``."""
    kind: Literal["eg_constant"] = "eg_constant"
    eta: float = Field(gt=0)

    def policy(self) -> StepPolicy:
        return StepPolicy.constant(self.eta)


class EGInverseSqrt(ViproxModel):
    """Extra-gradient with ``eta_n = c / sqrt(n)``."""
    kind: Literal["eg_inv_sqrt"] = "eg_inv_sqrt"
    c: float = Field(gt=0)

    def policy(self) -> StepPolicy:
        return StepPolicy.inverse_sqrt(self.c)


class EGAdaptive(ViproxModel):
    """Extra-gradient with the adaptive step driven by Euclidean residuals."""
    kind: Literal["eg_adaptive"] = "eg_adaptive"

    def policy(self) -> StepPolicy:
        return StepPolicy.adaptive()


class AdaProx(ViproxModel):
    """Adaptive mirror-prox over a (metric, Bregman function) pair."""
    kind: Literal["adaprox"] = "adaprox"
    metric: str = "euclidean"
    bregman: str = "half_squared_euclidean"

    @field_validator("metric")
    @classmethod
    def _known_metric(cls, v: str) -> str:
        if v not in METRICS:
            raise ValueError(f"unknown metric '{v}'; valid metric tags: {', '.join(METRICS.names())}")
        return v

    @field_validator("bregman")
    @classmethod
    def _known_bregman(cls, v: str) -> str:
        if v not in BREGMAN_FUNCTIONS:
            raise ValueError(f"unknown bregman '{v}'; valid bregman tags: {', '.join(BREGMAN_FUNCTIONS.names())}")
        return v

    def policy(self) -> StepPolicy:
        return StepPolicy.adaptive()


AlgorithmSpec = Annotated[
    Union[EGConstant, EGInverseSqrt, EGAdaptive, AdaProx],
    Field(discriminator="kind"),
]

ALGORITHM_KINDS = ("eg_constant", "eg_inv_sqrt", "eg_adaptive", "adaprox")
