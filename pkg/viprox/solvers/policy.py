from dataclasses import dataclass, replace
from enum import Enum

import numpy as np


class StepKind(str, Enum):
    """Step-size schedules."""
    CONSTANT = "constant"
    INVERSE_SQRT = "inv_sqrt"
    ADAPTIVE = "adaptive"


@dataclass(frozen=True)
class StepPolicy:
    """Step-size policy and its running state.

    ``current`` is the step of the iteration about to run. ``sum_delta_sq``
    accumulates the squared residuals of the iterations already run; the
    adaptive kind sets ``eta_{n+1} = 1 / sqrt(1 + sum_delta_sq)`` from it.
    """
    kind: StepKind
    scale: float = 1.0
    sum_delta_sq: float = 0.0
    current: float = 1.0

    @classmethod
    def constant(cls, eta: float) -> "StepPolicy":
        return cls(StepKind.CONSTANT, scale=eta, current=eta)

    @classmethod
    def inverse_sqrt(cls, c: float) -> "StepPolicy":
        return cls(StepKind.INVERSE_SQRT, scale=c, current=c)

    @classmethod
    def adaptive(cls) -> "StepPolicy":
        return cls(StepKind.ADAPTIVE)

    def advanced(self, delta: float, n: int) -> "StepPolicy":
        """Policy after iteration ``n`` observed residual ``delta``."""
        total = self.sum_delta_sq + delta * delta
        if self.kind is StepKind.ADAPTIVE:
            eta = 1.0 / np.sqrt(1.0 + total)
        elif self.kind is StepKind.INVERSE_SQRT:
            eta = self.scale / np.sqrt(n + 1)
        else:
            eta = self.current
        return replace(self, sum_delta_sq=total, current=float(eta))
