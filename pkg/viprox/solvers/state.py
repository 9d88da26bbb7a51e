from dataclasses import dataclass
from typing import Optional

import numpy as np

from .policy import StepPolicy


@dataclass
class SolverState:
    """Iterate ``X_n`` with the averaging accumulators and the step policy.

    After a step, ``x_prev``, ``x_lead``, ``g``, ``g_lead``, ``delta`` and
    ``eta_used`` describe the iteration that produced ``x``: ``x_prev`` is
    the base point, ``x_lead`` the leading point, ``g`` and ``g_lead`` the
    oracle signals at those points.
    """
    x: np.ndarray
    n: int
    policy: StepPolicy
    avg_num: np.ndarray
    avg_den: float = 0.0
    x_lead: Optional[np.ndarray] = None
    x_prev: Optional[np.ndarray] = None
    g: Optional[np.ndarray] = None
    g_lead: Optional[np.ndarray] = None
    delta: float = float("nan")
    eta_used: float = float("nan")
    diverged: bool = False

    @classmethod
    def initial(cls, x0, policy: StepPolicy) -> "SolverState":
        x0 = np.array(x0, dtype=float)
        return cls(x=x0, n=1, policy=policy, avg_num=np.zeros_like(x0), x_lead=x0.copy())

    @property
    def average(self) -> np.ndarray:
        """Step-weighted average of the leading iterates produced so far."""
        if self.avg_den == 0:
            return self.x.copy()
        return self.avg_num / self.avg_den
