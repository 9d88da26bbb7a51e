"""
Solvers: extra-gradient with constant, vanishing and adaptive steps, and
AdaProx over any registered (metric, Bregman function) pair.
"""
from .algorithms import ALGORITHM_KINDS, AdaProx, AlgorithmSpec, EGAdaptive, EGConstant, EGInverseSqrt
from .policy import StepKind, StepPolicy
from .runner import (
    CheckpointRecord,
    MeritHook,
    Trace,
    as_oracle,
    checkpoint_schedule,
    eta_infinity_estimate,
    make_stepper,
    run,
)
from .state import SolverState
from .steps import adaprox_step, eg_step, escaped, euclidean_projection

__all__ = [
    "ALGORITHM_KINDS",
    "AdaProx",
    "AlgorithmSpec",
    "EGAdaptive",
    "EGConstant",
    "EGInverseSqrt",
    "StepKind",
    "StepPolicy",
    "CheckpointRecord",
    "MeritHook",
    "Trace",
    "as_oracle",
    "checkpoint_schedule",
    "eta_infinity_estimate",
    "make_stepper",
    "run",
    "SolverState",
    "adaprox_step",
    "eg_step",
    "escaped",
    "euclidean_projection",
]
