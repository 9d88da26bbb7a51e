"""
Problem library: variational inequalities and their stochastic oracles.

Importing this package registers every shipped problem builder with
:data:`PROBLEMS`.
"""
from .base import Regularity, VIProblem
from .bilinear import BilinearProblem, make_bilinear
from .covariance import CovarianceGame, covariance_problem, make_covariance_game, pack, unpack
from .oracle import GaussianNoise, MinibatchNoise, NoiseModel, NoNoise, StochasticOracle
from .registry import PROBLEMS, build_problem, register_problem
from .resource_allocation import (
    ResourceAllocationProblem,
    TransformedResourceAllocation,
    make_resource_allocation,
    to_transformed_coordinates,
)
from .sign_field import SignFieldProblem, make_sign_field
from .specs import (
    BilinearSpec,
    CovarianceSpec,
    ProblemSpec,
    ResourceAllocationSpec,
    SignFieldSpec,
    TransformedResourceAllocationSpec,
)


def evaluate(oracle: StochasticOracle, x):
    """Evaluate ``oracle`` at ``x``."""
    return oracle.evaluate(x)


__all__ = [
    "Regularity",
    "VIProblem",
    "BilinearProblem",
    "make_bilinear",
    "CovarianceGame",
    "covariance_problem",
    "make_covariance_game",
    "pack",
    "unpack",
    "GaussianNoise",
    "MinibatchNoise",
    "NoiseModel",
    "NoNoise",
    "StochasticOracle",
    "PROBLEMS",
    "build_problem",
    "register_problem",
    "ResourceAllocationProblem",
    "TransformedResourceAllocation",
    "make_resource_allocation",
    "to_transformed_coordinates",
    "SignFieldProblem",
    "make_sign_field",
    "BilinearSpec",
    "CovarianceSpec",
    "ProblemSpec",
    "ResourceAllocationSpec",
    "SignFieldSpec",
    "TransformedResourceAllocationSpec",
    "evaluate",
]
