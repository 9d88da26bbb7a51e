"""
Geometry: feasible domains, Finsler metrics and Bregman-Finsler functions.

All values here are frozen pydantic models and every operation is pure.
"""
from .bregman import (
    BREGMAN_FUNCTIONS,
    BregmanFunction,
    HalfSquaredEuclidean,
    InverseBarrier,
    bregman_divergence,
    prox_map,
)
from .domains import (
    FEASIBILITY_TOL,
    Box,
    CapacitySimplex,
    Domain,
    DomainSpec,
    OpenUnitBoxUpperClosed,
    Unconstrained,
)
from .metrics import METRICS, EuclideanMetric, FinslerMetric, InverseBoxMetric, dual_norm, primal_norm
from .projection import project_box, project_capacity_simplex

__all__ = [
    "BREGMAN_FUNCTIONS",
    "BregmanFunction",
    "HalfSquaredEuclidean",
    "InverseBarrier",
    "bregman_divergence",
    "prox_map",
    "FEASIBILITY_TOL",
    "Box",
    "CapacitySimplex",
    "Domain",
    "DomainSpec",
    "OpenUnitBoxUpperClosed",
    "Unconstrained",
    "METRICS",
    "EuclideanMetric",
    "FinslerMetric",
    "InverseBoxMetric",
    "dual_norm",
    "primal_norm",
    "project_box",
    "project_capacity_simplex",
]
