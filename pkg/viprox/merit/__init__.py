"""
Merit functions: restricted gap, Wardrop residual, field norm, distances,
Bregman depth and empirical rate fits.
"""
from .gap import bregman_depth, gap_objective, restricted_gap, sobol_points
from .hooks import MERITS, build_hooks
from .rates import RateFit, check_log_sum_inequality, fit_rate, log_sum_inequality
from .regions import TestDomain
from .residuals import distance_to_solution, grad_norm_sq, wardrop_residual

__all__ = [
    "bregman_depth",
    "gap_objective",
    "restricted_gap",
    "sobol_points",
    "MERITS",
    "build_hooks",
    "RateFit",
    "check_log_sum_inequality",
    "fit_rate",
    "log_sum_inequality",
    "TestDomain",
    "distance_to_solution",
    "grad_norm_sq",
    "wardrop_residual",
]
