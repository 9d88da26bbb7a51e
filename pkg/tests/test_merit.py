"""Tests for merit functions, test domains and rate fits."""
import logging

import numpy as np
import pytest

from viprox.core.exceptions import (
    ConfigurationError,
    EstimationError,
    InvalidArgumentError,
    InvalidPointError,
    UnknownTagError,
)
from viprox.geometry import Box, HalfSquaredEuclidean, InverseBarrier
from viprox.merit import (
    MERITS,
    TestDomain,
    bregman_depth,
    build_hooks,
    check_log_sum_inequality,
    distance_to_solution,
    fit_rate,
    grad_norm_sq,
    log_sum_inequality,
    restricted_gap,
    sobol_points,
    wardrop_residual,
)
from viprox.problems import (
    covariance_problem,
    make_bilinear,
    make_resource_allocation,
    make_sign_field,
    to_transformed_coordinates,
)
from viprox.solvers import CheckpointRecord


@pytest.fixture
def scalar_game():
    return make_bilinear(1, matrix=[[1.0]])


def test_gap_vanishes_at_solution(scalar_game):
    full = TestDomain()
    assert restricted_gap(scalar_game, full, [0.0, 0.0]) == pytest.approx(0.0, abs=1e-12)
    assert restricted_gap(scalar_game, full, [0.0, 0.0], method="grid") == pytest.approx(0.0, abs=1e-12)


def test_gap_on_singleton_domain(scalar_game):
    point = TestDomain(kind="box", lower=[0.5, -0.2], upper=[0.5, -0.2])
    assert restricted_gap(scalar_game, point, [0.5, -0.2]) == pytest.approx(0.0, abs=1e-12)
    assert restricted_gap(scalar_game, point, [0.5, -0.2], method="sampled") == pytest.approx(0.0, abs=1e-12)


def test_gap_closed_form_and_estimators_agree(scalar_game):
    full = TestDomain()
    x_hat = [0.5, 0.5]
    grid = restricted_gap(scalar_game, full, x_hat, method="grid", grid_points=1001)
    assert grid == pytest.approx(1.0)
    assert restricted_gap(scalar_game, full, x_hat, method="exact") == pytest.approx(grid)
    sampled = restricted_gap(scalar_game, full, x_hat, method="sampled")
    assert sampled == pytest.approx(grid, rel=0.02)
    assert sampled <= grid + 1e-12


def test_sampled_gap_is_bounded_by_grid():
    problem = make_sign_field(2, x_star=[0.2, -0.1])
    full = TestDomain(sample_budget=256)
    rng = np.random.default_rng(0)
    for x_hat in problem.domain.interior_sample(rng, 10):
        sampled = restricted_gap(problem, full, x_hat, method="sampled")
        grid = restricted_gap(problem, full, x_hat, method="grid", grid_points=201)
        exact = restricted_gap(problem, full, x_hat, method="exact")
        assert -1e-12 <= sampled <= exact + 1e-12
        assert grid <= exact + 1e-12
        # grid spacing 0.01 and |V| <= sqrt(2)
        assert exact - grid <= 0.01 * 2 * np.sqrt(2) + 1e-12


def test_gap_is_non_negative_inside_domain():
    problem = make_bilinear(2, matrix_seed=3, solution_seed=1)
    full = TestDomain(sample_budget=128)
    rng = np.random.default_rng(1)
    for x_hat in problem.domain.interior_sample(rng, 20):
        assert restricted_gap(problem, full, x_hat) >= 0
        assert restricted_gap(problem, full, x_hat, method="sampled", refine_starts=2, refine_steps=5) >= 0


def test_gap_rejects_bad_test_domains(scalar_game):
    with pytest.raises(ConfigurationError):
        restricted_gap(scalar_game, TestDomain(kind="box", lower=[0.5, 0.0], upper=[0.0, 1.0]), [0.0, 0.0])
    with pytest.raises(ConfigurationError):
        restricted_gap(scalar_game, TestDomain(kind="box", lower=[-2.0, 0.0], upper=[0.0, 1.0]), [0.0, 0.0])
    with pytest.raises(ConfigurationError):
        restricted_gap(make_sign_field(4), TestDomain(), np.zeros(4), method="grid")
    with pytest.raises(ConfigurationError):
        restricted_gap(covariance_problem(2), TestDomain(), covariance_problem(2).initial_point())
    resource = make_resource_allocation([2.0, 2.0], 2.0)
    with pytest.raises(ConfigurationError):
        restricted_gap(resource, TestDomain(), [1.0, 1.0])


def test_neighborhood_test_domain():
    problem = make_bilinear(1, matrix=[[1.0]], theta_star=[0.9], box_radius=1.0)
    lower, upper = TestDomain(kind="neighborhood").resolve(problem.domain, problem.known_solution)
    np.testing.assert_allclose(lower, [0.65, -0.25])
    np.testing.assert_allclose(upper, [1.0, 0.25])
    with pytest.raises(ConfigurationError):
        TestDomain(kind="neighborhood").resolve(problem.domain, None)


def test_sobol_points_cover_box():
    points = sobol_points(np.array([-1.0, 0.0]), np.array([1.0, 2.0]), 100)
    assert points.shape == (128, 2)
    assert np.all(points >= [-1.0, 0.0]) and np.all(points <= [1.0, 2.0])
    np.testing.assert_array_equal(points, sobol_points(np.array([-1.0, 0.0]), np.array([1.0, 2.0]), 100))


def test_wardrop_residual_examples():
    problem = make_resource_allocation([2.0, 2.0], 2.0)
    assert wardrop_residual(problem, [1.0, 1.0]) == pytest.approx(0.0)
    assert wardrop_residual(problem, [1.5, 0.5]) == pytest.approx(2.0 - 1.0 / 1.5)
    assert wardrop_residual(make_resource_allocation([2.0], 1.0), [1.0]) == 0.0
    transformed = to_transformed_coordinates(problem)
    assert wardrop_residual(transformed, [1.5, 0.5]) == pytest.approx(2.0 - 1.0 / 1.5)


def test_wardrop_residual_errors():
    problem = make_resource_allocation([2.0, 2.0], 2.0)
    with pytest.raises(InvalidPointError):
        wardrop_residual(problem, [1.5, 1.0])
    with pytest.raises(InvalidPointError):
        wardrop_residual(problem, [2.0, 0.0])
    with pytest.raises(InvalidArgumentError):
        wardrop_residual(make_bilinear(1, matrix=[[1.0]]), [0.0, 0.0])


def test_grad_norm_sq_examples(scalar_game):
    assert grad_norm_sq(scalar_game, [0.3, -0.4]) == pytest.approx(0.25)
    assert grad_norm_sq(scalar_game, [0.0, 0.0]) == 0.0
    covariance = covariance_problem(3, covariance_seed=2)
    assert grad_norm_sq(covariance, covariance.known_solution) == pytest.approx(0.0, abs=1e-20)
    with pytest.raises(InvalidPointError):
        grad_norm_sq(scalar_game, [2.0, 0.0])


def test_distance_to_solution(scalar_game):
    assert distance_to_solution(scalar_game, [0.3, 0.4]) == pytest.approx(0.5)
    with pytest.raises(ConfigurationError):
        distance_to_solution(make_resource_allocation([2.0, 2.0], 2.0, lambda_reg=1.0), [1.0, 1.0])


@pytest.mark.parametrize("scale, exponent", [(7.0, -1.0), (3.0, -0.5)])
def test_fit_rate_recovers_power_laws(scale, exponent):
    n = np.unique(np.geomspace(1, 10_000, 200).astype(int))
    fit = fit_rate(n, scale * n.astype(float) ** exponent)
    assert fit.slope == pytest.approx(exponent, abs=1e-6)
    assert fit.intercept == pytest.approx(np.log(scale), abs=1e-6)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.window[1] == 10_000
    assert fit.window[0] >= 5_000


def test_fit_rate_excludes_non_positive_values(caplog):
    n = np.arange(1, 101)
    values = 1.0 / n
    values[-5:] = 0.0
    with caplog.at_level(logging.WARNING, logger="viprox.merit.rates"):
        fit = fit_rate(n, values)
    assert fit.slope == pytest.approx(-1.0)
    assert fit.points == 46
    assert "excluded 5" in caplog.text
    with pytest.raises(EstimationError):
        fit_rate(n, np.zeros(100))
    with pytest.raises(EstimationError):
        fit_rate(n[:5], values[:5])


def test_log_sum_inequality():
    lhs, rhs = log_sum_inequality([1.0, 1.0, 1.0])
    assert lhs == pytest.approx(13 / 12)
    assert rhs == pytest.approx(1 + np.log(4.0))
    rng = np.random.default_rng(0)
    for _ in range(500):
        a = rng.exponential(rng.uniform(0.01, 100.0), size=int(rng.integers(1, 101)))
        assert check_log_sum_inequality(a)
    with pytest.raises(InvalidArgumentError):
        log_sum_inequality([1.0, -1.0])


def test_bregman_depth():
    x1 = np.array([0.2, -0.3])
    singleton = TestDomain(kind="box", lower=list(x1), upper=list(x1))
    assert bregman_depth(HalfSquaredEuclidean(), singleton, x1) == 0.0
    box = Box.symmetric(1.0, 2)
    assert bregman_depth(HalfSquaredEuclidean(), TestDomain(), [0.0, 0.0], domain=box) == pytest.approx(1.0)

    h = InverseBarrier()
    region = TestDomain(kind="box", lower=[0.1, 0.1], upper=[1.0, 1.0])
    center = np.array([0.5, 0.5])
    axis = np.linspace(0.1, 1.0, 201)
    grid = max(h.divergence([a, b], center) for a in axis for b in axis)
    assert bregman_depth(h, region, center) == pytest.approx(grid)


def test_merit_hooks():
    assert MERITS.names() == ["distance", "gap", "grad_norm_sq", "wardrop"]
    problem = make_bilinear(1, matrix=[[1.0]])
    hooks = build_hooks(problem, ["gap", "grad_norm_sq", "distance"])
    assert set(hooks) == {"gap_avg", "gap_last", "grad_norm_sq", "distance"}
    record = CheckpointRecord(n=1, x=np.zeros(2), x_lead=np.zeros(2), x_next=np.array([0.3, 0.4]),
                              avg=np.array([0.3, -0.4]))
    assert hooks["grad_norm_sq"](record) == pytest.approx(0.25)
    assert hooks["distance"](record) == pytest.approx(0.5)

    transformed = to_transformed_coordinates(make_resource_allocation([2.0, 2.0], 2.0))
    wardrop = build_hooks(transformed, ["wardrop"])["wardrop"]
    balanced = CheckpointRecord(n=1, x=np.full(2, 0.5), x_lead=np.full(2, 0.5), x_next=np.full(2, 0.5),
                                avg=np.full(2, 0.5))
    assert wardrop(balanced) == pytest.approx(0.0)
    last = build_hooks(transformed, ["wardrop"])["wardrop_last"]
    settled = CheckpointRecord(n=2, x=np.full(2, 0.5), x_lead=np.full(2, 0.5), x_next=np.full(2, 0.5),
                               avg=np.array([0.25, 0.75]))
    assert last(settled) == pytest.approx(0.0)
    # loads (1.5, 0.5) on the average
    assert wardrop(settled) == pytest.approx(2.0 - 1.0 / 1.5)

    with pytest.raises(InvalidArgumentError):
        build_hooks(problem, ["wardrop"])
    with pytest.raises(ConfigurationError):
        build_hooks(transformed, ["gap"])
    with pytest.raises(UnknownTagError):
        build_hooks(problem, ["regret"])
