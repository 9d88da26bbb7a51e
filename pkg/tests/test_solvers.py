"""Tests for step policies, single iterations and the run loop."""
import numpy as np
import pytest
from pydantic import ValidationError
from scipy.optimize import minimize_scalar

from viprox.core.exceptions import ConfigurationError, DivergenceError
from viprox.geometry import EuclideanMetric, HalfSquaredEuclidean, InverseBarrier, InverseBoxMetric
from viprox.problems import (
    GaussianNoise,
    StochasticOracle,
    make_bilinear,
    make_resource_allocation,
    make_sign_field,
    to_transformed_coordinates,
)
from viprox.solvers import (
    AdaProx,
    EGAdaptive,
    EGConstant,
    EGInverseSqrt,
    SolverState,
    StepKind,
    StepPolicy,
    adaprox_step,
    checkpoint_schedule,
    eg_step,
    eta_infinity_estimate,
    run,
)


@pytest.fixture
def scalar_game():
    return make_bilinear(1, matrix=[[1.0]])


@pytest.fixture
def transformed_resource():
    return to_transformed_coordinates(make_resource_allocation([2.0, 2.0], 2.0))


def test_adaptive_policy():
    policy = StepPolicy.adaptive()
    assert policy.current == 1.0
    policy = policy.advanced(3.0, 1)
    assert policy.current == pytest.approx(1 / np.sqrt(10.0))
    assert policy.sum_delta_sq == pytest.approx(9.0)
    assert policy.advanced(0.0, 2).current == policy.current


def test_fixed_policies():
    constant = StepPolicy.constant(0.5).advanced(10.0, 1)
    assert constant.kind is StepKind.CONSTANT
    assert constant.current == 0.5
    inverse = StepPolicy.inverse_sqrt(0.2)
    assert inverse.current == 0.2
    assert inverse.advanced(1.0, 3).current == pytest.approx(0.2 / 2.0)


def test_algorithm_specs():
    assert EGConstant(eta=0.5).policy() == StepPolicy.constant(0.5)
    assert EGInverseSqrt(c=0.1).policy().kind is StepKind.INVERSE_SQRT
    assert EGAdaptive().policy().kind is StepKind.ADAPTIVE
    with pytest.raises(ValidationError):
        EGConstant(eta=0.0)
    with pytest.raises(ValidationError, match="valid metric tags"):
        AdaProx(metric="spherical")


def test_eg_step_by_hand(scalar_game):
    oracle = StochasticOracle(scalar_game)
    state = SolverState.initial([1.0, 1.0], StepPolicy.constant(0.5))
    state = eg_step(state, oracle)
    np.testing.assert_allclose(state.x_lead, [0.5, 1.0])
    np.testing.assert_allclose(state.x, [0.5, 1.0])
    assert state.delta == pytest.approx(0.5)
    assert state.n == 2
    np.testing.assert_allclose(state.average, [0.5, 1.0])


def test_eg_step_fixed_point():
    problem = make_bilinear(2, matrix_seed=1, solution_seed=3)
    oracle = StochasticOracle(problem)
    state = eg_step(SolverState.initial(problem.known_solution, StepPolicy.adaptive()), oracle)
    np.testing.assert_allclose(state.x_lead, problem.known_solution)
    np.testing.assert_allclose(state.x, problem.known_solution)
    assert state.policy.current == 1.0

    flat = make_sign_field(2, x_star=[0.3, -0.3])
    start = np.array([0.3, -0.3])
    state = eg_step(SolverState.initial(start, StepPolicy.constant(0.7)), StochasticOracle(flat))
    np.testing.assert_array_equal(state.x, start)


def test_adaprox_euclidean_matches_adaptive_eg():
    problem = make_bilinear(3, matrix_seed=2, box_radius=2.0)
    x0 = problem.initial_point()
    eg_state = SolverState.initial(x0, StepPolicy.adaptive())
    ada_state = SolverState.initial(x0, StepPolicy.adaptive())
    oracle = StochasticOracle(problem)
    for _ in range(100):
        eg_state = eg_step(eg_state, oracle)
        ada_state = adaprox_step(ada_state, oracle, EuclideanMetric(), HalfSquaredEuclidean())
        np.testing.assert_array_equal(eg_state.x, ada_state.x)
        assert eg_state.policy.current == ada_state.policy.current


def test_adaprox_step_on_transformed_resource(transformed_resource):
    oracle = StochasticOracle(transformed_resource)
    x1 = np.array([0.3, 0.7])
    state = adaprox_step(SolverState.initial(x1, StepPolicy.adaptive()), oracle, InverseBoxMetric(),
                         InverseBarrier())
    assert state.eta_used == 1.0
    h = InverseBarrier()

    def prox_oracle(x, y):
        # the domain is the segment x_1 + x_2 = 1 inside (0, 1]^2
        def objective(t):
            z = np.array([t, 1.0 - t])
            return y @ (x - z) + h.divergence(z, x)
        t = minimize_scalar(objective, bounds=(1e-9, 1 - 1e-9), method="bounded",
                            options={"xatol": 1e-12}).x
        return np.array([t, 1.0 - t])

    g = transformed_resource.field(x1)
    x_lead = prox_oracle(x1, -g)
    g_lead = transformed_resource.field(x_lead)
    np.testing.assert_allclose(state.x_lead, x_lead, atol=1e-6)
    np.testing.assert_allclose(state.x, prox_oracle(x1, -g_lead), atol=1e-6)
    assert state.delta == pytest.approx(InverseBoxMetric().dual_norm(x_lead, g_lead - g), abs=1e-6)


@pytest.mark.parametrize("case", ["bilinear", "resource"])
def test_energy_inequality(case, transformed_resource):
    if case == "bilinear":
        problem = make_bilinear(2, matrix_seed=6, solution_seed=1)
        metric, h = EuclideanMetric(), HalfSquaredEuclidean()
        x0 = problem.initial_point()
    else:
        problem = transformed_resource
        metric, h = InverseBoxMetric(), InverseBarrier()
        x0 = np.array([0.3, 0.7])
    oracle = StochasticOracle(problem)
    rng = np.random.default_rng(0)
    bases = problem.domain.interior_sample(rng, 200)
    state = SolverState.initial(x0, StepPolicy.adaptive())
    for _ in range(50):
        state = adaprox_step(state, oracle, metric, h)
        eta, x, lead, nxt = state.eta_used, state.x_prev, state.x_lead, state.x
        for p in bases:
            bound = (h.divergence(p, x) - eta * state.g_lead @ (lead - p)
                     - eta * (state.g_lead - state.g) @ (nxt - lead)
                     - h.divergence(nxt, lead) - h.divergence(lead, x))
            assert h.divergence(p, nxt) <= bound + 1e-7


def test_step_identity_and_monotone_steps():
    problem = make_bilinear(3, matrix_seed=0)
    trace = run(problem, AdaProx(), 500)
    eta, sum_sq = trace.series("eta"), trace.series("sum_delta_sq")
    np.testing.assert_allclose(sum_sq[:-1], 1.0 / eta[1:] ** 2 - 1.0, rtol=1e-9, atol=1e-12)
    assert eta[0] == 1.0
    assert np.all(np.diff(eta) <= 0)
    assert eta_infinity_estimate(trace) == pytest.approx(1.0 / np.sqrt(1.0 + sum_sq[-1]))


def test_step_settles_on_a_normalized_game():
    problem = make_bilinear(10, matrix_seed=7, box_radius=5.0, unit_norm=True)
    x0 = np.random.default_rng(0).uniform(-0.5, 0.5, problem.dim)
    T = 20_000
    trace = run(problem, AdaProx(), T, x0=x0)
    assert trace.eta[-1] > 0.05
    assert abs(trace.eta[-1] - trace.eta[T // 2 - 1]) <= 1e-3
    assert trace.sum_delta_sq[-1] == pytest.approx(1.0 / trace.next_eta ** 2 - 1.0, rel=1e-9)


def test_single_iteration_run(scalar_game):
    trace = run(scalar_game, EGConstant(eta=0.5), 1, x0=[1.0, 1.0])
    assert trace.length == 1
    assert len(trace.checkpoints()) == 1
    record = trace.final()
    np.testing.assert_allclose(record.avg, record.x_lead)
    np.testing.assert_allclose(record.x, [1.0, 1.0])


def test_checkpoint_schedule():
    np.testing.assert_array_equal(checkpoint_schedule(50), np.arange(1, 51))
    schedule = checkpoint_schedule(100_000, dense=100, per_decade=10)
    assert schedule[0] == 1 and schedule[-1] == 100_000
    assert np.all(np.diff(schedule) > 0)
    assert set(range(1, 101)) <= set(schedule.tolist())
    assert len(schedule) == 100 + 30
    np.testing.assert_array_equal(checkpoint_schedule(25, every=10), [10, 20, 25])
    np.testing.assert_array_equal(checkpoint_schedule(30, every=10), [10, 20, 30])
    np.testing.assert_array_equal(checkpoint_schedule(3, every=1), [1, 2, 3])


def test_merit_hooks_fill_checkpoints_only(scalar_game):
    seen = []

    def hook(record):
        seen.append(record.n)
        return float(np.linalg.norm(record.avg))

    trace = run(scalar_game, EGConstant(eta=0.5), 300, merit_hooks={"norm": hook},
                checkpoint_dense=10, checkpoints_per_decade=5)
    iterations, values = trace.series("norm")
    np.testing.assert_array_equal(iterations, checkpoint_schedule(300, 10, 5))
    assert seen == iterations.tolist()
    rows = trace.to_rows(["norm"])
    assert len(rows) == 300
    assert rows[10]["norm"] is None
    assert rows[299]["norm"] == pytest.approx(values[-1])
    assert not any(row["diverged"] for row in rows)


def test_divergence_truncates_or_raises():
    problem = make_bilinear(2, matrix_seed=0, box_radius=5.0)
    trace = run(problem, EGConstant(eta=1.0), 100, divergence_norm=0.1)
    assert trace.diverged and trace.diverged_at == 1
    assert trace.length == 1
    assert trace.to_rows()[-1]["diverged"]
    with pytest.raises(DivergenceError) as info:
        run(problem, EGConstant(eta=1.0), 100, divergence_norm=0.1, raise_on_divergence=True)
    assert info.value.iteration == 1


def test_runs_are_deterministic():
    problem = make_bilinear(2, matrix_seed=0)
    traces = [run(StochasticOracle(problem, GaussianNoise(sigma=1.0), seed=5), AdaProx(), 200)
              for _ in range(2)]
    np.testing.assert_array_equal(traces[0].eta, traces[1].eta)
    np.testing.assert_array_equal(traces[0].final().x_next, traces[1].final().x_next)


def test_incompatible_algorithms(transformed_resource):
    with pytest.raises(ConfigurationError):
        run(make_bilinear(1, matrix=[[1.0]]), AdaProx(metric="inverse_box", bregman="inverse_barrier"), 10)
    with pytest.raises(ConfigurationError):
        run(transformed_resource, EGAdaptive(), 10)
    with pytest.raises(ConfigurationError):
        run(transformed_resource, AdaProx(), 0)


def test_constant_step_above_limit_fails_to_converge(scalar_game):
    trace = run(scalar_game, EGConstant(eta=1.04), 100, x0=[0.1, 0.1])
    norms = [np.linalg.norm(record.x_next) for record in trace.checkpoints()]
    assert trace.diverged or min(norms[-10:]) >= 0.5
