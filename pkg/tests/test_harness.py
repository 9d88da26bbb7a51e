"""Tests for experiment configs, reports, artifacts and the CLI."""
import csv
import json

import numpy as np
import pytest
import yaml
from typer.testing import CliRunner

from viprox.core.exceptions import ArtifactIOError, ConfigValidationError, UnknownTagError
from viprox.harness import (
    TRACE_HEADER,
    ExperimentConfig,
    build_report,
    bundled_configs,
    confidence_interval,
    dump_config,
    load_config,
    parse_config,
    run_experiment,
    run_seeds,
)
from viprox.harness.cli import app, exit_code
from viprox.harness.config import set_path
from viprox.harness.experiment import summarize
from viprox.harness.io import format_cell
from viprox.merit import grad_norm_sq
from viprox.problems import build_problem

runner = CliRunner()


def _config(**overrides):
    data = {
        "name": "small",
        "problem": {"kind": "bilinear", "dim": 2, "matrix_seed": 0},
        "algorithm": {"kind": "adaprox"},
        "noise": {"kind": "gaussian", "sigma": 0.5},
        "run": {"iterations": 200, "seeds": [0, 1, 2]},
        "merits": {"names": ["gap", "grad_norm_sq"], "test_domain": {"sample_budget": 64}},
    }
    data.update(overrides)
    return data


def _read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.reader(handle))


def test_parse_config_fills_defaults():
    config = parse_config(_config(noise={"kind": "none"}))
    assert isinstance(config, ExperimentConfig)
    assert config.algorithm.metric == "euclidean"
    assert config.run.initial_point.kind == "default"
    assert config.merits.fit_window == 0.5
    assert config.sweep is None
    assert build_problem(config.problem).dim == 4


@pytest.mark.parametrize("section, key, tag, category", [
    ("problem", "kind", "trilinear", "problem"),
    ("algorithm", "kind", "mirror_descent", "algorithm"),
    ("algorithm", "metric", "spherical", "metric"),
    ("noise", "kind", "laplace", "noise"),
])
def test_unknown_tags_list_valid_tags(section, key, tag, category):
    data = _config()
    data[section] = dict(data[section], **{key: tag})
    with pytest.raises(UnknownTagError) as info:
        parse_config(data)
    assert info.value.category == category
    assert info.value.tag == tag
    assert info.value.valid
    assert ", ".join(info.value.valid) in str(info.value)


def test_unknown_merit_is_a_tag_error():
    with pytest.raises(UnknownTagError) as info:
        parse_config(_config(merits={"names": ["regret"]}))
    assert "wardrop" in info.value.valid


def test_invalid_fields_are_named():
    with pytest.raises(ConfigValidationError) as info:
        parse_config(_config(run={"iterations": 0}))
    assert any("iterations" in field for field in info.value.fields)
    with pytest.raises(ConfigValidationError) as info:
        parse_config(_config(colour="red"))
    assert any("colour" in field for field in info.value.fields)
    data = _config()
    del data["algorithm"]
    with pytest.raises(ConfigValidationError) as info:
        parse_config(data)
    assert "algorithm" in info.value.fields
    with pytest.raises(ConfigValidationError):
        parse_config(_config(run={"iterations": 10, "seeds": [1, 1]}))
    with pytest.raises(ConfigValidationError):
        parse_config(["not", "a", "mapping"])


def test_bundled_configs_round_trip():
    names = bundled_configs()
    assert {"fig1_untuned", "fig1_tuned", "fig1_sweep", "bilinear_smooth", "sign_field",
            "resource_allocation", "covariance_game", "covariance_game_eg"} <= set(names)
    for name in names:
        config = load_config(name)
        assert parse_config(yaml.safe_load(dump_config(config))) == config
    assert load_config("bilinear_full").problem.box_radius == 5.0
    assert load_config("bilinear_smooth").problem.unit_norm


def test_load_config_errors(tmp_path):
    with pytest.raises(ArtifactIOError):
        load_config(tmp_path / "missing.yaml")
    broken = tmp_path / "broken.yaml"
    broken.write_text("problem: [unclosed\n")
    with pytest.raises(ConfigValidationError):
        load_config(broken)


def test_sweep_variants():
    config = load_config("fig1_sweep")
    variants = config.variants()
    assert [v.algorithm.eta for v in variants] == [0.5, 1.0, 1.04]
    assert all(v.sweep is None for v in variants)
    assert config.sweep.label(2) == "algorithm.eta=1.04"
    with pytest.raises(ConfigValidationError):
        set_path({"run": 3}, "run.iterations", 10)


def test_initial_points():
    data = _config(run={"iterations": 10, "initial_point": {"kind": "constant", "value": 0.9}})
    config = parse_config(data)
    problem = build_problem(config.problem)
    np.testing.assert_array_equal(config.run.initial_point.resolve(problem, 0), np.full(4, 0.9))
    uniform = parse_config(_config(run={"iterations": 10, "initial_point": {"kind": "uniform", "radius": 0.1}}))
    first = uniform.run.initial_point.resolve(problem, 3)
    assert np.all(np.abs(first - problem.known_solution) <= 0.1)
    np.testing.assert_array_equal(first, uniform.run.initial_point.resolve(problem, 3))
    assert not np.array_equal(first, uniform.run.initial_point.resolve(problem, 4))
    with pytest.raises(ConfigValidationError):
        parse_config(_config(run={"iterations": 10, "initial_point": {"kind": "point"}}))


def test_confidence_interval():
    mean, half = confidence_interval([0.3] * 20)
    assert mean == pytest.approx(0.3) and half == pytest.approx(0.0, abs=1e-12)
    assert confidence_interval([2.0]) == (2.0, 0.0)
    mean, half = confidence_interval([1.0, 2.0, 3.0])
    assert mean == pytest.approx(2.0)
    # t quantile with 2 degrees of freedom
    assert half == pytest.approx(4.302652729911275 / np.sqrt(3.0), rel=1e-9)
    summary = summarize([1.0, None, float("nan"), 3.0])
    assert summary.n_seeds == 2
    assert summarize([None]).mean is None


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(True) == "1"
    assert format_cell(7) == "7"
    assert format_cell(float("nan")) == "nan"
    assert float(format_cell(0.1 + 0.2)) == 0.1 + 0.2


def test_exit_codes():
    assert exit_code(ArtifactIOError("cannot write", "/x")) == 3
    assert exit_code(ConfigValidationError("bad")) == 2
    assert exit_code(RuntimeError("boom")) == 1


def test_run_experiment_writes_artifacts(tmp_path):
    config = parse_config(_config())
    report = run_experiment(config, tmp_path)
    assert report.seeds == [0, 1, 2]
    assert report.diverged_count == 0
    assert set(report.merits) == {"gap_avg", "gap_last", "grad_norm_sq"}
    assert report.merits["grad_norm_sq"].n_seeds == 3
    for seed in (0, 1, 2):
        rows = _read_csv(tmp_path / f"trace_seed{seed}.csv")
        assert rows[0] == TRACE_HEADER
        assert len(rows) == 201
        assert rows[1][0] == "1"
        assert rows[1][TRACE_HEADER.index("wardrop")] == ""
    saved = json.loads((tmp_path / "report.json").read_text())
    assert saved["per_seed"][0]["seed"] == 0
    plot = _read_csv(tmp_path / "plot.csv")
    assert plot[0] == ["iter", "merit", "mean", "ci_low", "ci_high", "n_seeds"]
    assert all(row[5] == "3" for row in plot[1:])


def test_parallel_runs_are_byte_identical(tmp_path):
    config = parse_config(_config(merits={"names": ["grad_norm_sq"]}))
    run_experiment(config, tmp_path / "serial", workers=1)
    run_experiment(config, tmp_path / "parallel", workers=2)
    for seed in (0, 1, 2):
        name = f"trace_seed{seed}.csv"
        assert (tmp_path / "serial" / name).read_bytes() == (tmp_path / "parallel" / name).read_bytes()


def test_cli_run_untuned_constant_step(tmp_path):
    result = runner.invoke(app, ["run", "fig1_untuned", "--out", str(tmp_path), "--quiet"])
    assert result.exit_code == 0, result.output
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["non_converged"] is True
    assert report["algorithm"] == "eg_constant"
    rows = _read_csv(tmp_path / "trace_seed0.csv")
    assert rows[0] == TRACE_HEADER
    assert len(rows) == 201


def test_cli_validate(tmp_path):
    result = runner.invoke(app, ["validate", "fig1_tuned"])
    assert result.exit_code == 0
    assert yaml.safe_load(result.stdout)["algorithm"]["eta"] == 0.5

    bad = tmp_path / "bad.yaml"
    bad.write_text(yaml.safe_dump(_config(run={"iterations": 0})))
    assert runner.invoke(app, ["validate", str(bad)]).exit_code == 2
    unknown = tmp_path / "unknown.yaml"
    unknown.write_text(yaml.safe_dump(_config(problem={"kind": "trilinear"})))
    assert runner.invoke(app, ["validate", str(unknown)]).exit_code == 2
    assert runner.invoke(app, ["validate", str(tmp_path / "missing.yaml")]).exit_code == 3


def test_cli_sweep(tmp_path):
    result = runner.invoke(app, ["sweep", "fig1_sweep", "--out", str(tmp_path), "--quiet"])
    assert result.exit_code == 0, result.output
    for index in range(3):
        assert (tmp_path / f"variant_{index}" / "report.json").exists()
    sweep = json.loads((tmp_path / "sweep_report.json").read_text())
    assert [row["value"] for row in sweep["rows"]] == [0.5, 1.0, 1.04]
    assert sweep["rows"][0]["non_converged"] is False
    assert sweep["rows"][2]["non_converged"] is True
    table = _read_csv(tmp_path / "sweep.csv")
    assert table[0][:3] == ["label", "diverged", "non_converged"]
    assert len(table) == 4

    plain = tmp_path / "plain.yaml"
    plain.write_text(yaml.safe_dump(_config()))
    assert runner.invoke(app, ["sweep", str(plain), "--out", str(tmp_path / "x")]).exit_code == 2


def test_cli_list():
    result = runner.invoke(app, ["list"])
    assert result.exit_code == 0
    assert "fig1_untuned" in result.stdout.split()


def _shortened(name, c=None):
    data = load_config(name).model_dump(mode="json")
    data = set_path(data, "problem.dim", 2)
    data = set_path(data, "run.iterations", 2000)
    data = set_path(data, "run.seeds", [0, 1])
    if c is not None:
        data = set_path(data, "algorithm.c", c)
    return parse_config(data)


def test_covariance_game_with_both_solvers():
    adaptive = _shortened("covariance_game")
    # a short horizon needs a larger constant than the bundled baseline
    baseline = _shortened("covariance_game_eg", c=0.2)
    assert adaptive.algorithm.kind == "adaprox"
    assert baseline.algorithm.kind == "eg_inv_sqrt"
    assert adaptive.noise == baseline.noise

    problem = build_problem(adaptive.problem)
    initial = grad_norm_sq(problem, problem.initial_point())
    reports = {}
    for config in (adaptive, baseline):
        results = run_seeds(config)
        for result in results:
            assert not result.trace.diverged
            assert np.all(np.isfinite(result.trace.eta))
            assert np.all(np.isfinite(result.trace.delta))
            _, values = result.trace.series("grad_norm_sq")
            assert np.all(np.isfinite(values))
            assert values[-1] < initial
        reports[config.algorithm.kind] = build_report(config, results)

    ours, theirs = reports["adaprox"], reports["eg_inv_sqrt"]
    assert ours.seeds == theirs.seeds == [0, 1]
    for report in (ours, theirs):
        summary = report.merits["grad_norm_sq"]
        assert summary.n_seeds == 2
        assert 0.0 <= summary.mean < initial
