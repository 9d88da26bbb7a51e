"""
Multi-seed experiment execution, reports and sweeps.

Seeds run in share-nothing worker processes when more than one worker is
requested. Results are merged in seed order, so every artifact is
independent of completion order.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import Field
from scipy import stats

from ..config import settings
from ..core.base import ViproxModel
from ..core.exceptions import ConfigValidationError, EstimationError
from ..merit.gap import restricted_gap
from ..merit.hooks import build_hooks
from ..merit.rates import RateFit, fit_rate
from ..problems import StochasticOracle, build_problem
from ..solvers.runner import Trace, run
from .config import ExperimentConfig
from .io import ensure_dir, write_json, write_plot_csv, write_rows, write_trace_csv

logger = logging.getLogger(__name__)

CONFIDENCE = 0.95
REPORT_FILE = "report.json"
PLOT_FILE = "plot.csv"
SWEEP_REPORT_FILE = "sweep_report.json"
SWEEP_TABLE_FILE = "sweep.csv"


@dataclass
class SeedResult:
    seed: int
    trace: Trace
    initial_gap_last: Optional[float] = None


class MeritSummary(ViproxModel):
    """Mean and confidence band of a final merit across the seeds where it is finite."""
    mean: Optional[float] = None
    ci_half_width: Optional[float] = None
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    n_seeds: int = 0


class SeedReport(ViproxModel):
    seed: int
    diverged: bool
    diverged_at: Optional[int] = None
    final_eta: Optional[float] = None
    initial_gap_last: Optional[float] = None
    final_gap_last: Optional[float] = None
    final_merits: Dict[str, Optional[float]] = Field(default_factory=dict)
    rate_fits: Dict[str, Optional[RateFit]] = Field(default_factory=dict)


class RunReport(ViproxModel):
    name: Optional[str] = None
    problem: str
    algorithm: str
    iterations: int
    seeds: List[int]
    diverged_count: int
    non_converged: bool
    merits: Dict[str, MeritSummary] = Field(default_factory=dict)
    per_seed: List[SeedReport] = Field(default_factory=list)


class SweepRow(ViproxModel):
    label: str
    value: Any = None
    diverged_count: int
    non_converged: bool
    merits: Dict[str, MeritSummary] = Field(default_factory=dict)
    mean_slopes: Dict[str, Optional[float]] = Field(default_factory=dict)


class SweepReport(ViproxModel):
    name: Optional[str] = None
    parameter: str
    rows: List[SweepRow]


def _finite(value: float) -> Optional[float]:
    value = float(value)
    return value if np.isfinite(value) else None


def confidence_interval(values: Sequence[float], level: float = CONFIDENCE) -> Tuple[float, float]:
    """Mean and half-width of the Student-t interval with ``S - 1`` degrees of freedom.

    The half-width is 0 for a single value or a constant sample.
    """
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise ValueError("confidence_interval needs at least one value")
    mean = float(data.mean())
    if data.size == 1:
        return mean, 0.0
    std = float(data.std(ddof=1))
    if std == 0.0:
        return mean, 0.0
    quantile = float(stats.t.ppf(0.5 + level / 2, data.size - 1))
    return mean, quantile * std / np.sqrt(data.size)


def summarize(values: Sequence[Optional[float]]) -> MeritSummary:
    finite = [v for v in values if v is not None and np.isfinite(v)]
    if not finite:
        return MeritSummary()
    mean, half = confidence_interval(finite)
    return MeritSummary(mean=mean, ci_half_width=half, ci_low=mean - half, ci_high=mean + half,
                        n_seeds=len(finite))


def _run_seed(config_data: Dict[str, Any], seed: int) -> SeedResult:
    """Run one seed of a config given as plain data, so it can cross a process boundary."""
    config = ExperimentConfig.model_validate(config_data)
    problem = build_problem(config.problem)
    oracle = StochasticOracle(problem, config.noise, seed)
    x0 = config.run.initial_point.resolve(problem, seed)
    hooks = build_hooks(problem, config.merits.names, config.merits.test_domain)
    initial_gap = None
    if "gap" in config.merits.names:
        initial_gap = restricted_gap(problem, config.merits.test_domain, x0)
    trace = run(oracle, config.algorithm, config.run.iterations, seed=seed, x0=x0, merit_hooks=hooks,
                checkpoint_dense=config.run.checkpoint_dense,
                checkpoints_per_decade=config.run.checkpoints_per_decade,
                merit_every=config.run.merit_every)
    return SeedResult(seed=seed, trace=trace, initial_gap_last=initial_gap)


def run_seeds(config: ExperimentConfig, workers: Optional[int] = None) -> List[SeedResult]:
    """Run every seed of ``config``; results come back in seed order."""
    workers = settings.VIPROX_WORKERS if workers is None else workers
    data = config.model_dump(mode="json")
    seeds = list(config.run.seeds)
    if workers <= 1 or len(seeds) == 1:
        results = [_run_seed(data, seed) for seed in seeds]
    else:
        results = []
        with ProcessPoolExecutor(max_workers=min(workers, len(seeds))) as pool:
            futures = {pool.submit(_run_seed, data, seed): seed for seed in seeds}
            for future in as_completed(futures):
                results.append(future.result())
                logger.debug("seed %d finished", futures[future])
    order = {seed: i for i, seed in enumerate(seeds)}
    return sorted(results, key=lambda r: order[r.seed])


def _seed_report(config: ExperimentConfig, result: SeedResult) -> SeedReport:
    trace = result.trace
    finals: Dict[str, Optional[float]] = {}
    fits: Dict[str, Optional[RateFit]] = {}
    for column in sorted(trace.merits):
        finals[column] = None if trace.diverged else _finite(trace.final_merit(column))
        iterations, values = trace.series(column)
        try:
            fits[column] = fit_rate(iterations, values, window_fraction=config.merits.fit_window)
        except EstimationError as exc:
            logger.warning("no rate fit for %s (seed %d): %s", column, result.seed, exc)
            fits[column] = None
    return SeedReport(
        seed=result.seed,
        diverged=trace.diverged,
        diverged_at=trace.diverged_at,
        final_eta=_finite(trace.next_eta),
        initial_gap_last=result.initial_gap_last,
        final_gap_last=finals.get("gap_last"),
        final_merits=finals,
        rate_fits=fits,
    )


def build_report(config: ExperimentConfig, results: Sequence[SeedResult]) -> RunReport:
    """Aggregate seed results.

    A run is non-convergent when a seed diverged or its last-iterate gap
    ended no lower than it started.
    """
    per_seed = [_seed_report(config, r) for r in results]
    columns = sorted({column for r in per_seed for column in r.final_merits})
    stalled = any(
        r.initial_gap_last is not None and r.final_gap_last is not None and r.final_gap_last >= r.initial_gap_last
        for r in per_seed
    )
    diverged = sum(1 for r in per_seed if r.diverged)
    return RunReport(
        name=config.name,
        problem=config.problem.kind,
        algorithm=config.algorithm.kind,
        iterations=config.run.iterations,
        seeds=list(config.run.seeds),
        diverged_count=diverged,
        non_converged=diverged > 0 or stalled,
        merits={column: summarize([r.final_merits.get(column) for r in per_seed]) for column in columns},
        per_seed=per_seed,
    )


def plot_rows(results: Sequence[SeedResult]) -> List[Dict[str, Any]]:
    """Mean merit and confidence band across seeds at every checkpoint iteration."""
    columns = sorted({column for r in results for column in r.trace.merits})
    rows = []
    for column in columns:
        iterations = sorted({n for r in results for n in r.trace.merits.get(column, {})})
        for n in iterations:
            values = [r.trace.merits[column].get(n) for r in results if column in r.trace.merits]
            values = [v for v in values if v is not None and np.isfinite(v)]
            if not values:
                continue
            mean, half = confidence_interval(values)
            rows.append({"iter": n, "merit": column, "mean": mean, "ci_low": mean - half,
                         "ci_high": mean + half, "n_seeds": len(values)})
    return rows


def run_experiment(config: ExperimentConfig, out_dir: Union[str, Path],
                   workers: Optional[int] = None) -> RunReport:
    """Run all seeds and write one trace CSV per seed, ``report.json`` and ``plot.csv``."""
    out = ensure_dir(Path(out_dir))
    started = time.perf_counter()
    logger.info("experiment %s: %s on %s, %d seed(s)", config.name or "<unnamed>", config.algorithm.kind,
                config.problem.kind, len(config.run.seeds))
    results = run_seeds(config, workers)
    for result in results:
        write_trace_csv(out / f"trace_seed{result.seed}.csv", result.trace)
    report = build_report(config, results)
    write_json(out / REPORT_FILE, report)
    write_plot_csv(out / PLOT_FILE, plot_rows(results))
    logger.info("experiment finished in %.2fs: %d diverged, artifacts in %s",
                time.perf_counter() - started, report.diverged_count, out)
    return report


def _mean_slope(report: RunReport, column: str) -> Optional[float]:
    slopes = [r.rate_fits[column].slope for r in report.per_seed if r.rate_fits.get(column) is not None]
    return float(np.mean(slopes)) if slopes else None


def run_sweep(config: ExperimentConfig, out_dir: Union[str, Path],
              workers: Optional[int] = None) -> SweepReport:
    """Run every sweep variant into ``variant_<i>/`` and write the comparison.

    Raises:
        ConfigValidationError: If ``config`` has no sweep section.
    """
    if config.sweep is None:
        raise ConfigValidationError("config has no sweep section", ["sweep"])
    out = ensure_dir(Path(out_dir))
    rows = []
    for index, variant in enumerate(config.variants()):
        label = config.sweep.label(index)
        logger.info("sweep variant %d: %s", index, label)
        report = run_experiment(variant, out / f"variant_{index}", workers)
        rows.append(SweepRow(
            label=label,
            value=config.sweep.values[index],
            diverged_count=report.diverged_count,
            non_converged=report.non_converged,
            merits=report.merits,
            mean_slopes={column: _mean_slope(report, column) for column in report.merits},
        ))
    sweep = SweepReport(name=config.name, parameter=config.sweep.parameter, rows=rows)
    write_json(out / SWEEP_REPORT_FILE, sweep)
    write_rows(out / SWEEP_TABLE_FILE, sweep_header(sweep), sweep_table(sweep))
    return sweep


def sweep_header(sweep: SweepReport) -> List[str]:
    columns = sorted({column for row in sweep.rows for column in row.merits})
    header = ["label", "diverged", "non_converged"]
    for column in columns:
        header += [f"{column}_mean", f"{column}_ci", f"{column}_slope"]
    return header


def sweep_table(sweep: SweepReport) -> List[Dict[str, Any]]:
    table = []
    for row in sweep.rows:
        entry: Dict[str, Any] = {"label": row.label, "diverged": row.diverged_count,
                                 "non_converged": row.non_converged}
        for column, summary in row.merits.items():
            entry[f"{column}_mean"] = summary.mean
            entry[f"{column}_ci"] = summary.ci_half_width
            entry[f"{column}_slope"] = row.mean_slopes.get(column)
        table.append(entry)
    return table
