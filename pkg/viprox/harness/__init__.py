"""
Experiment harness: YAML configs, multi-seed execution, reports, sweeps
and the ``viprox`` command line.
"""
from .config import (
    ExperimentConfig,
    InitialPoint,
    MeritsSection,
    RunSection,
    SweepSection,
    bundled_configs,
    dump_config,
    load_config,
    parse_config,
)
from .experiment import (
    MeritSummary,
    RunReport,
    SeedReport,
    SeedResult,
    SweepReport,
    SweepRow,
    build_report,
    confidence_interval,
    plot_rows,
    run_experiment,
    run_seeds,
    run_sweep,
)
from .io import PLOT_HEADER, TRACE_HEADER, write_trace_csv

__all__ = [
    # Configs
    "ExperimentConfig",
    "InitialPoint",
    "MeritsSection",
    "RunSection",
    "SweepSection",
    "bundled_configs",
    "dump_config",
    "load_config",
    "parse_config",
    # Execution and reports
    "MeritSummary",
    "RunReport",
    "SeedReport",
    "SeedResult",
    "SweepReport",
    "SweepRow",
    "build_report",
    "confidence_interval",
    "plot_rows",
    "run_experiment",
    "run_seeds",
    "run_sweep",
    # Artifacts
    "PLOT_HEADER",
    "TRACE_HEADER",
    "write_trace_csv",
]
