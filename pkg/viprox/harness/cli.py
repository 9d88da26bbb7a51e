# viprox/harness/cli.py
"""
Command-line entry point.

    viprox run <config>       run every seed, write traces, report and plot data
    viprox validate <config>  print the normalized config
    viprox sweep <config>     run every sweep variant and compare them
    viprox list               list the bundled configs

``<config>`` is a YAML file or the name of a bundled config.
Exit codes: 0 success, 2 invalid config, 3 I/O failure, 1 anything else.
"""
import logging
import sys
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from ..config import settings
from ..core.exceptions import ArtifactIOError, ConfigurationError, InvalidArgumentError, ViproxError
from ..observability import setup_logging
from .config import ExperimentConfig, bundled_configs, dump_config, load_config
from .experiment import SweepReport, run_experiment, run_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_IO = 3

app = typer.Typer(name="viprox", help="Adaptive extra-gradient experiments.", add_completion=False)
console = Console()
err_console = Console(stderr=True)

OutOption = typer.Option(None, "--out", "-o", help="Output directory; overrides the config's output_dir.")
WorkersOption = typer.Option(None, "--workers", "-w", min=1, help="Seeds run in parallel.")
QuietOption = typer.Option(False, "--quiet", "-q", help="Only log warnings and errors.")


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, ArtifactIOError):
        return EXIT_IO
    if isinstance(exc, (ConfigurationError, InvalidArgumentError)):
        return EXIT_CONFIG
    return EXIT_FAILURE


def _fail(exc: BaseException) -> None:
    err_console.print(f"[bold red]error:[/bold red] {exc}", markup=True, highlight=False)
    raise typer.Exit(code=exit_code(exc))


def _output_dir(out: Optional[Path], experiment: ExperimentConfig, source: str) -> Path:
    if out is not None:
        return out
    if experiment.output_dir is not None:
        return experiment.output_dir
    return Path(settings.VIPROX_OUTPUT_DIR) / (experiment.name or Path(source).stem)


@app.command()
def run(config: str = typer.Argument(..., help="Config file or bundled config name."),
        out: Optional[Path] = OutOption, workers: Optional[int] = WorkersOption,
        quiet: bool = QuietOption) -> None:
    """Run an experiment."""
    setup_logging("WARNING" if quiet else None)
    try:
        experiment = load_config(config)
        if experiment.sweep is not None:
            logger.warning("ignoring the sweep section; use 'viprox sweep' to run it")
            experiment = experiment.model_copy(update={"sweep": None})
        target = _output_dir(out, experiment, config)
        report = run_experiment(experiment, target, workers)
    except ViproxError as exc:
        _fail(exc)
    if not quiet:
        console.print(f"{report.algorithm} on {report.problem}: {len(report.seeds)} seed(s), "
                      f"{report.diverged_count} diverged; artifacts in {target}")
        for column, summary in report.merits.items():
            if summary.mean is not None:
                console.print(f"  final {column}: {summary.mean:.6g} +/- {summary.ci_half_width:.3g}")


@app.command()
def validate(config: str = typer.Argument(..., help="Config file or bundled config name.")) -> None:
    """Validate a config and print it with every default filled in."""
    try:
        experiment = load_config(config)
    except ViproxError as exc:
        _fail(exc)
    sys.stdout.write(dump_config(experiment))


@app.command()
def sweep(config: str = typer.Argument(..., help="Config file with a sweep section."),
          out: Optional[Path] = OutOption, workers: Optional[int] = WorkersOption,
          quiet: bool = QuietOption) -> None:
    """Run every variant of a sweep and print a comparison table."""
    setup_logging("WARNING" if quiet else None)
    try:
        experiment = load_config(config)
        target = _output_dir(out, experiment, config)
        report = run_sweep(experiment, target, workers)
    except ViproxError as exc:
        _fail(exc)
    if not quiet:
        console.print(sweep_table(report))


@app.command("list")
def list_configs() -> None:
    """List the bundled configs."""
    for name in bundled_configs():
        console.print(name)


def sweep_table(report: SweepReport) -> Table:
    columns = sorted({column for row in report.rows for column in row.merits})
    table = Table(title=f"sweep over {report.parameter}")
    table.add_column("variant")
    table.add_column("diverged", justify="right")
    table.add_column("non-converged")
    for column in columns:
        table.add_column(f"final {column}", justify="right")
        table.add_column(f"{column} slope", justify="right")
    for row in report.rows:
        cells = [row.label, str(row.diverged_count), "yes" if row.non_converged else "no"]
        for column in columns:
            summary = row.merits.get(column)
            slope = row.mean_slopes.get(column)
            cells.append("-" if summary is None or summary.mean is None
                         else f"{summary.mean:.4g} +/- {summary.ci_half_width:.2g}")
            cells.append("-" if slope is None else f"{slope:.3f}")
        table.add_row(*cells)
    return table


def main() -> None:
    app()


if __name__ == "__main__":
    main()
