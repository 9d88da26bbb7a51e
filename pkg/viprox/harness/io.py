# viprox/harness/io.py
"""Artifact writers. Every filesystem failure surfaces as :class:`ArtifactIOError`."""
import csv
import math
from pathlib import Path
from typing import Any, Iterable, List, Mapping, Sequence

import numpy as np
from pydantic import BaseModel

from ..core.exceptions import ArtifactIOError
from ..solvers.runner import Trace

MERIT_COLUMNS = ["gap_avg", "gap_last", "wardrop", "grad_norm_sq"]
TRACE_HEADER = ["iter", "eta", "delta", "sum_delta_sq", *MERIT_COLUMNS, "diverged"]
PLOT_HEADER = ["iter", "merit", "mean", "ci_low", "ci_high", "n_seeds"]


def format_cell(value: Any) -> str:
    """Floats with 17 significant digits, booleans as 0/1, ``None`` as an empty cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer, str)):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    return format(value, ".17g")


def ensure_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ArtifactIOError(f"cannot create output directory ({exc.strerror or exc})", str(path)) from exc
    if not path.is_dir():
        raise ArtifactIOError("output path is not a directory", str(path))
    return path


def write_rows(path: Path, header: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> Path:
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_cell(row.get(column)) for column in header])
    except OSError as exc:
        raise ArtifactIOError(f"cannot write {path.suffix.lstrip('.') or 'file'} ({exc.strerror or exc})",
                              str(path)) from exc
    return path


def write_trace_csv(path: Path, trace: Trace) -> Path:
    """One row per iteration; merit cells are empty away from checkpoints."""
    return write_rows(path, TRACE_HEADER, trace.to_rows(columns=MERIT_COLUMNS))


def write_plot_csv(path: Path, rows: List[Mapping[str, Any]]) -> Path:
    return write_rows(path, PLOT_HEADER, rows)


def write_json(path: Path, model: BaseModel) -> Path:
    try:
        path.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ArtifactIOError(f"cannot write json ({exc.strerror or exc})", str(path)) from exc
    return path
