"""CSV emission for sampled series and summary tables."""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from ..errors import ConstructionError
from ..series import TimeSeries
from .config import ScenarioConfig, config_items

DECOMPOSITION_TOL = 1e-9

LEADING_COLUMNS = (
    "time_lifetimes", "backend", "n_atoms", "gamma0", "intensity", "intensity_nc",
    "coherence", "energy_drift_rel", "n_total",
)
RAW_COLUMNS = ("intensity_raw", "intensity_nc_raw", "coherence_raw")


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return "" if math.isnan(value) else repr(value)
    return str(value)


def header_lines(cfg: ScenarioConfig, extra: Mapping[str, Any] | None = None) -> list[str]:
    lines = ["# superrad scenario output"]
    lines += [f"# {k} = {v}" for k, v in config_items(cfg)]
    for k, v in (extra or {}).items():
        lines.append(f"# job.{k} = {format_value(v)}")
    return lines


def series_columns(n_modes: int, n_atoms: int) -> list[str]:
    return [
        *LEADING_COLUMNS,
        *(f"n_mode_{k}" for k in range(n_modes)),
        *(f"pop_atom_{a}" for a in range(n_atoms)),
        *RAW_COLUMNS,
    ]


def series_rows(series: TimeSeries, backend: str, n_atoms: int, gamma0: float, n_modes: int):
    """Rows in the fixed column order; intensities divided by ``n_atoms * gamma0``.

    Fails if any row breaks ``intensity = coherence + intensity_nc``.
    """
    scale = n_atoms * gamma0
    cols = series.columns
    energy = cols.get("energy")
    drift = None if energy is None else np.abs(energy - energy[0]) / scale
    for i, t in enumerate(series.times):
        i_raw, nc_raw, c_raw = cols["intensity"][i], cols["intensity_nc"][i], cols["coherence"][i]
        i_n, nc_n, c_n = i_raw / scale, nc_raw / scale, c_raw / scale
        if not abs(i_n - (c_n + nc_n)) <= DECOMPOSITION_TOL:
            raise ConstructionError(f"intensity decomposition broken at t={t!r}")
        row = [
            t * gamma0, backend, n_atoms, gamma0, i_n, nc_n, c_n,
            None if drift is None else drift[i], cols["n_total"][i],
        ]
        row += [cols[f"n_mode_{k}"][i] if f"n_mode_{k}" in cols else None for k in range(n_modes)]
        row += [cols[f"pop_atom_{a}"][i] for a in range(n_atoms)]
        row += [i_raw, nc_raw, c_raw]
        yield row


def write_table(
    path: Path, header: Sequence[str], columns: Sequence[str], rows: Iterable[Sequence[Any]]
) -> Path:
    buf = io.StringIO()
    for line in header:
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buf.getvalue())
    return path


def write_series_csv(
    path: Path,
    cfg: ScenarioConfig,
    series: TimeSeries,
    backend: str,
    n_atoms: int,
    gamma0: float,
    n_modes: int,
    job: Mapping[str, Any] | None = None,
) -> Path:
    rows = list(series_rows(series, backend, n_atoms, gamma0, n_modes))
    return write_table(path, header_lines(cfg, job), series_columns(n_modes, n_atoms), rows)


def read_table(path: Path) -> tuple[list[str], list[dict[str, str]]]:
    """Return ``(comment lines, rows)`` of a CSV written by this module."""
    comments, body = [], []
    for line in Path(path).read_text().splitlines():
        (comments if line.startswith("#") else body).append(line)
    return comments, list(csv.DictReader(body))
