"""CSV/JSON plumbing: return-series ingest, density/exponent/trace/path
tables, and report files.  Numeric output uses 15 significant digits, so a
returns CSV round-trips losslessly through ingest followed by emit (and an
emitted series re-ingests to the same 15 significant digits)."""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import dataclass

import numpy as np

from .estimation import TRACE_COLUMNS, FitTrace, trace_rows
from .inversion import DensityGrid

FLOAT_FMT = "%.15g"


class SeriesKind(enum.Enum):
    PRICES = "prices"
    RETURNS = "returns"


@dataclass(frozen=True)
class ReturnSeries:
    """Daily returns in percent, with a label naming where they came from."""

    values: np.ndarray
    source: str

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("a return series must be a non-empty 1-d sequence")
        if not np.isfinite(v).all():
            raise ValueError("a return series must contain only finite values")
        object.__setattr__(self, "values", v)
        self.values.setflags(write=False)


def _fmt(x) -> str:
    return FLOAT_FMT % float(x)


def ingest(path, kind: SeriesKind) -> ReturnSeries:
    """Read a one-column CSV of prices or returns.

    An optional single header row is allowed.  Prices are converted to
    percent log-returns, r_i = 100 (ln P_i - ln P_{i-1}); returns pass
    through unchanged.  Malformed or non-positive-price rows raise with the
    offending line number.
    """
    raw: list[float] = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            cells = [c.strip() for c in row if c.strip()]
            if not cells:
                continue
            if len(cells) != 1:
                raise ValueError(f"{path}: line {lineno}: expected one column, got {len(cells)}")
            try:
                value = float(cells[0])
            except ValueError:
                if lineno == 1 and not raw:
                    continue  # header row
                raise ValueError(f"{path}: line {lineno}: could not parse {cells[0]!r}") from None
            if not np.isfinite(value):
                raise ValueError(f"{path}: line {lineno}: non-finite value {cells[0]!r}")
            if kind is SeriesKind.PRICES and value <= 0.0:
                raise ValueError(f"{path}: line {lineno}: non-positive price {value:g}")
            raw.append(value)
    if kind is SeriesKind.PRICES:
        if len(raw) < 2:
            raise ValueError(f"{path}: need at least two prices to form returns")
        values = 100.0 * np.diff(np.log(np.asarray(raw)))
    else:
        values = np.asarray(raw, dtype=float)
    return ReturnSeries(values, source=str(path))


def emit_series(path, series: ReturnSeries) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["return"])
        for v in series.values:
            out.writerow([_fmt(v)])


def write_density_csv(path, grid: DensityGrid, levy_fn=None) -> None:
    """x / pdf / cdf table, with a Levy-density column when a formula applies
    (blank where it does not, e.g. at x = 0 or for increment laws)."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["x", "pdf", "cdf", "levy_density"])
        for x, f, c in zip(grid.x, grid.pdf, grid.cdf):
            if levy_fn is None or x == 0.0:
                lv = ""
            else:
                lv = _fmt(levy_fn(x))
            out.writerow([_fmt(x), _fmt(f), _fmt(c), lv])


def write_exponent_csv(path, xi, values) -> None:
    """Frequency / real part / imaginary part of a characteristic exponent."""
    values = np.asarray(values)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["xi", "re_exponent", "im_exponent"])
        for u, v in zip(np.asarray(xi, dtype=float), values):
            out.writerow([_fmt(u), _fmt(v.real), _fmt(v.imag)])


def write_trace_csv(path, trace: FitTrace) -> None:
    """Iteration table: step index, the seven parameters, the log-likelihood,
    its gradient norm, and the largest Hessian eigenvalue."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(TRACE_COLUMNS)
        for row in trace_rows(trace):
            out.writerow([str(row[0])] + [_fmt(v) for v in row[1:]])


def write_paths_csv(path, paths) -> None:
    """Step-indexed cumulative values, one column per path."""
    if not paths:
        raise ValueError("no paths to write")
    n = len(paths[0].x)
    if any(len(sp.x) != n for sp in paths):
        raise ValueError("paths must share a common length")
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["step"] + [f"path_{i}" for i in range(len(paths))])
        for k in range(n):
            out.writerow([str(k)] + [_fmt(sp.x[k]) for sp in paths])


def write_json(path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
