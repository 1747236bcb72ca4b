"""Post-hoc aggregation of campaign records: regime-conditioned summary
tables, axis-binned series, and happiness-ratio histograms. Everything is
emitted as CSV; figure rendering sits on top in ``figures``."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigError
from .records import RunRecord

GROUPINGS = ("overall", "xi", "mu-xitilde")

HISTOGRAM_BINS = 100

AGGREGATE_COLUMNS = [
    "algo",
    "regime",
    "count",
    "alpha_mean",
    "alpha_sd",
    "sd_degenerate",
    "acd_mean",
    "complete_count",
    "incomplete_count",
    "acd_exact_count",
    "acd_not_exact_count",
]

SERIES_COLUMNS = [
    "algo",
    "bin_index",
    "bin_left",
    "bin_right",
    "bin_center",
    "count",
    "alpha_mean",
    "acd_mean",
]

HISTOGRAM_COLUMNS = ["algo", "bin_index", "bin_left", "bin_right", "count", "alpha_mean"]


@dataclass(frozen=True)
class AggregateRow:
    algo: str
    regime: str
    count: int
    alpha_mean: float
    alpha_sd: float
    sd_degenerate: bool
    acd_mean: float | None
    complete_count: int
    incomplete_count: int
    acd_exact_count: int
    acd_not_exact_count: int


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def _sample_sd(values: Sequence[float]) -> float:
    if len(values) < 2:
        return 0.0
    m = _mean(values)
    return math.sqrt(sum((x - m) ** 2 for x in values) / (len(values) - 1))


def _regime_of(record: RunRecord, grouping: str) -> str:
    if grouping == "overall":
        return "all"
    if grouping == "xi":
        return record.regime_xi or "unknown"
    if grouping == "mu-xitilde":
        return record.regime_mu_xitilde or "unknown"
    raise ConfigError(f"unknown grouping {grouping!r}; expected one of {GROUPINGS}")


def aggregate(records: Sequence[RunRecord], grouping: str = "mu-xitilde") -> list[AggregateRow]:
    """Per algorithm x regime summary: mean/SD of the happiness ratio
    (sample SD, zero with a flag for singleton groups), mean detection
    accuracy, and the complete/exact-detection tallies."""
    if not records:
        raise ConfigError("no records to aggregate")
    groups: dict[tuple[str, str], list[RunRecord]] = {}
    for rec in records:
        groups.setdefault((rec.algo, _regime_of(rec, grouping)), []).append(rec)

    rows = []
    for (algo, regime), recs in sorted(groups.items()):
        alphas = [r.alpha for r in recs]
        acds = [r.acd for r in recs if r.acd is not None]
        complete = sum(1 for r in recs if r.complete)
        exact = sum(1 for r in recs if r.acd_exact)
        rows.append(
            AggregateRow(
                algo=algo,
                regime=regime,
                count=len(recs),
                alpha_mean=_mean(alphas),
                alpha_sd=_sample_sd(alphas),
                sd_degenerate=len(alphas) < 2,
                acd_mean=_mean(acds) if acds else None,
                complete_count=complete,
                incomplete_count=len(recs) - complete,
                acd_exact_count=exact,
                acd_not_exact_count=len(recs) - exact,
            )
        )
    return rows


@dataclass(frozen=True)
class SeriesPoint:
    algo: str
    bin_index: int
    bin_left: float
    bin_right: float
    bin_center: float
    count: int
    alpha_mean: float | None
    acd_mean: float | None


def _axis_value(record: RunRecord, axis: str) -> float:
    if axis == "n":
        return float(record.n)
    if axis == "rho":
        return float(record.rho)
    if axis == "k":
        return float(record.k)
    raise ConfigError(f"unknown axis {axis!r}; expected n, rho, or k")


def binned_series(records: Sequence[RunRecord], axis: str, bins: int) -> list[SeriesPoint]:
    """Per-algorithm means of alpha and ACD over equal-width bins of the
    chosen axis variable. Empty bins are emitted with missing means."""
    if not records:
        raise ConfigError("no records to bin")
    if bins < 1:
        raise ConfigError(f"bins must be >= 1, got {bins}")
    values = [_axis_value(r, axis) for r in records]
    lo, hi = min(values), max(values)
    if lo == hi:
        hi = lo + 1.0  # a single-valued axis still gets one usable bin
    width = (hi - lo) / bins

    algos = sorted({r.algo for r in records})
    per_bin: dict[tuple[str, int], list[RunRecord]] = {}
    for rec, value in zip(records, values):
        b = min(int((value - lo) / width), bins - 1)
        per_bin.setdefault((rec.algo, b), []).append(rec)

    points = []
    for algo in algos:
        for b in range(bins):
            recs = per_bin.get((algo, b), [])
            acds = [r.acd for r in recs if r.acd is not None]
            points.append(
                SeriesPoint(
                    algo=algo,
                    bin_index=b,
                    bin_left=lo + b * width,
                    bin_right=lo + (b + 1) * width,
                    bin_center=lo + (b + 0.5) * width,
                    count=len(recs),
                    alpha_mean=_mean([r.alpha for r in recs]) if recs else None,
                    acd_mean=_mean(acds) if acds else None,
                )
            )
    return points


@dataclass(frozen=True)
class HistogramRow:
    algo: str
    bin_index: int
    bin_left: float
    bin_right: float
    count: int
    alpha_mean: float


def alpha_histograms(records: Sequence[RunRecord], bins: int = HISTOGRAM_BINS) -> list[HistogramRow]:
    """Per-algorithm histogram of the happiness ratio over [0, 1], plus the
    sample mean repeated per row as the marker value."""
    if not records:
        raise ConfigError("no records to bin")
    rows = []
    width = 1.0 / bins
    for algo in sorted({r.algo for r in records}):
        alphas = [r.alpha for r in records if r.algo == algo]
        counts = [0] * bins
        for a in alphas:
            counts[min(int(a / width), bins - 1)] += 1
        mean_alpha = _mean(alphas)
        for b in range(bins):
            rows.append(
                HistogramRow(
                    algo=algo,
                    bin_index=b,
                    bin_left=b * width,
                    bin_right=(b + 1) * width,
                    count=counts[b],
                    alpha_mean=mean_alpha,
                )
            )
    return rows


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_aggregate_csv(rows: Sequence[AggregateRow], path) -> None:
    _write_csv(path, AGGREGATE_COLUMNS, rows)


def write_series_csv(points: Sequence[SeriesPoint], path) -> None:
    _write_csv(path, SERIES_COLUMNS, points)


def write_histogram_csv(rows: Sequence[HistogramRow], path) -> None:
    _write_csv(path, HISTOGRAM_COLUMNS, rows)


def _write_csv(path, columns, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(getattr(row, col)) for col in columns])


def emit_plot_data(
    records: Sequence[RunRecord], axis: str, bins: int
) -> tuple[list[SeriesPoint], list[HistogramRow]]:
    """Axis-binned means plus the fixed 100-bin happiness histograms."""
    return binned_series(records, axis, bins), alpha_histograms(records)
