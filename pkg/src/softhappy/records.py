"""Result rows produced by engine runs and consumed by the statistics and
plot-data layers. The CSV schema is fixed so campaigns are diffable and
reruns comparable byte for byte."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, fields
from typing import Iterable

RESULT_COLUMNS = [
    "instance_id",
    "algo",
    "seed",
    "n",
    "k",
    "p",
    "q",
    "pcc",
    "rho",
    "mu",
    "xi",
    "xi_tilde",
    "regime_mu_xitilde",
    "regime_xi",
    "alpha",
    "acd",
    "complete",
    "acd_exact",
    "generations",
    "wall_ms",
]


@dataclass
class RunRecord:
    instance_id: str
    algo: str
    seed: int
    n: int
    k: int
    p: float | None
    q: float | None
    pcc: int | None
    rho: float
    mu: float | None
    xi: float | None
    xi_tilde: float | None
    regime_mu_xitilde: str
    regime_xi: str
    alpha: float
    acd: float | None
    complete: bool
    acd_exact: bool
    generations: int
    wall_ms: int

    def to_row(self) -> list[str]:
        return [_format(getattr(self, name)) for name in RESULT_COLUMNS]

    @classmethod
    def from_row(cls, row: dict[str, str]) -> "RunRecord":
        kwargs = {}
        for f in fields(cls):
            kwargs[f.name] = _parse(f.name, row[f.name])
        return cls(**kwargs)


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


_INT_FIELDS = {"seed", "n", "k", "pcc", "generations", "wall_ms"}
_FLOAT_FIELDS = {"p", "q", "rho", "mu", "xi", "xi_tilde", "alpha", "acd"}
_BOOL_FIELDS = {"complete", "acd_exact"}


def _parse(name: str, text: str):
    if name in _INT_FIELDS:
        return int(text) if text else None
    if name in _FLOAT_FIELDS:
        return float(text) if text else None
    if name in _BOOL_FIELDS:
        return text == "true"
    return text


def write_records_csv(records: Iterable[RunRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        for rec in records:
            writer.writerow(rec.to_row())


def append_record_csv(rec: RunRecord, fh) -> None:
    csv.writer(fh).writerow(rec.to_row())


def read_records_csv(path) -> list[RunRecord]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        return [RunRecord.from_row(row) for row in reader]


def records_to_csv_text(records: Iterable[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(RESULT_COLUMNS)
    for rec in records:
        writer.writerow(rec.to_row())
    return buf.getvalue()
