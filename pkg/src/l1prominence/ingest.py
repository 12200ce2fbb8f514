"""Origin-destination flow tables and the flow graph built from them.

Input is a CSV with columns ``origin,destination,count`` and optionally
``age``, ``hour`` and ``day`` used for filtering.  A ``count`` of ``*`` marks
a suppressed small count and is imputed as 2.  Filtered rows are summed per
(origin, destination) pair.

In the flow graph an edge ``a -> b`` has length ``1 / count(a, b)`` and the
multiplicity of ``a`` is its within-region count ``count(a, a)``.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from typing import Iterable

from .errors import EmptyAfterFilter, InputFormatError, MalformedRow, NegativeCount
from .graph import Graph, build_graph

SUPPRESSED = "*"
IMPUTED_COUNT = 2.0
REQUIRED = ("origin", "destination", "count")


@dataclass(frozen=True)
class FlowRecord:
    origin: str
    destination: str
    count: float


@dataclass(frozen=True)
class FlowTable:
    records: tuple[FlowRecord, ...]
    regions: tuple[str, ...]

    def __iter__(self):
        return iter(self.records)


@dataclass(frozen=True)
class FlowFilter:
    """Row predicates.  ``hour_range`` is half-open ``[start, end)``.

    ``age`` cells may be a number or a band such as ``25-29``; a band is kept
    when it lies entirely within ``[age_min, age_max]``.
    """

    age_min: float | None = None
    age_max: float | None = None
    hour_range: tuple[int, int] | None = None
    days: frozenset[str] | None = None

    def required_columns(self) -> list[str]:
        cols = []
        if self.age_min is not None or self.age_max is not None:
            cols.append("age")
        if self.hour_range is not None:
            cols.append("hour")
        if self.days is not None:
            cols.append("day")
        return cols

    def accepts(self, row: dict[str, str], path: str, line: int) -> bool:
        if self.age_min is not None or self.age_max is not None:
            lo, hi = _age_band(row["age"], path, line)
            if self.age_min is not None and lo < self.age_min:
                return False
            if self.age_max is not None and hi > self.age_max:
                return False
        if self.hour_range is not None:
            try:
                hour = int(row["hour"])
            except ValueError:
                raise MalformedRow(f"bad hour {row['hour']!r}", path, line) from None
            if not self.hour_range[0] <= hour < self.hour_range[1]:
                return False
        if self.days is not None and row["day"].strip().lower() not in self.days:
            return False
        return True


_BAND = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*(?:[-~]\s*(\d+(?:\.\d+)?))?\s*$")


def _age_band(text: str, path: str, line: int) -> tuple[float, float]:
    m = _BAND.match(text)
    if not m:
        raise MalformedRow(f"bad age {text!r}", path, line)
    lo = float(m.group(1))
    hi = float(m.group(2)) if m.group(2) else lo
    return lo, hi


def parse_count(text: str, path: str = "<input>", line: int | None = None) -> float:
    text = text.strip()
    if text == SUPPRESSED:
        return IMPUTED_COUNT
    try:
        value = float(text)
    except ValueError:
        raise MalformedRow(f"bad count {text!r}", path, line) from None
    if value < 0:
        raise NegativeCount(f"{path}:{line}: negative count {value:g}")
    return value


def aggregate(rows: Iterable[tuple[str, str, float]]) -> FlowTable:
    """Sum counts per (origin, destination); zero totals are dropped."""
    totals: dict[tuple[str, str], float] = {}
    regions: dict[str, None] = {}
    for o, d, c in rows:
        regions.setdefault(o)
        regions.setdefault(d)
        totals[(o, d)] = totals.get((o, d), 0.0) + c
    records = tuple(FlowRecord(o, d, c) for (o, d), c in totals.items() if c > 0)
    return FlowTable(records, tuple(regions))


def parse_flow_csv(path, filters: FlowFilter | None = None) -> FlowTable:
    filters = filters or FlowFilter()
    path = str(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(str(exc), path) from exc
    with fh:
        reader = csv.DictReader(fh, skipinitialspace=True)
        header = [h.strip() for h in (reader.fieldnames or [])]
        reader.fieldnames = header
        missing = [c for c in (*REQUIRED, *filters.required_columns()) if c not in header]
        if missing:
            raise MalformedRow(f"missing column(s) {', '.join(missing)}", path, 1)
        kept = []
        for row in reader:
            line = reader.line_num
            if None in row or any(row[c] is None for c in header):
                raise MalformedRow(f"expected {len(header)} fields", path, line)
            o, d = row["origin"].strip(), row["destination"].strip()
            if not o or not d:
                raise MalformedRow("empty origin or destination", path, line)
            count = parse_count(row["count"], path, line)
            if filters.accepts(row, path, line):
                kept.append((o, d, count))
    if not kept:
        raise EmptyAfterFilter(f"{path}: no flow rows left after filtering")
    return aggregate(kept)


def build_flow_graph(t: FlowTable) -> Graph:
    """Regions become vertices; self-flows become multiplicities."""
    eta = {r: 0.0 for r in t.regions}
    edges = []
    for rec in t.records:
        if rec.origin == rec.destination:
            eta[rec.origin] += rec.count
        else:
            edges.append((rec.origin, rec.destination, 1.0 / rec.count))
    return build_graph(list(eta), list(eta.values()), edges)
