"""Downstream statistics: rank margins, correlation tests, hub detection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np
from scipy import stats

from .errors import ConstantInput, EmptyInput, LengthMismatch, MissingMargins, TooFewValues

Direction = Literal["positive", "negative"]


@dataclass(frozen=True)
class RankedVector:
    values: np.ndarray
    margins: np.ndarray


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    t_stat: float
    p_one_sided: float
    direction: Direction


@dataclass(frozen=True)
class OutlierReport:
    q1: float
    q3: float
    iqr: float
    lower_fence: float
    upper_fence: float
    high_outliers: tuple[int, ...]
    low_outliers: tuple[int, ...]


def uniform_margin(values) -> RankedVector:
    """Map the i-th smallest of n values to i/n; tied values share their mean."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise EmptyInput("uniform margin of an empty vector")
    return RankedVector(v, stats.rankdata(v, method="average") / v.size)


def correlation_p_value(r: float, n: int, direction: Direction = "positive") -> tuple[float, float]:
    """One-sided p-value of Pearson ``r`` from ``n`` pairs.

    Returns ``(t, p)`` with ``t = r sqrt((n-2)/(1-r^2))`` referred to Student's
    t on ``n - 2`` degrees of freedom.
    """
    if n < 3:
        raise TooFewValues("correlation test needs n >= 3")
    df = n - 2
    if abs(r) >= 1.0:
        t = math.copysign(math.inf, r)
    else:
        t = r * math.sqrt(df / (1.0 - r * r))
    if direction == "positive":
        p = float(stats.t.sf(t, df))
    elif direction == "negative":
        p = float(stats.t.cdf(t, df))
    else:
        raise ValueError(f"direction must be 'positive' or 'negative', not {direction!r}")
    return t, p


def correlation_test(x, y, direction: Direction = "positive") -> CorrelationResult:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"samples of shape {x.shape} and {y.shape}")
    n = x.size
    if n < 3:
        raise TooFewValues("correlation test needs n >= 3")
    xc, yc = x - x.mean(), y - y.mean()
    sxx, syy = float(xc @ xc), float(yc @ yc)
    if sxx == 0 or syy == 0:
        raise ConstantInput("correlation is undefined for a constant sample")
    r = float(np.clip((xc @ yc) / math.sqrt(sxx * syy), -1.0, 1.0))
    t, p = correlation_p_value(r, n, direction)
    return CorrelationResult(r, n, t, p, direction)


def tukey_outliers(values, k: float = 1.5, method: str = "linear") -> OutlierReport:
    """Flag values beyond ``k`` interquartile ranges outside the quartiles.

    ``method`` is passed to :func:`numpy.quantile`; the default interpolates
    linearly between order statistics at position ``1 + (n - 1) p``.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 4:
        raise TooFewValues(f"need at least 4 values, got {v.size}")
    q1, q3 = (float(q) for q in np.quantile(v, [0.25, 0.75], method=method))
    iqr = q3 - q1
    lo, hi = q1 - k * iqr, q3 + k * iqr
    return OutlierReport(
        q1, q3, iqr, lo, hi,
        tuple(int(i) for i in np.flatnonzero(v > hi)),
        tuple(int(i) for i in np.flatnonzero(v < lo)),
    )


def curve_variation_screen(profile, threshold: float) -> list[int]:
    """Vertices whose uniform-margin curve spans more than ``threshold``."""
    margins = getattr(profile, "uniform_margin", None)
    if margins is None:
        raise MissingMargins("profile has no uniform-margin columns")
    margins = np.asarray(margins)
    spread = margins.max(axis=1) - margins.min(axis=1)
    return [int(i) for i in np.flatnonzero(spread > threshold)]


def flow_totals(flows) -> dict[str, tuple[float, float]]:
    """Per-region ``(incoming, outgoing)`` totals, ignoring self-flows.

    ``flows`` is a :class:`~l1prominence.ingest.FlowTable` or any iterable of
    ``(origin, destination, count)`` triples.
    """
    records = getattr(flows, "records", flows)
    regions = list(getattr(flows, "regions", ()))
    incoming: dict[str, float] = {r: 0.0 for r in regions}
    outgoing: dict[str, float] = {r: 0.0 for r in regions}
    for rec in records:
        o, d, c = (rec.origin, rec.destination, rec.count) if hasattr(rec, "origin") else rec
        incoming.setdefault(o, 0.0)
        outgoing.setdefault(o, 0.0)
        incoming.setdefault(d, 0.0)
        outgoing.setdefault(d, 0.0)
        if o == d:
            continue
        outgoing[o] += c
        incoming[d] += c
    return {r: (incoming[r], outgoing[r]) for r in incoming}


@dataclass(frozen=True)
class HubReport:
    incoming: OutlierReport
    outgoing: OutlierReport
    regions: tuple[str, ...]
    incoming_outliers: tuple[str, ...]
    outgoing_outliers: tuple[str, ...]
    hubs: tuple[str, ...]


def find_hubs(totals: Mapping[str, tuple[float, float]], k: float = 1.5,
              method: str = "linear") -> HubReport:
    """Hubs are regions that are high Tukey outliers for both in- and out-flow."""
    regions = tuple(totals)
    inc = tukey_outliers([totals[r][0] for r in regions], k, method)
    out = tukey_outliers([totals[r][1] for r in regions], k, method)
    in_names = tuple(regions[i] for i in inc.high_outliers)
    out_names = tuple(regions[i] for i in out.high_outliers)
    both = tuple(r for r in in_names if r in set(out_names))
    return HubReport(inc, out, regions, in_names, out_names, both)


def margin_correlations(columns: Mapping[str, Sequence[float]]) -> dict[tuple[str, str], CorrelationResult]:
    """Pairwise correlations of uniform-margin transformed columns.

    The one-sided direction follows the sign of the observed coefficient.
    """
    keys = list(columns)
    margins = {k: uniform_margin(columns[k]).margins for k in keys}
    out = {}
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            probe = correlation_test(margins[a], margins[b], "positive")
            if probe.r < 0:
                probe = correlation_test(margins[a], margins[b], "negative")
            out[(a, b)] = probe
    return out
