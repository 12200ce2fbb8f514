"""Prominence-based neighborhoods and local (order-alpha) measures.

For an anchor ``k`` the *modified graph* adds ``eta_tot / S`` to ``k``'s
multiplicity, which makes ``k`` a median.  Ranking every vertex by its
prominence in that modified graph and keeping the top ``ceil(alpha * n)``
gives the order-alpha neighborhood of ``k``.  The local measure is the global
formula with its sums and its competitor set restricted to the neighborhood,
evaluated on the original distances and multiplicities.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .analytics import uniform_margin
from .errors import NeighborhoodTooSmall
from .geodesics import symmetry_constant
from .prominence import (
    TIE_TOL,
    Kind,
    ProminenceVector,
    _check,
    _rowmax_kernel,
    l1_prestige,
    oriented,
)


@dataclass(frozen=True)
class NeighborhoodSet:
    anchor: int
    kind: Kind
    alpha: float
    members: tuple[int, ...]
    values: np.ndarray  # modified-graph prominence of every vertex


@dataclass(frozen=True)
class MultiscaleProfile:
    kind: Kind
    alpha_grid: tuple[float, ...]
    values: np.ndarray
    uniform_margin: np.ndarray | None = None
    clamp_events: int = 0


def neighborhood_size(alpha: float, n: int) -> int:
    """``ceil(alpha * n)``, immune to round-off such as ``15/424 * 424``."""
    if isinstance(alpha, Fraction):
        return math.ceil(alpha * n)
    return math.ceil(alpha * n - 1e-9)


def _check_alpha(alpha: float, n: int) -> int:
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    m = neighborhood_size(alpha, n)
    if m < 2:
        raise NeighborhoodTooSmall(
            f"alpha={float(alpha):g} keeps {m} of {n} vertices; need at least 2",
            alpha=float(alpha),
        )
    return m


def modified_multiplicities(eta, S: float, k: int) -> np.ndarray:
    eta = np.array(eta, dtype=float)
    eta[k] += eta.sum() / S
    return eta


def modified_prominence(D, eta, S: float, k: int, kind: Kind = "prestige") -> np.ndarray:
    """Prominence of every vertex in the graph modified w.r.t. anchor ``k``."""
    return l1_prestige(D, modified_multiplicities(eta, S, k), S, kind).values


def _ranking(values: np.ndarray, anchor: int) -> np.ndarray:
    # descending by value, anchor first, remaining ties by index
    order = np.lexsort((np.arange(values.size), -values))
    return np.concatenate(([anchor], order[order != anchor]))


def _select(values: np.ndarray, ranking: np.ndarray, m: int, tol: float) -> np.ndarray:
    """Boolean membership: top ``m`` by ``ranking`` plus anything tied with the cutoff."""
    chosen = np.zeros(values.size, dtype=bool)
    chosen[ranking[:m]] = True
    cutoff = values[ranking[m - 1]]
    chosen |= values >= cutoff - tol
    return chosen


def neighborhood(
    D, eta, S: float | None, k: int, alpha: float, kind: Kind = "prestige",
    tol: float = TIE_TOL,
) -> NeighborhoodSet:
    D, eta = _check(D, eta)
    n = D.shape[0]
    m = _check_alpha(alpha, n)
    if S is None:
        S = symmetry_constant(D)
    values = modified_prominence(D, eta, S, k, kind)
    chosen = _select(values, _ranking(values, k), m, tol)
    return NeighborhoodSet(k, kind, float(alpha), tuple(np.flatnonzero(chosen).tolist()), values)


def prestige_neighborhood(D, eta, S, k, alpha, tol: float = TIE_TOL) -> NeighborhoodSet:
    return neighborhood(D, eta, S, k, alpha, "prestige", tol)


def centrality_neighborhood(D, eta, S, k, alpha, tol: float = TIE_TOL) -> NeighborhoodSet:
    return neighborhood(D, eta, S, k, alpha, "centrality", tol)


def ranked_neighbors(D, eta, S, k: int, kind: Kind = "prestige") -> np.ndarray:
    """All vertices in neighborhood-inclusion order for anchor ``k`` (no tie expansion)."""
    D, eta = _check(D, eta)
    if S is None:
        S = symmetry_constant(D)
    return _ranking(modified_prominence(D, eta, S, k, kind), k)


class _Anchors:
    """Modified-graph values and rankings for every anchor, computed once."""

    def __init__(self, D, eta, S, kind: Kind, workers: int = 1):
        n = D.shape[0]
        self.values = np.empty((n, n))
        self.ranking = np.empty((n, n), dtype=np.intp)

        def fill(k):
            v = modified_prominence(D, eta, S, k, kind)
            self.values[k] = v
            self.ranking[k] = _ranking(v, k)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(fill, range(n)))
        else:
            for k in range(n):
                fill(k)

    def membership(self, m: int, tol: float) -> np.ndarray:
        n = self.values.shape[0]
        M = np.zeros((n, n), dtype=bool)
        for k in range(n):
            M[k] = _select(self.values[k], self.ranking[k], m, tol)
        return M


def _local_from_membership(A, eta, S, M) -> tuple[np.ndarray, int, float]:
    n = A.shape[0]
    full = M.all(axis=1)
    C = (M * eta) @ A
    W = M @ eta
    if full.any():
        # rows covering all of V must reduce exactly like the global measure
        C[full] = eta @ A
        W[full] = eta.sum()
    raw = _rowmax_kernel(A, C, W, M & ~np.eye(n, dtype=bool), S)
    out_of_range = (raw < 0) | (raw > 1)
    worst = float(np.max(np.maximum(-raw, raw - 1), initial=0.0))
    return np.clip(raw, 0.0, 1.0), int(out_of_range.sum()), max(worst, 0.0)


def local_l1_prestige(
    D, eta, S: float | None, alpha: float, kind: Kind = "prestige",
    tol: float = TIE_TOL, workers: int = 1,
) -> ProminenceVector:
    """Order-``alpha`` local prominence of every vertex.

    Values are clipped to [0, 1]; ``clamp_events`` and ``max_clamp`` on the
    result record how often and by how much clipping was needed.
    """
    D, eta = _check(D, eta)
    n = D.shape[0]
    m = _check_alpha(alpha, n)
    if S is None:
        S = symmetry_constant(D)
    anchors = _Anchors(D, eta, S, kind, workers)
    vals, events, worst = _local_from_membership(
        oriented(D, kind), eta, S, anchors.membership(m, tol)
    )
    return ProminenceVector(kind, vals, float(alpha), events, worst)


def local_l1_centrality(D, eta, S, alpha, tol: float = TIE_TOL, workers: int = 1) -> ProminenceVector:
    return local_l1_prestige(D, eta, S, alpha, "centrality", tol, workers)


def multiscale_profile(
    D, eta, S: float | None, kind: Kind, alpha_grid: Sequence[float],
    margins: bool = True, tol: float = TIE_TOL, workers: int = 1,
) -> MultiscaleProfile:
    """Local values for each alpha in ``alpha_grid`` (one column per alpha)."""
    D, eta = _check(D, eta)
    n = D.shape[0]
    grid = list(alpha_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("alpha grid must be strictly increasing")
    sizes = [_check_alpha(a, n) for a in grid]
    if S is None:
        S = symmetry_constant(D)
    A = oriented(D, kind)
    anchors = _Anchors(D, eta, S, kind, workers)
    values = np.empty((n, len(grid)))
    events = 0
    for col, m in enumerate(sizes):
        values[:, col], ev, _ = _local_from_membership(A, eta, S, anchors.membership(m, tol))
        events += ev
    um = None
    if margins:
        um = np.column_stack([uniform_margin(values[:, c]).margins for c in range(len(grid))])
    return MultiscaleProfile(kind, tuple(float(a) for a in grid), values, um, events)


def alpha_range(start: Fraction, stop: Fraction, step: Fraction) -> list[Fraction]:
    """Inclusive arithmetic grid ``start, start+step, ..., <= stop`` in exact arithmetic."""
    if step <= 0:
        raise ValueError("alpha step must be positive")
    out = []
    a = Fraction(start)
    while a <= stop:
        out.append(a)
        a += step
    return out


def default_alpha_grid(n: int, first: int = 15, step: int = 5, margin: int = 4) -> list[Fraction]:
    """Grid ``first/n, (first+step)/n, ..., (n-margin)/n``; 82 points when n = 424."""
    return alpha_range(Fraction(first, n), Fraction(n - margin, n), Fraction(step, n))
