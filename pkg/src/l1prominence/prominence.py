"""Global L1 prestige and L1 centrality.

Prestige scores a vertex by how cheaply it could become the *prestige
median*, the vertex minimising the multiplicity-weighted sum of distances
coming into it.  Centrality is the same construction on outgoing distances,
i.e. on the transposed distance matrix.

Three independent evaluation routes are provided:

* :func:`l1_prestige` - closed form, max over competitors of a normalised
  difference of weighted distance sums;
* :func:`l1_prestige_matrix_form` - the same quantity assembled from outer
  products and an element-wise division;
* :func:`oracle_prestige` - bisection on the smallest extra multiplicity that
  puts the vertex in the median set (slow; for testing).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import DimensionMismatch, NoConvergence
from .geodesics import symmetry_constant

Kind = Literal["prestige", "centrality"]
KINDS: tuple[Kind, ...] = ("prestige", "centrality")

TIE_TOL = 1e-9


@dataclass(frozen=True)
class ProminenceVector:
    kind: Kind
    values: np.ndarray
    alpha: float = 1.0
    clamp_events: int = 0
    max_clamp: float = 0.0


@dataclass(frozen=True)
class MedianSet:
    kind: Kind
    members: tuple[int, ...] = field(default_factory=tuple)


def _check(D, eta) -> tuple[np.ndarray, np.ndarray]:
    D = np.asarray(D, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise DimensionMismatch(f"distance matrix must be square, got {D.shape}")
    if eta.shape != (D.shape[0],):
        raise DimensionMismatch(
            f"{eta.shape[0] if eta.ndim else 0} multiplicities for {D.shape[0]} vertices"
        )
    return D, eta


def oriented(D: np.ndarray, kind: Kind) -> np.ndarray:
    """Matrix whose column ``k`` holds distances *into* vertex ``k`` for ``kind``."""
    if kind == "prestige":
        return D
    if kind == "centrality":
        # contiguous copy so symmetric inputs reduce bit-for-bit like prestige
        return np.ascontiguousarray(D.T)
    raise ValueError(f"unknown kind {kind!r}")


def weighted_distance_sums(D, eta, kind: Kind = "prestige") -> np.ndarray:
    D, eta = _check(D, eta)
    A = oriented(D, kind)
    return (eta / eta.sum()) @ A


def median_set(D, eta, kind: Kind = "prestige", tol: float = TIE_TOL) -> MedianSet:
    """Vertices attaining the minimum weighted distance sum.

    Sums within ``tol * max(1, |min|)`` of the minimum count as tied.
    """
    s = weighted_distance_sums(D, eta, kind)
    lo = s.min()
    members = np.flatnonzero(s - lo <= tol * max(1.0, abs(lo)))
    return MedianSet(kind, tuple(int(i) for i in members))


def prestige_median(D, eta, tol: float = TIE_TOL) -> MedianSet:
    return median_set(D, eta, "prestige", tol)


def centrality_median(D, eta, tol: float = TIE_TOL) -> MedianSet:
    return median_set(D, eta, "centrality", tol)


def _rowmax_kernel(A, C, W, mask, S):
    """``1 - S * max_j {(C[k,k] - C[k,j]) / (W[k] A[k,j])}^+`` per row ``k``.

    ``C[k, j]`` is the (possibly restricted) weighted sum of distances into
    ``j`` as seen from anchor ``k``; ``mask`` selects the admissible ``j``.
    Shared by the global and local measures so both reduce identically.
    """
    num = np.diagonal(C)[:, None] - C
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = num / (W[:, None] * A)
    ratio = np.where(mask, ratio, -np.inf)
    bracket = np.maximum(ratio.max(axis=1), 0.0)
    return 1.0 - S * bracket


def l1_prestige(D, eta, S: float | None = None, kind: Kind = "prestige") -> ProminenceVector:
    """Closed-form L1 prestige (or centrality with ``kind="centrality"``).

    Parameters
    ----------
    D : (n, n) array
        Geodesic distances, ``D[i, j]`` from ``i`` to ``j``.
    eta : (n,) array
        Nonnegative multiplicities with positive total.
    S : float, optional
        Symmetry constant of ``D``; computed when omitted.
    """
    D, eta = _check(D, eta)
    n = D.shape[0]
    if n == 1:
        return ProminenceVector(kind, np.ones(1))
    if S is None:
        S = symmetry_constant(D)
    A = oriented(D, kind)
    c = eta @ A
    C = np.broadcast_to(c, (n, n))
    W = np.full(n, eta.sum())
    values = _rowmax_kernel(A, C, W, ~np.eye(n, dtype=bool), S)
    return ProminenceVector(kind, values)


def l1_centrality(D, eta, S: float | None = None) -> ProminenceVector:
    return l1_prestige(D, eta, S, kind="centrality")


def l1_prestige_matrix_form(
    D, eta, S: float | None = None, kind: Kind = "prestige"
) -> ProminenceVector:
    """Matrix route: ``1 - (S/eta_tot) rowmax{(D'eta 1' - 1 eta'D) / D}^+``.

    The division is element-wise and the diagonal is skipped in the row max.
    """
    D, eta = _check(D, eta)
    n = D.shape[0]
    if n == 1:
        return ProminenceVector(kind, np.ones(1))
    if S is None:
        S = symmetry_constant(D)
    A = oriented(D, kind)
    ones = np.ones(n)
    diff = np.outer(A.T @ eta, ones) - np.outer(ones, eta @ A)
    off = ~np.eye(n, dtype=bool)
    quotient = np.full((n, n), -np.inf)
    quotient[off] = diff[off] / A[off]
    rowmax = np.maximum(quotient.max(axis=1), 0.0)
    return ProminenceVector(kind, ones - (S / eta.sum()) * rowmax)


def oracle_prestige(
    D,
    eta,
    S: float | None,
    k: int,
    kind: Kind = "prestige",
    max_iter: int = 80,
    width: float = 1e-12,
) -> float:
    """Prominence of vertex ``k`` straight from the median definition.

    Finds the least ``w >= 0`` such that raising ``k``'s normalised
    multiplicity by ``w`` makes ``k`` a median, by bisection on
    ``[0, 1/S + 1]`` with direct median-membership checks, and returns
    ``1 - S * w``.
    """
    D, eta = _check(D, eta)
    n = D.shape[0]
    if n == 1:
        return 1.0
    if S is None:
        S = symmetry_constant(D)
    A = oriented(D, kind)
    base = (eta / eta.sum()) @ A
    pull = A[k]  # distance from k into each candidate

    if k in median_set(D, eta, kind).members:
        return 1.0

    def is_median(w: float) -> bool:
        s = base + w * pull
        return bool(np.all(s[k] <= s))

    lo, hi = 0.0, 1.0 / S + 1.0
    if not is_median(hi):
        raise NoConvergence(f"vertex {k} is not a median at w={hi}")
    for _ in range(max_iter):
        if hi - lo < width:
            break
        mid = 0.5 * (lo + hi)
        if is_median(mid):
            hi = mid
        else:
            lo = mid
    if S * (hi - lo) > 1e-9:
        raise NoConvergence(f"bisection for vertex {k} stalled at width {hi - lo}")
    return 1.0 - S * hi


def median_names(ms: MedianSet, names: Sequence[str]) -> list[str]:
    return [names[i] for i in ms.members]
