"""Vertex- and edge-weighted directed graphs.

A :class:`Graph` is immutable once built.  Vertices are addressed by integer
index (input order) and carry a unique name and a nonnegative multiplicity.
Edges carry a strictly positive length.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    DuplicateEdge,
    DuplicateVertexName,
    InputFormatError,
    IsolatedVertex,
    LengthMismatch,
    MalformedRow,
    NegativeMultiplicity,
    NonPositiveEdgeWeight,
    SelfLoopEdge,
    UnknownVertexName,
    ZeroTotalMultiplicity,
    GraphValidationError,
)

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class Graph:
    names: tuple[str, ...]
    multiplicities: np.ndarray
    edges: tuple[Edge, ...]
    _index: dict[str, int] = field(repr=False, compare=False, default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def total_multiplicity(self) -> float:
        return float(self.multiplicities.sum())

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVertexName(f"unknown vertex {name!r}") from None

    def edge_list(self) -> list[tuple[str, str, float]]:
        return [(self.names[s], self.names[t], w) for s, t, w in self.edges]

    def adjacency(self) -> csr_matrix:
        """Sparse n x n matrix of edge lengths (absent edges are structural zeros)."""
        n = self.n
        if not self.edges:
            return csr_matrix((n, n))
        src, dst, w = zip(*self.edges)
        return csr_matrix((np.asarray(w, float), (src, dst)), shape=(n, n))

    def same_structure(self, other: "Graph") -> bool:
        return (
            self.names == other.names
            and np.array_equal(self.multiplicities, other.multiplicities)
            and sorted(self.edges) == sorted(other.edges)
        )


@dataclass(frozen=True)
class ConnectivityReport:
    strongly_connected: bool
    components: list[list[int]]
    condensation_edge_count: int


def build_graph(
    names: Sequence[str],
    multiplicities: Sequence[float],
    edges: Iterable[tuple[str, str, float]],
) -> Graph:
    """Validate raw input and return a :class:`Graph`.

    Vertex indices follow the order of ``names``.  Duplicate directed edges
    and self-loops are rejected rather than merged.
    """
    names = tuple(str(x) for x in names)
    if not names:
        raise GraphValidationError("graph has no vertices")
    if len(multiplicities) != len(names):
        raise LengthMismatch(
            f"{len(names)} names but {len(multiplicities)} multiplicities"
        )
    index: dict[str, int] = {}
    for i, name in enumerate(names):
        if not name:
            raise GraphValidationError(f"vertex {i} has an empty name")
        if name in index:
            raise DuplicateVertexName(f"duplicate vertex name {name!r}")
        index[name] = i

    eta = np.asarray(multiplicities, dtype=float)
    if not np.all(np.isfinite(eta)):
        raise GraphValidationError("multiplicities must be finite")
    if np.any(eta < 0):
        bad = names[int(np.argmax(eta < 0))]
        raise NegativeMultiplicity(f"vertex {bad!r} has negative multiplicity")
    if not eta.sum() > 0:
        raise ZeroTotalMultiplicity("total multiplicity must be positive")
    eta.setflags(write=False)

    seen: set[tuple[int, int]] = set()
    out: list[Edge] = []
    for a, b, w in edges:
        if a not in index:
            raise UnknownVertexName(f"edge references unknown vertex {a!r}")
        if b not in index:
            raise UnknownVertexName(f"edge references unknown vertex {b!r}")
        w = float(w)
        if not (w > 0) or math.isinf(w):
            raise NonPositiveEdgeWeight(f"edge {a!r}->{b!r} has weight {w!r}")
        s, t = index[a], index[b]
        if s == t:
            raise SelfLoopEdge(f"self-loop on {a!r}")
        if (s, t) in seen:
            raise DuplicateEdge(f"duplicate edge {a!r}->{b!r}")
        seen.add((s, t))
        out.append((s, t, w))
    return Graph(names, eta, tuple(out), index)


def from_undirected(
    names: Sequence[str],
    multiplicities: Sequence[float],
    undirected_edges: Iterable[tuple[str, str, float]],
) -> Graph:
    """Build the directed graph with both orientations of every edge."""
    directed = []
    for a, b, w in undirected_edges:
        directed.append((a, b, w))
        directed.append((b, a, w))
    return build_graph(names, multiplicities, directed)


def check_strong_connectivity(g: Graph) -> ConnectivityReport:
    ncomp, labels = connected_components(
        g.adjacency(), directed=True, connection="strong"
    )
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(v)
    components = sorted(groups.values(), key=lambda c: c[0])
    cross = {
        (labels[s], labels[t]) for s, t, _ in g.edges if labels[s] != labels[t]
    }
    return ConnectivityReport(ncomp == 1, components, len(cross))


# --- files -------------------------------------------------------------------

EDGE_HEADER = ["source", "target", "weight"]
VERTEX_HEADER = ["name", "multiplicity"]


def _parse_float(text: str, path: str, line: int, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise MalformedRow(f"bad {what} value {text!r}", path, line) from None


def _read_rows(path: str, header: list[str]):
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(str(exc), str(path)) from exc
    with fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or [c.strip() for c in first[: len(header)]] != header:
            raise MalformedRow(f"expected header {','.join(header)}", str(path), 1)
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < len(header):
                raise MalformedRow(
                    f"expected {len(header)} fields, got {len(row)}",
                    str(path),
                    reader.line_num,
                )
            yield reader.line_num, [c.strip() for c in row[: len(header)]]


def read_graph(edge_path, vertex_path=None) -> Graph:
    """Load a graph from an edge-list CSV and an optional vertex CSV.

    Without a vertex file every vertex gets multiplicity 1 and vertices are
    ordered by first appearance in the edge list.  With one, the vertex file
    fixes the order, and a vertex that appears in no edge is rejected.
    """
    edge_path, vertex_path = str(edge_path), vertex_path and str(vertex_path)
    edges = []
    order: dict[str, None] = {}
    for line, (a, b, w) in _read_rows(edge_path, EDGE_HEADER):
        edges.append((a, b, _parse_float(w, edge_path, line, "weight")))
        order.setdefault(a)
        order.setdefault(b)

    if vertex_path is None:
        names = list(order)
        eta = [1.0] * len(names)
    else:
        names, eta = [], []
        for line, (name, m) in _read_rows(vertex_path, VERTEX_HEADER):
            names.append(name)
            eta.append(_parse_float(m, vertex_path, line, "multiplicity"))
        lonely = [x for x in names if x not in order]
        if lonely:
            raise IsolatedVertex(
                f"vertices with no incident edge: {', '.join(lonely[:10])}"
            )
    return build_graph(names, eta, edges)


def write_graph(g: Graph, edge_path, vertex_path) -> None:
    with open(edge_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(EDGE_HEADER)
        for a, b, wt in g.edge_list():
            w.writerow([a, b, repr(wt)])
    with open(vertex_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(VERTEX_HEADER)
        for name, m in zip(g.names, g.multiplicities):
            w.writerow([name, repr(float(m))])
