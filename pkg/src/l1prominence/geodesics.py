"""All-pairs geodesic distances and the symmetry constant.

Distances are returned as a dense, read-only ``(n, n)`` float64 array whose
row ``i`` holds the shortest path lengths *from* vertex ``i``.
"""

from __future__ import annotations

import hashlib
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .errors import DegenerateGraph, DimensionMismatch, InputFormatError, NotStronglyConnected
from .graph import Graph


def all_pairs_shortest(g: Graph, workers: int = 1) -> np.ndarray:
    """Geodesic distance matrix of ``g`` via one Dijkstra run per source.

    Sources are split into contiguous blocks, one per worker; each block
    writes only its own rows, so the result does not depend on ``workers``.

    Raises
    ------
    NotStronglyConnected
        If some vertex cannot reach another.
    """
    n = g.n
    adj = g.adjacency()
    out = np.empty((n, n), dtype=float)
    workers = max(1, min(int(workers), n))
    blocks = np.array_split(np.arange(n), workers)

    def run(block):
        if len(block):
            out[block] = dijkstra(adj, directed=True, indices=block)

    if workers == 1:
        run(blocks[0])
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, blocks))

    if not np.all(np.isfinite(out)):
        i, j = np.argwhere(~np.isfinite(out))[0]
        raise NotStronglyConnected(
            f"no path from {g.names[i]!r} to {g.names[j]!r}"
        )
    if (adj != adj.T).nnz == 0:
        # undirected input: both directions sum the same path in different orders
        np.minimum(out, out.T, out=out)
    out.setflags(write=False)
    return out


def symmetry_constant(D: np.ndarray) -> float:
    """Smallest ratio ``D[i, j] / D[j, i]`` over ordered pairs ``i != j``.

    Equals 1 exactly when ``D`` is symmetric, and lies in (0, 1] otherwise.
    """
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise DimensionMismatch(f"distance matrix must be square, got {D.shape}")
    n = D.shape[0]
    if n < 2:
        raise DegenerateGraph("symmetry constant needs at least two vertices")
    off = ~np.eye(n, dtype=bool)
    # the pair (i, j) and its mirror give r and 1/r, so min <= 1 automatically
    return float(np.min(D[off] / D.T[off]))


# --- on-disk cache -------------------------------------------------------------
# layout: n as little-endian u64, then n*n little-endian float64 row-major.
# "<path>.sha256" stores the checksum of the edge list the matrix came from.

def file_checksum(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def save_distance_cache(path, D: np.ndarray, source_checksum: str) -> None:
    path = Path(path)
    n = D.shape[0]
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(struct.pack("<Q", n))
        fh.write(np.ascontiguousarray(D, dtype="<f8").tobytes())
    os.replace(tmp, path)
    Path(str(path) + ".sha256").write_text(source_checksum + "\n")


def load_distance_cache(path, source_checksum: str | None = None) -> np.ndarray | None:
    """Read a cached matrix; ``None`` if absent or stale for ``source_checksum``."""
    path = Path(path)
    side = Path(str(path) + ".sha256")
    if not path.exists():
        return None
    if source_checksum is not None:
        if not side.exists() or side.read_text().strip() != source_checksum:
            return None
    raw = path.read_bytes()
    if len(raw) < 8:
        raise InputFormatError("truncated distance cache", str(path))
    (n,) = struct.unpack("<Q", raw[:8])
    if len(raw) != 8 + 8 * n * n:
        raise InputFormatError(
            f"distance cache size mismatch for n={n}", str(path)
        )
    D = np.frombuffer(raw, dtype="<f8", offset=8).reshape(n, n).astype(float)
    D.setflags(write=False)
    return D
