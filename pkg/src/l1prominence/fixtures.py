"""Random test graphs.  Seeds live here only; the measures are deterministic."""

from __future__ import annotations

import numpy as np

from .graph import Graph, build_graph


def random_strong_graph(
    n: int,
    seed: int | np.random.Generator | None = None,
    density: float = 0.3,
    max_weight: float = 10.0,
    max_eta: float = 5.0,
    symmetric: bool = False,
) -> Graph:
    """Strongly connected digraph: a random Hamiltonian cycle plus random chords.

    Weights are drawn from (0, max_weight] and multiplicities from
    [0, max_eta] (redrawn if they sum to zero).
    """
    rng = np.random.default_rng(seed)
    names = [f"v{i}" for i in range(n)]
    perm = rng.permutation(n)
    pairs = {(int(perm[i]), int(perm[(i + 1) % n])) for i in range(n)} if n > 1 else set()
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                pairs.add((i, j))
    if symmetric:
        pairs |= {(j, i) for i, j in pairs}
    weights = {}
    for i, j in sorted(pairs):
        if symmetric and (j, i) in weights:
            weights[(i, j)] = weights[(j, i)]
        else:
            weights[(i, j)] = max_weight - rng.uniform(0.0, max_weight)
    eta = rng.uniform(0.0, max_eta, size=n)
    while eta.sum() <= 0:
        eta = rng.uniform(0.0, max_eta, size=n)
    edges = [(names[i], names[j], w) for (i, j), w in weights.items()]
    return build_graph(names, eta, edges)
