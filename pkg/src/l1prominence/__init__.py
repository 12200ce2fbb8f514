"""L1 prestige and L1 centrality for strongly connected weighted digraphs."""

__version__ = "0.1.0"

from .errors import L1Error
from .graph import Graph, build_graph, check_strong_connectivity, from_undirected, read_graph, write_graph
from .geodesics import all_pairs_shortest, symmetry_constant
from .prominence import (
    l1_centrality,
    l1_prestige,
    l1_prestige_matrix_form,
    median_set,
    oracle_prestige,
    prestige_median,
    centrality_median,
    weighted_distance_sums,
)
from .locality import (
    centrality_neighborhood,
    local_l1_centrality,
    local_l1_prestige,
    modified_multiplicities,
    multiscale_profile,
    prestige_neighborhood,
)

__all__ = [
    "L1Error",
    "Graph",
    "build_graph",
    "check_strong_connectivity",
    "from_undirected",
    "read_graph",
    "write_graph",
    "all_pairs_shortest",
    "symmetry_constant",
    "l1_prestige",
    "l1_centrality",
    "l1_prestige_matrix_form",
    "median_set",
    "prestige_median",
    "centrality_median",
    "oracle_prestige",
    "weighted_distance_sums",
    "modified_multiplicities",
    "prestige_neighborhood",
    "centrality_neighborhood",
    "local_l1_prestige",
    "local_l1_centrality",
    "multiscale_profile",
]
