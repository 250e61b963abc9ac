"""Dynamic graph representation, exact reference solvers and verifiers."""

from .dynamic_graph import DELETE, INSERT, DynamicGraph, UpdateOp, normalize, replay
from .traversal import (INFINITY, bfs_distance, bfs_distances, connected_components,
                        is_bipartite, is_connected, is_proper_colouring)
from .matching import (Matching, augmenting_path_exists, blossom_matching, greedy_matching,
                       hopcroft_karp, max_matching_bruteforce, max_matching_size,
                       maximum_matching)
from .densest import (DENSEST_METHODS, DensestResult, DensityValue, densest_subgraph,
                      densest_subgraph_bruteforce, density_of, has_denser_subgraph)
from .expansion import (ExpansionCertificate, edge_expansion_exact,
                        expansion_lower_bound_spectral, laplacian_matrix)
from .min_cut import global_min_cut, global_min_cut_with_side, min_cut_bruteforce
from .degrees import (POWER_LAW_VARIANTS, DegreeStats, PowerLawParams, PowerLawReport,
                      check_power_law, degree_histogram, degree_stats, zeta)
from .io import format_edge_list, parse_edge_list, read_edge_list, to_dot, write_edge_list

__all__ = [
    "DELETE", "INSERT", "DynamicGraph", "UpdateOp", "normalize", "replay",
    "INFINITY", "bfs_distance", "bfs_distances", "connected_components", "is_bipartite",
    "is_connected", "is_proper_colouring",
    "Matching", "augmenting_path_exists", "blossom_matching", "greedy_matching",
    "hopcroft_karp", "max_matching_bruteforce", "max_matching_size", "maximum_matching",
    "DENSEST_METHODS", "DensestResult", "DensityValue", "densest_subgraph",
    "densest_subgraph_bruteforce", "density_of", "has_denser_subgraph",
    "ExpansionCertificate", "edge_expansion_exact", "expansion_lower_bound_spectral",
    "laplacian_matrix",
    "global_min_cut", "global_min_cut_with_side", "min_cut_bruteforce",
    "POWER_LAW_VARIANTS", "DegreeStats", "PowerLawParams", "PowerLawReport",
    "check_power_law", "degree_histogram", "degree_stats", "zeta",
    "format_edge_list", "parse_edge_list", "read_edge_list", "to_dot", "write_edge_list",
]
