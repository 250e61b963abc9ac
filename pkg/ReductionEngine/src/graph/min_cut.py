"""Global minimum edge cut by Stoer-Wagner contraction phases."""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .dynamic_graph import DynamicGraph
from .traversal import is_connected

logger = logging.getLogger(__name__)


def global_min_cut(graph: DynamicGraph, nodes: Optional[Sequence[int]] = None) -> int:
    """Exact global min cut value of a connected graph."""
    return global_min_cut_with_side(graph, nodes)[0]


def global_min_cut_with_side(graph: DynamicGraph,
                             nodes: Optional[Sequence[int]] = None) -> Tuple[int, List[int]]:
    """
    Stoer-Wagner minimum cut.

    Ties in the maximum-adjacency order go to the smallest node id, so the
    returned side is deterministic.

    Returns:
        (cut value, one side of a minimum cut as original node ids)
    """
    node_list = sorted(nodes) if nodes is not None else list(graph.nodes())
    size = len(node_list)
    if size < 2:
        return 0, list(node_list)
    if nodes is None and not is_connected(graph):
        return 0, []
    index = {v: k for k, v in enumerate(node_list)}
    weights = np.zeros((size, size), dtype=np.int64)
    for v in node_list:
        for w in graph.neighbors(v):
            if w in index:
                weights[index[v], index[w]] = 1
    groups: List[List[int]] = [[v] for v in node_list]
    alive = np.ones(size, dtype=bool)
    best_value: Optional[int] = None
    best_side: List[int] = []
    for _ in range(size - 1):
        candidates = np.flatnonzero(alive)
        start = int(candidates[0])
        in_a = np.zeros(size, dtype=bool)
        in_a[start] = True
        connection = weights[start].copy()
        previous, last = start, start
        for _ in range(len(candidates) - 1):
            masked = np.where(alive & ~in_a, connection, -1)
            chosen = int(np.argmax(masked))
            in_a[chosen] = True
            connection += weights[chosen]
            previous, last = last, chosen
        phase_value = int(connection[last])
        if best_value is None or phase_value < best_value:
            best_value = phase_value
            best_side = sorted(groups[last])
        weights[previous] += weights[last]
        weights[:, previous] += weights[:, last]
        weights[previous, previous] = 0
        groups[previous].extend(groups[last])
        alive[last] = False
        weights[last] = 0
        weights[:, last] = 0
    return int(best_value), best_side


def min_cut_bruteforce(graph: DynamicGraph) -> int:
    """Minimum over all proper nonempty subsets (tests only; N <= 16)."""
    size = graph.node_count
    edges = graph.edges()
    best = None
    for mask in range(1, (1 << size) - 1):
        if not mask & 1:
            continue
        crossing = sum(1 for a, b in edges if ((mask >> a) ^ (mask >> b)) & 1)
        best = crossing if best is None else min(best, crossing)
    return best if best is not None else 0
