"""Breadth-first search based queries: distances, components, 2-colouring."""

from collections import deque
from typing import Dict, List, Optional, Tuple

from .dynamic_graph import DynamicGraph

INFINITY = float("inf")


def bfs_distances(graph: DynamicGraph, source: int) -> List[float]:
    """Hop distance from ``source`` to every node (``inf`` when unreachable)."""
    dist: List[float] = [INFINITY] * graph.node_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        nxt = dist[v] + 1
        for w in graph.neighbors(v):
            if dist[w] == INFINITY:
                dist[w] = nxt
                queue.append(w)
    return dist


def bfs_distance(graph: DynamicGraph, s: int, t: int) -> float:
    """Exact hop count of a shortest s-t path, ``inf`` if disconnected."""
    size = graph.node_count
    if not (0 <= s < size and 0 <= t < size):
        raise ValueError(f"Endpoints ({s}, {t}) outside node range [0, {size})")
    if s == t:
        return 0
    dist = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        nxt = dist[v] + 1
        for w in graph.neighbors(v):
            if w not in dist:
                if w == t:
                    return nxt
                dist[w] = nxt
                queue.append(w)
    return INFINITY


def connected_components(graph: DynamicGraph) -> List[List[int]]:
    """Components as sorted node lists, ordered by smallest member."""
    seen = [False] * graph.node_count
    components = []
    for root in graph.nodes():
        if seen[root]:
            continue
        seen[root] = True
        members = [root]
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in graph.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    members.append(w)
                    queue.append(w)
        components.append(sorted(members))
    return components


def is_connected(graph: DynamicGraph) -> bool:
    if graph.node_count == 0:
        return True
    dist = bfs_distances(graph, 0)
    return all(d != INFINITY for d in dist)


def is_bipartite(graph: DynamicGraph) -> Tuple[bool, Optional[Dict[int, int]]]:
    """
    Two-colour the graph.

    Returns:
        (True, colouring) with colours 0/1 when bipartite, otherwise (False, None).
    """
    colour: Dict[int, int] = {}
    for root in graph.nodes():
        if root in colour:
            continue
        colour[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in graph.neighbors(v):
                if w not in colour:
                    colour[w] = 1 - colour[v]
                    queue.append(w)
                elif colour[w] == colour[v]:
                    return False, None
    return True, colour


def is_proper_colouring(graph: DynamicGraph, colour: Dict[int, int]) -> bool:
    return all(colour[a] != colour[b] for a, b in graph.iter_edges())
