"""
Maximum cardinality matching.

Bipartite components use Hopcroft-Karp layered augmentation; the others use
Edmonds' blossom search rooted at one exposed vertex at a time, warm-started
from a greedy matching.
"""

import logging
from collections import deque
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..exceptions import InvalidMatchingError
from .dynamic_graph import DynamicGraph
from .traversal import connected_components, is_bipartite

logger = logging.getLogger(__name__)

_UNREACHED = float("inf")


class Matching:
    """Partner map; unmatched nodes are simply absent."""

    def __init__(self, pairs: Iterable[Tuple[int, int]] = ()):
        self.partner: Dict[int, int] = {}
        for a, b in pairs:
            self.add(a, b)

    def add(self, a: int, b: int):
        if a == b or a in self.partner or b in self.partner:
            raise InvalidMatchingError(f"Cannot add ({a}, {b}): endpoint already matched")
        self.partner[a] = b
        self.partner[b] = a

    def mate(self, v: int) -> Optional[int]:
        return self.partner.get(v)

    def is_matched(self, v: int) -> bool:
        return v in self.partner

    def size(self) -> int:
        return len(self.partner) // 2

    def __len__(self) -> int:
        return self.size()

    def pairs(self) -> List[Tuple[int, int]]:
        return sorted((a, b) for a, b in self.partner.items() if a < b)

    def copy(self) -> "Matching":
        clone = Matching()
        clone.partner = dict(self.partner)
        return clone

    def validate(self, graph: DynamicGraph):
        """Raise ``InvalidMatchingError`` unless involutive and made of current edges."""
        for a, b in self.partner.items():
            if self.partner.get(b) != a:
                raise InvalidMatchingError(f"Partner map not involutive at {a} -> {b}")
            if not graph.has_edge(a, b):
                raise InvalidMatchingError(f"Matched pair ({a}, {b}) is not an edge")


def greedy_matching(graph: DynamicGraph, nodes: Optional[Sequence[int]] = None) -> Matching:
    """Maximal matching, low-degree nodes first."""
    order = sorted(nodes if nodes is not None else graph.nodes(),
                   key=lambda v: (graph.degree(v), v))
    matching = Matching()
    for v in order:
        if v in matching.partner:
            continue
        for w in sorted(graph.neighbors(v)):
            if w not in matching.partner:
                matching.add(v, w)
                break
    return matching


# -- Hopcroft-Karp ------------------------------------------------------------

def hopcroft_karp(graph: DynamicGraph, colour: Dict[int, int],
                  nodes: Optional[Sequence[int]] = None) -> Matching:
    """Maximum matching of a bipartite (sub)graph given a proper 2-colouring."""
    node_list = list(nodes) if nodes is not None else list(graph.nodes())
    left = [v for v in node_list if colour[v] == 0]
    adj = {u: sorted(graph.neighbors(u)) for u in left}
    pair_left: Dict[int, Optional[int]] = {u: None for u in left}
    pair_right: Dict[int, int] = {}
    dist: Dict[int, float] = {}

    def layer() -> bool:
        queue = deque()
        for u in left:
            if pair_left[u] is None:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _UNREACHED
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = pair_right.get(v)
                if w is None:
                    found = True
                elif dist[w] == _UNREACHED:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def augment_from(root: int) -> bool:
        stack = [root]
        cursors = {root: iter(adj[root])}
        via: List[int] = []
        while stack:
            u = stack[-1]
            for v in cursors[u]:
                w = pair_right.get(v)
                if w is None:
                    via.append(v)
                    for uu, vv in zip(stack, via):
                        pair_left[uu] = vv
                        pair_right[vv] = uu
                    return True
                if dist[w] == dist[u] + 1:
                    via.append(v)
                    stack.append(w)
                    cursors[w] = iter(adj[w])
                    break
            else:
                dist[u] = _UNREACHED
                stack.pop()
                if via:
                    via.pop()
        return False

    while layer():
        for u in left:
            if pair_left[u] is None:
                augment_from(u)

    return Matching((u, v) for u, v in pair_left.items() if v is not None)


# -- Edmonds blossom search ---------------------------------------------------

class _BlossomSearch:
    """Single-root alternating-tree search with blossom contraction."""

    def __init__(self, adj: Dict[int, List[int]], mate: Dict[int, int]):
        self.adj = adj
        self.mate = mate

    def find(self, root: int, targets: Optional[set] = None) -> Optional[int]:
        """
        Grow an alternating tree from ``root``.

        Returns:
            An exposed endpoint reachable by an augmenting path (restricted to
            ``targets`` when given), leaving ``self.parent`` ready for augment.
        """
        mate = self.mate
        self.parent: Dict[int, int] = {}
        self.base: Dict[int, int] = {}
        used = {root}
        touched = [root]
        queue = deque([root])
        base = self.base
        parent = self.parent

        def base_of(x: int) -> int:
            return base.get(x, x)

        def lca(a: int, b: int) -> int:
            seen = set()
            while True:
                a = base_of(a)
                seen.add(a)
                if a not in mate:
                    break
                a = parent[mate[a]]
            while True:
                b = base_of(b)
                if b in seen:
                    return b
                b = parent[mate[b]]

        def mark_path(v: int, b: int, child: int, in_blossom: set):
            while base_of(v) != b:
                in_blossom.add(base_of(v))
                in_blossom.add(base_of(mate[v]))
                parent[v] = child
                child = mate[v]
                v = parent[mate[v]]

        while queue:
            v = queue.popleft()
            for to in self.adj[v]:
                if base_of(v) == base_of(to) or mate.get(v) == to:
                    continue
                if to == root or (to in mate and mate[to] in parent):
                    current = lca(v, to)
                    in_blossom: set = set()
                    mark_path(v, current, to, in_blossom)
                    mark_path(to, current, v, in_blossom)
                    for x in list(touched):
                        if base_of(x) in in_blossom:
                            base[x] = current
                            if x not in used:
                                used.add(x)
                                queue.append(x)
                elif to not in parent:
                    if to not in mate:
                        if targets is not None and to not in targets:
                            continue
                        parent[to] = v
                        return to
                    parent[to] = v
                    touched.append(to)
                    partner = mate[to]
                    used.add(partner)
                    touched.append(partner)
                    queue.append(partner)
        return None

    def augment(self, end: int):
        v = end
        while v is not None:
            pv = self.parent[v]
            ppv = self.mate.get(pv)
            self.mate[v] = pv
            self.mate[pv] = v
            v = ppv


def blossom_matching(graph: DynamicGraph, nodes: Optional[Sequence[int]] = None,
                     initial: Optional[Matching] = None) -> Matching:
    """Maximum matching on a general (sub)graph."""
    node_list = list(nodes) if nodes is not None else list(graph.nodes())
    keep = set(node_list)
    adj = {v: sorted(w for w in graph.neighbors(v) if w in keep) for v in node_list}
    start = initial if initial is not None else greedy_matching(graph, node_list)
    mate = {a: b for a, b in start.partner.items() if a in keep}
    search = _BlossomSearch(adj, mate)
    for v in node_list:
        if v in mate or not adj[v]:
            continue
        end = search.find(v)
        if end is not None:
            search.augment(end)
    result = Matching()
    result.partner = dict(mate)
    return result


def maximum_matching(graph: DynamicGraph) -> Matching:
    """Maximum matching, solved per connected component."""
    result = Matching()
    for component in connected_components(graph):
        if len(component) < 2:
            continue
        sub = _component_matching(graph, component)
        result.partner.update(sub.partner)
    return result


def _component_matching(graph: DynamicGraph, component: List[int]) -> Matching:
    bipartite, colour = _colour_component(graph, component)
    if bipartite:
        return hopcroft_karp(graph, colour, component)
    return blossom_matching(graph, component)


def _colour_component(graph: DynamicGraph, component: List[int]):
    colour = {component[0]: 0}
    queue = deque([component[0]])
    while queue:
        v = queue.popleft()
        for w in graph.neighbors(v):
            if w not in colour:
                colour[w] = 1 - colour[v]
                queue.append(w)
            elif colour[w] == colour[v]:
                return False, None
    return True, colour


def max_matching_size(graph: DynamicGraph) -> int:
    """Exact maximum cardinality matching size."""
    return maximum_matching(graph).size()


def augmenting_path_exists(graph: DynamicGraph, matching: Matching, s: int, t: int) -> bool:
    """True iff some alternating path from ``s`` to ``t`` augments ``matching``."""
    matching.validate(graph)
    if matching.is_matched(s) or matching.is_matched(t):
        raise InvalidMatchingError(f"Endpoints must be unmatched, got s={s}, t={t}")
    if s == t:
        return False
    adj = {v: sorted(graph.neighbors(v)) for v in graph.nodes()}
    search = _BlossomSearch(adj, dict(matching.partner))
    return search.find(s, targets={t}) == t


def max_matching_bruteforce(graph: DynamicGraph) -> int:
    """Exponential enumeration over all matchings (tests only)."""
    adj = {v: sorted(graph.neighbors(v)) for v in graph.nodes()}

    def best(free: frozenset) -> int:
        candidates = [v for v in free if any(w in free for w in adj[v])]
        if not candidates:
            return 0
        v = min(candidates)
        rest = free - {v}
        result = best(rest)
        for w in adj[v]:
            if w in rest:
                result = max(result, 1 + best(rest - {w}))
        return result

    return best(frozenset(graph.nodes()))
