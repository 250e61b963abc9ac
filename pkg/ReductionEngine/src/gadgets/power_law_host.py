"""
Power-law host graphs that make room for an embedded reduction.

A host is realised from the degree sequence floor(e^alpha / d^beta) by
Havel-Hakimi, then nodes of the degrees the reduction needs are freed by
local rewirings that keep every other degree unchanged:

* trade: a degree-1 node u (neighbour w) and a degree-3 node v (neighbour x)
  lose (u, w) and (v, x) while (x, w) is added. u is freed, v drops to
  degree 2.
* pairwise: two nodes of degree k lose all their edges and their neighbour
  lists are joined pairwise.

The freed nodes are then replaced by the reduction's own nodes of the same
degree, so the combined degree histogram equals the host's.
"""

import logging
import math
import random
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from ..exceptions import HostTooSmallError, PowerLawParameterError
from ..graph.degrees import PowerLawParams, degree_histogram
from ..graph.dynamic_graph import DynamicGraph

logger = logging.getLogger(__name__)

MAX_REGROWTHS = 8


@dataclass
class PowerLawHost:
    """
    A realised host with nodes freed for a reduction.

    Attributes:
        params: the (alpha, beta) law the host was drawn from.
        graph: host after make-space; freed nodes are isolated.
        freed: degree at freeing time -> freed node ids.
        surplus: freed nodes left over from pairwise freeing.
        sequence_histogram: degree histogram of the realised sequence.
    """

    params: PowerLawParams
    graph: DynamicGraph
    freed: Dict[int, List[int]]
    surplus: List[int] = field(default_factory=list)
    sequence_histogram: Dict[int, int] = field(default_factory=dict)
    regrowths: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def freed_nodes(self) -> Set[int]:
        nodes = set(self.surplus)
        for members in self.freed.values():
            nodes.update(members)
        return nodes

    def remainder(self) -> List[int]:
        """Host nodes that stay in the combined graph."""
        freed = self.freed_nodes
        return [v for v in self.graph.nodes() if v not in freed]


@dataclass
class EmbeddedGraph:
    """Reduction nodes 0..reduction_size-1 followed by the host remainder."""

    graph: DynamicGraph
    reduction_size: int
    host_map: Dict[int, int]

    @property
    def host_nodes(self) -> List[int]:
        return sorted(self.host_map.values())


def choose_alpha(required: Dict[int, int], beta: float, reserve: int = 0) -> float:
    """Smallest alpha (plus a hair) leaving at least 2*N_d + reserve nodes per class."""
    if beta <= 2:
        raise PowerLawParameterError(f"Power-law exponent must exceed 2, got {beta}")
    need = max((2 * count + reserve + 1) * degree ** beta
               for degree, count in required.items())
    return math.log(need) + 1e-6


def _degree_sequence(params: PowerLawParams) -> List[int]:
    sequence = []
    for degree, count in params.expected_histogram().items():
        sequence.extend([degree] * count)
    return sequence


def _realise(params: PowerLawParams, rng: random.Random, notes: List[str]) -> Optional[DynamicGraph]:
    sequence = _degree_sequence(params)
    if sum(sequence) % 2:
        sequence.append(1)
        notes.append("parity fix: one extra degree-1 node")
    if not nx.is_graphical(sequence):
        return None
    rng.shuffle(sequence)
    realised = nx.havel_hakimi_graph(sequence)
    graph = DynamicGraph(len(sequence))
    graph.add_edges(sorted((min(a, b), max(a, b)) for a, b in realised.edges()))
    graph.clear_log()
    return graph


class _MakeSpace:
    """Local rewirings that free nodes of chosen degrees."""

    def __init__(self, graph: DynamicGraph, rng: random.Random):
        self.graph = graph
        self.rng = rng
        self.freed: Set[int] = set()

    def _candidates(self, degree: int) -> List[int]:
        nodes = [v for v in self.graph.nodes()
                 if v not in self.freed and self.graph.degree(v) == degree]
        self.rng.shuffle(nodes)
        return nodes

    def trade(self) -> Optional[int]:
        g = self.graph
        for u in self._candidates(1):
            (w,) = tuple(g.neighbors(u))
            for v in self._candidates(3):
                if v in (u, w):
                    continue
                for x in sorted(g.neighbors(v)):
                    if x in (u, w) or g.has_edge(x, w):
                        continue
                    g.delete_edge(u, w)
                    g.delete_edge(v, x)
                    g.insert_edge(x, w)
                    self.freed.add(u)
                    return u
        return None

    def _join(self, first: List[int], second: List[int]) -> Optional[List[Tuple[int, int]]]:
        for order in permutations(second):
            pairs = list(zip(first, order))
            if all(a != b and not self.graph.has_edge(a, b) for a, b in pairs):
                if len({tuple(sorted(p)) for p in pairs}) == len(pairs):
                    return pairs
        return None

    def free_pair(self, degree: int) -> Optional[Tuple[int, int]]:
        g = self.graph
        candidates = self._candidates(degree)
        for position, u in enumerate(candidates):
            u_nbrs = sorted(g.neighbors(u))
            for v in candidates[position + 1:]:
                v_nbrs = sorted(g.neighbors(v))
                if g.has_edge(u, v):
                    if degree == 1:
                        # an isolated edge frees both ends outright
                        g.delete_edge(u, v)
                        self.freed.update((u, v))
                        return u, v
                    continue
                if set(u_nbrs) & set(v_nbrs):
                    continue
                pairs = self._join(u_nbrs, v_nbrs)
                if pairs is None:
                    continue
                for w in u_nbrs:
                    g.delete_edge(u, w)
                for w in v_nbrs:
                    g.delete_edge(v, w)
                for a, b in pairs:
                    g.insert_edge(a, b)
                self.freed.update((u, v))
                return u, v
        return None


def _make_space(graph: DynamicGraph, required: Dict[int, int], rng: random.Random):
    """
    Free nodes so that removing them lowers each class d by exactly
    ``required[d]``; returns (freed by degree, surplus) or None.
    """
    space = _MakeSpace(graph, rng)
    freed: Dict[int, List[int]] = {degree: [] for degree in (1, 2, 3)}
    surplus: List[int] = []
    trades = min(required.get(1, 0), required.get(3, 0))
    for _ in range(trades):
        u = space.trade()
        if u is None:
            return None
        freed[1].append(u)
    # every trade leaves one more degree-2 node and one fewer degree-3 node
    demand = {1: required.get(1, 0) - trades,
              2: required.get(2, 0) + trades,
              3: required.get(3, 0) - trades}
    for degree in (2, 3, 1):
        while demand[degree] > 0:
            pair = space.free_pair(degree)
            if pair is None:
                return None
            for node in pair:
                if demand[degree] > 0:
                    freed[degree].append(node)
                    demand[degree] -= 1
                else:
                    surplus.append(node)
    return freed, surplus


def build_power_law_host(required: Dict[int, int], beta: float, seed: Optional[int] = None,
                         reserve: int = 0, max_regrowths: int = MAX_REGROWTHS) -> PowerLawHost:
    """
    Realise a host for a reduction with degree histogram ``required``.

    Args:
        required: degree -> number of reduction nodes of that degree.
        beta: power-law exponent, must exceed 2.
        seed: drives the node shuffle and every make-space choice.
        reserve: spare nodes per class kept beyond 2 * N_d.

    Raises:
        HostTooSmallError: no host up to the regrowth cap admitted the embedding.
    """
    alpha = choose_alpha(required, beta, reserve)
    rng = random.Random(seed)
    for regrowth in range(max_regrowths + 1):
        params = PowerLawParams(alpha, beta)
        notes: List[str] = []
        graph = _realise(params, rng, notes)
        histogram = degree_histogram(graph) if graph is not None else {}
        outcome = _make_space(graph, required, rng) if graph is not None else None
        if outcome is not None:
            freed, surplus = outcome
            graph.clear_log()
            host = PowerLawHost(params, graph, freed, surplus,
                                histogram,
                                regrowth, notes)
            logger.info("Power-law host: alpha=%.3f beta=%.2f N=%d, freed %s (regrowths %d)",
                        alpha, beta, graph.node_count,
                        {d: len(v) for d, v in sorted(freed.items())}, regrowth)
            return host
        logger.debug("Host with alpha=%.3f could not make space; regrowing", alpha)
        alpha += math.log(2)
    required_nodes = int(math.ceil(math.exp(alpha)))
    message = (f"Power-law host too small for degree demand {dict(sorted(required.items()))} "
               f"after {max_regrowths} regrowths; need about {required_nodes} nodes")
    logger.error(message)
    raise HostTooSmallError(message, required_nodes)


def embed(host: PowerLawHost, reduction: DynamicGraph) -> EmbeddedGraph:
    """
    Place the reduction on the freed nodes.

    Returns:
        EmbeddedGraph whose ids 0..len(reduction)-1 are the reduction's own.
    """
    remainder = host.remainder()
    combined = DynamicGraph(reduction.node_count + len(remainder))
    host_map = {v: reduction.node_count + k for k, v in enumerate(remainder)}
    combined.add_edges(reduction.edges())
    combined.add_edges(sorted(normalize_pair(host_map[a], host_map[b])
                              for a, b in host.graph.edges()))
    combined.clear_log()
    return EmbeddedGraph(combined, reduction.node_count, host_map)


def normalize_pair(a: int, b: int) -> Tuple[int, int]:
    return (a, b) if a < b else (b, a)


def pick_rewire_pairs(graph: DynamicGraph, count: int, nodes: Sequence[int],
                      rng: random.Random, b_degree: int = 3,
                      exclude: Iterable[int] = ()) -> Optional[List[Tuple[int, int, int, int]]]:
    """
    ``count`` node-disjoint (a, b, c, d) with deg a = 2, deg b = ``b_degree``,
    c in N(a), d in N(b) and (c, d) absent, drawn from ``nodes`` and avoiding
    ``exclude``.
    """
    allowed = set(nodes)
    used: Set[int] = set(exclude)
    twos = [v for v in nodes if graph.degree(v) == 2]
    partners = [v for v in nodes if graph.degree(v) == b_degree]
    rng.shuffle(twos)
    rng.shuffle(partners)
    pairs = []
    for a in twos:
        if len(pairs) == count:
            break
        if a in used:
            continue
        chosen = None
        for b in partners:
            if b in used or b == a:
                continue
            for c in sorted(graph.neighbors(a)):
                if c in used or c == b or c not in allowed:
                    continue
                for d in sorted(graph.neighbors(b)):
                    if d in used or d in (a, c) or d not in allowed or graph.has_edge(c, d):
                        continue
                    chosen = (a, b, c, d)
                    break
                if chosen:
                    break
            if chosen:
                break
        if chosen:
            pairs.append(chosen)
            used.update(chosen)
    return pairs if len(pairs) == count else None


def apply_rewire(graph: DynamicGraph, pair: Tuple[int, int, int, int]) -> int:
    """Delete (a, c), (b, d) and add (c, d): a and b lose one degree each, c and d keep theirs."""
    a, b, c, d = pair
    graph.delete_edge(a, c)
    graph.delete_edge(b, d)
    graph.insert_edge(c, d)
    return 3


def pad_with_stars(core: DynamicGraph, params: PowerLawParams,
                   core_histogram: Dict[int, int]) -> Tuple[DynamicGraph, List[str]]:
    """
    Complete ``core`` to the (alpha, beta) law with stars and a matching.

    Every missing node of degree k > 1 becomes a star centre with k fresh
    degree-1 leaves; the leftover degree-1 demand is covered by a perfect
    matching (one node short when it is odd).
    """
    notes: List[str] = []
    target = params.expected_histogram()
    graph = core.copy()
    leaves_used = 0
    for degree in sorted(target, reverse=True):
        if degree == 1:
            continue
        missing = target[degree] - core_histogram.get(degree, 0)
        if missing < 0:
            raise HostTooSmallError(
                f"Core needs {core_histogram[degree]} nodes of degree {degree}, law allows {target[degree]}",
                int(math.ceil(math.exp(params.alpha))))
        for _ in range(missing):
            centre = graph.add_nodes(1)[0]
            for leaf in graph.add_nodes(degree):
                graph.insert_edge(centre, leaf)
            leaves_used += degree
    remaining = target.get(1, 0) - core_histogram.get(1, 0) - leaves_used
    if remaining < 0:
        raise HostTooSmallError(
            f"Stars need {leaves_used} degree-1 leaves, law provides {target.get(1, 0)}",
            int(math.ceil(math.exp(params.alpha + math.log(2)))))
    if remaining % 2:
        remaining -= 1
        notes.append("odd degree-1 remainder: one node left out")
    nodes = graph.add_nodes(remaining)
    for k in range(0, remaining, 2):
        graph.insert_edge(nodes[k], nodes[k + 1])
    graph.clear_log()
    return graph, notes
