"""
Exact densest subgraph.

Feasibility of "some S has |E(S)|/|S| > p/q" is decided by the parametric
min-cut network with capacities scaled by q: s->v gets m*q, v->t gets
m*q + 2p - deg(v)*q, and every edge gets q in both directions. A set denser
than p/q exists iff the min cut is below m*|V|*q. Densities are
``fractions.Fraction`` throughout and never compared in floating point.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .dynamic_graph import DynamicGraph
from .flow import FlowNetwork
from .traversal import connected_components

logger = logging.getLogger(__name__)

DensityValue = Fraction

DENSEST_METHODS = ("binary", "dinkelbach")


@dataclass
class DensestResult:
    """Optimal density and one witness set attaining it."""

    density: Fraction
    nodes: List[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"density": f"{self.density.numerator}/{self.density.denominator}",
                "nodes": list(self.nodes)}


def density_of(graph: DynamicGraph, nodes: Iterable[int]) -> Fraction:
    members = set(nodes)
    if not members:
        raise ValueError("Density of an empty node set is undefined")
    inside = sum(1 for v in members for w in graph.neighbors(v) if w in members) // 2
    return Fraction(inside, len(members))


class _Component:
    """One connected component with local ids, ready for parametric cuts."""

    def __init__(self, graph: DynamicGraph, nodes: Sequence[int]):
        self.nodes = list(nodes)
        index = {v: k for k, v in enumerate(self.nodes)}
        self.edges = [(index[v], index[w]) for v in self.nodes
                      for w in graph.neighbors(v) if v < w and w in index]
        self.degrees = [0] * len(self.nodes)
        for a, b in self.edges:
            self.degrees[a] += 1
            self.degrees[b] += 1

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def is_tree(self) -> bool:
        return self.edge_count == self.size - 1

    def upper_bound(self) -> Fraction:
        if self.size < 2:
            return Fraction(0)
        if self.is_tree():
            return Fraction(self.size - 1, self.size)
        return min(Fraction(max(self.degrees), 2), Fraction(self.size - 1, 2))

    def density(self, local: Iterable[int]) -> Fraction:
        members = set(local)
        inside = sum(1 for a, b in self.edges if a in members and b in members)
        return Fraction(inside, len(members))

    def denser_than(self, threshold: Fraction) -> Optional[List[int]]:
        """Local ids of a set with density strictly above ``threshold``, or None."""
        p, q = threshold.numerator, threshold.denominator
        if p < 0:
            return list(range(self.size))
        m, k = self.edge_count, self.size
        source, sink = k, k + 1
        network = FlowNetwork(k + 2)
        for v in range(k):
            network.add_edge(source, v, m * q)
            network.add_edge(v, sink, m * q + 2 * p - self.degrees[v] * q)
        for a, b in self.edges:
            network.add_edge(a, b, q, q)
        cut = network.max_flow(source, sink)
        if cut >= m * k * q:
            return None
        side = network.source_side(source)
        side.discard(source)
        return sorted(side)


def _solve_binary(component: _Component):
    k = component.size
    witness = list(range(k))
    lo = component.density(witness)
    hi = Fraction(max(component.degrees), 2)
    gap = Fraction(1, k * (k - 1))
    flows = 0
    while hi - lo >= gap:
        mid = (lo + hi) / 2
        found = component.denser_than(mid)
        flows += 1
        if found:
            witness = found
            lo = component.density(found)
        else:
            hi = mid
    return lo, witness, flows


def _solve_dinkelbach(component: _Component):
    witness = list(range(component.size))
    current = component.density(witness)
    flows = 0
    while True:
        found = component.denser_than(current)
        flows += 1
        if not found:
            return current, witness, flows
        witness = found
        current = component.density(found)


def densest_subgraph(graph: DynamicGraph, method: str = "binary") -> DensestResult:
    """
    Maximum of |E(S)|/|S| over nonempty S, with a witness.

    Args:
        graph: Graph snapshot.
        method: "binary" (search over candidate rationals, stops once the
            bracket is narrower than the gap between any two densities with
            denominators at most N) or "dinkelbach" (fractional programming
            iterations on the same cut oracle).

    Returns:
        DensestResult with an exact Fraction density.
    """
    if method not in DENSEST_METHODS:
        raise ValueError(f"Unsupported densest method: {method}")
    if graph.node_count == 0:
        return DensestResult(Fraction(0), [])
    best = DensestResult(Fraction(0), [0])
    total_flows = 0
    for nodes in connected_components(graph):
        component = _Component(graph, nodes)
        if component.size < 2 or component.upper_bound() <= best.density:
            continue
        if component.is_tree():
            value, local = component.upper_bound(), list(range(component.size))
        elif method == "binary":
            value, local, flows = _solve_binary(component)
            total_flows += flows
        else:
            value, local, flows = _solve_dinkelbach(component)
            total_flows += flows
        if value > best.density:
            best = DensestResult(value, sorted(component.nodes[x] for x in local))
    logger.debug("Densest subgraph %s via %s (%d flows)", best.density, method, total_flows)
    return best


def has_denser_subgraph(graph: DynamicGraph, threshold: Fraction) -> Optional[List[int]]:
    """A node set with density strictly above ``threshold``, or None."""
    for nodes in connected_components(graph):
        component = _Component(graph, nodes)
        if component.size < 2 or component.upper_bound() <= threshold:
            continue
        if component.is_tree():
            return list(component.nodes)
        found = component.denser_than(threshold)
        if found:
            return sorted(component.nodes[x] for x in found)
    return None


def densest_subgraph_bruteforce(graph: DynamicGraph) -> DensestResult:
    """Enumerate every nonempty subset (tests only; N <= 20)."""
    size = graph.node_count
    if size == 0:
        return DensestResult(Fraction(0), [])
    if size > 20:
        raise ValueError(f"Subset enumeration limited to 20 nodes, got {size}")
    masks = np.arange(1, 1 << size, dtype=np.int64)
    inside = np.zeros(masks.shape, dtype=np.int64)
    for a, b in graph.iter_edges():
        inside += ((masks >> a) & (masks >> b) & 1)
    members = np.zeros(masks.shape, dtype=np.int64)
    for v in range(size):
        members += (masks >> v) & 1
    best_index = int(np.argmax(inside / members))
    best_mask = int(masks[best_index])
    nodes = [v for v in range(size) if (best_mask >> v) & 1]
    return DensestResult(Fraction(int(inside[best_index]), int(members[best_index])), nodes)
