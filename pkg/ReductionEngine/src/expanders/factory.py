"""
Certified constant-degree expanders.

A candidate d-regular graph is the union of random perfect matchings (even
node count) or of random Hamiltonian cycles (odd node count, even d). Each
layer is resampled until it avoids the edges already drawn, and the finished
graph is kept only if its expansion certificate reaches ``min_h0``. The
attempt counter is folded into the seed, so a fixed seed is reproducible.
"""

import logging
import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations
from typing import List, Optional, Sequence, Set, Tuple

from ..exceptions import ExpanderGenerationError, GadgetConstructionError
from ..graph.dynamic_graph import DynamicGraph
from ..graph.expansion import (EXHAUSTIVE_CAP, ExpansionCertificate, edge_expansion_exact,
                               expansion_lower_bound_spectral)

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 1000
_LAYER_TRIES = 200


@dataclass(frozen=True)
class ExpanderSpec:
    """Parameters of one expander: node count, degree, required expansion, seed."""

    nodes: int
    degree: int = 4
    min_h0: float = 0.1
    seed: int = 0

    def validate(self):
        if self.degree < 3:
            raise GadgetConstructionError(f"Expander degree must be at least 3, got {self.degree}")
        if (self.nodes * self.degree) % 2:
            raise GadgetConstructionError(
                f"Odd degree sum: {self.nodes} nodes of degree {self.degree}")
        if self.degree > self.nodes - 1:
            raise GadgetConstructionError(
                f"Degree {self.degree} impossible on {self.nodes} nodes")


@dataclass
class OverlayResult:
    """Edges and dummy nodes an overlay added, with the degree actually used."""

    edges: List[Tuple[int, int]] = field(default_factory=list)
    dummy_nodes: List[int] = field(default_factory=list)
    degree: int = 0
    certificate: Optional[ExpansionCertificate] = None
    notes: List[str] = field(default_factory=list)


def derive_seed(seed: int, attempt: int) -> int:
    return seed * 1_000_003 + attempt


def _complete_edges(nodes: int) -> List[Tuple[int, int]]:
    return list(combinations(range(nodes), 2))


def _matching_layer(rng: random.Random, nodes: int,
                    taken: Set[Tuple[int, int]]) -> Optional[List[Tuple[int, int]]]:
    order = list(range(nodes))
    for _ in range(_LAYER_TRIES):
        rng.shuffle(order)
        layer = [tuple(sorted(order[k:k + 2])) for k in range(0, nodes, 2)]
        if not any(edge in taken for edge in layer):
            return layer
    return None


def _cycle_layer(rng: random.Random, nodes: int,
                 taken: Set[Tuple[int, int]]) -> Optional[List[Tuple[int, int]]]:
    order = list(range(nodes))
    for _ in range(_LAYER_TRIES):
        rng.shuffle(order)
        layer = [tuple(sorted((order[k], order[(k + 1) % nodes]))) for k in range(nodes)]
        if len(set(layer)) == nodes and not any(edge in taken for edge in layer):
            return layer
    return None


def _candidate_edges(rng: random.Random, nodes: int, degree: int) -> Optional[List[Tuple[int, int]]]:
    taken: Set[Tuple[int, int]] = set()
    if nodes % 2 == 0:
        layers = [_matching_layer] * degree
    else:
        layers = [_cycle_layer] * (degree // 2)
    for draw in layers:
        layer = draw(rng, nodes, taken)
        if layer is None:
            return None
        taken.update(layer)
    return sorted(taken)


def _certify(graph: DynamicGraph, cap: int) -> ExpansionCertificate:
    if graph.node_count <= cap:
        return edge_expansion_exact(graph, cap)
    return expansion_lower_bound_spectral(graph)


def _graph_from_edges(nodes: int, edges: Sequence[Tuple[int, int]]) -> DynamicGraph:
    graph = DynamicGraph(nodes)
    graph.add_edges(edges)
    graph.clear_log()
    return graph


@lru_cache(maxsize=256)
def _cached_regular(nodes: int, degree: int, min_h0: float, seed: int,
                    max_attempts: int, cap: int):
    if degree == nodes - 1:
        graph = _graph_from_edges(nodes, _complete_edges(nodes))
        return tuple(graph.edges()), _certify(graph, cap)
    for attempt in range(max_attempts):
        rng = random.Random(derive_seed(seed, attempt))
        edges = _candidate_edges(rng, nodes, degree)
        if edges is None:
            continue
        graph = _graph_from_edges(nodes, edges)
        certificate = _certify(graph, cap)
        if certificate.connected and certificate.as_float() >= min_h0:
            logger.debug("Expander N=%d d=%d accepted on attempt %d (h >= %.4f)",
                         nodes, degree, attempt, certificate.as_float())
            return tuple(edges), certificate
    message = (f"No certified {degree}-regular expander on {nodes} nodes with h >= {min_h0} "
               f"after {max_attempts} attempts; relax min_h0")
    logger.error(message)
    raise ExpanderGenerationError(message)


def _regular_edges(nodes: int, degree: int, min_h0: float, seed: int,
                   max_attempts: int, cap: int) -> Tuple[DynamicGraph, ExpansionCertificate]:
    edges, certificate = _cached_regular(nodes, degree, min_h0, seed, max_attempts, cap)
    return _graph_from_edges(nodes, edges), replace(certificate, notes=list(certificate.notes))


def build_expander(spec: ExpanderSpec, max_attempts: int = MAX_ATTEMPTS,
                   cap: int = EXHAUSTIVE_CAP) -> Tuple[DynamicGraph, ExpansionCertificate]:
    """
    Generate a simple d-regular graph with a certified expansion bound.

    Returns:
        (graph on nodes 0..nodes-1, certificate); exact when nodes <= cap,
        spectral otherwise.
    """
    spec.validate()
    return _regular_edges(spec.nodes, spec.degree, spec.min_h0, spec.seed, max_attempts, cap)


def effective_degree(nodes: int, degree: int) -> int:
    """Degree an overlay on ``nodes`` targets can actually carry."""
    if nodes <= 1:
        return 0
    effective = min(degree, nodes - 1)
    if (nodes * effective) % 2:
        effective -= 1
    return effective


def overlay_expander(graph: DynamicGraph, target_nodes: Sequence[int], spec: ExpanderSpec,
                     dummy: bool = False, max_attempts: int = MAX_ATTEMPTS,
                     cap: int = EXHAUSTIVE_CAP) -> OverlayResult:
    """
    Map an expander onto ``target_nodes`` (k-th expander node -> k-th target).

    In dummy mode every expander edge (a, b) becomes a path a - x - b through a
    fresh node x, which keeps a bipartite graph bipartite. Edges already in
    the graph are skipped in direct mode.

    Returns:
        OverlayResult listing exactly the edges (and dummy nodes) added.
    """
    targets = list(target_nodes)
    if len(targets) != spec.nodes:
        raise GadgetConstructionError(
            f"Overlay spec expects {spec.nodes} targets, got {len(targets)}")
    result = OverlayResult()
    degree = effective_degree(len(targets), spec.degree)
    result.degree = degree
    if degree != spec.degree:
        result.notes.append(f"degree clamped from {spec.degree} to {degree} on {len(targets)} nodes")
        logger.debug("Overlay on %d nodes uses degree %d", len(targets), degree)
    if degree == 0:
        return result
    if degree >= 3 or degree == len(targets) - 1:
        expander, certificate = _regular_edges(len(targets), degree, spec.min_h0 if degree >= 3 else 0.0,
                                               spec.seed, max_attempts, cap)
    else:
        # two-regular fallback: a single cycle in label order
        cycle = [tuple(sorted((k, (k + 1) % len(targets)))) for k in range(len(targets))]
        expander = _graph_from_edges(len(targets), sorted(set(cycle)))
        certificate = _certify(expander, cap)
        result.notes.append("cycle fallback")
    result.certificate = certificate
    for a, b in expander.edges():
        ta, tb = targets[a], targets[b]
        if dummy:
            x = graph.add_nodes(1)[0]
            graph.insert_edge(ta, x)
            graph.insert_edge(x, tb)
            result.dummy_nodes.append(x)
            result.edges.extend([(ta, x), (x, tb)])
        elif not graph.has_edge(ta, tb):
            graph.insert_edge(ta, tb)
            result.edges.append((ta, tb))
    return result
