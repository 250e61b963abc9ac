"""
Reductions from OuMv to dynamic densest subgraph.

Vector gadgets U_i, V_j are 2d-regular, 2d-edge-connected circulants on k
nodes (density d); matrix gadgets M_ij are the same on K nodes with one
designated edge M_ij[0] - M_ij[1] removed (density d - 1/K). U_i[j] links to
M_ij[0] and V_j[i] to M_ij[1]. A zero bit removes edges from its gadget, so
U_i + M_ij + V_j reaches density d + 1/(K + 2k) exactly when uMv = 1.
"""

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..exceptions import (DimensionMismatchError, GadgetConstructionError, HostTooSmallError,
                           PowerLawParameterError)
from ..expanders.factory import ExpanderSpec, build_expander
from ..graph.degrees import PowerLawParams, degree_histogram, zeta
from ..graph.densest import density_of, has_denser_subgraph
from ..graph.dynamic_graph import DynamicGraph, normalize
from ..graph.expansion import ExpansionCertificate, expansion_lower_bound_spectral
from ..graph.min_cut import global_min_cut
from ..oumv.instance import BitMatrix, BitVector
from .base import DENSITY, ReductionDriver
from .layout import GadgetLayout
from .power_law_host import MAX_REGROWTHS, pad_with_stars

logger = logging.getLogger(__name__)

DENSE_VARIANTS = ("const", "expander", "powerlaw")
MAX_STRIDE_ATTEMPTS = 50

Edge = Tuple[int, int]
GadgetKey = Tuple


def gadget_sizes(n: int, d: int) -> Tuple[int, int]:
    """(k, K): vector and matrix gadget node counts."""
    return max(n, 2 * d + 1), max(n * n, 2 * d + 1)


@dataclass(frozen=True)
class DensityDecision:
    """Exact threshold d + 1/(K + 2k)."""

    threshold: Fraction

    @classmethod
    def for_sizes(cls, d: int, k: int, big: int) -> "DensityDecision":
        return cls(d + Fraction(1, big + 2 * k))

    def decide(self, density: Fraction) -> int:
        return int(density >= self.threshold)


def circulant_edges(size: int, strides: Sequence[int]) -> List[Edge]:
    edges = set()
    for s in strides:
        for x in range(size):
            edges.add(normalize(x, (x + s) % size))
    return sorted(edges)


def _pick_strides(size: int, d: int, rng: random.Random) -> List[int]:
    """Stride 1 plus d - 1 distinct strides in [1, (size-1)/2], coprime ones first."""
    limit = (size - 1) // 2
    if limit < d:
        raise GadgetConstructionError(f"A {2 * d}-regular circulant needs more than {size} nodes")
    coprime = [s for s in range(2, limit + 1) if math.gcd(s, size) == 1]
    other = [s for s in range(2, limit + 1) if math.gcd(s, size) != 1]
    rng.shuffle(coprime)
    rng.shuffle(other)
    return sorted([1] + (coprime + other)[:d - 1])


def _gadget_edges(size: int, d: int, seed: int) -> Tuple[List[Edge], List[int]]:
    rng = random.Random(seed)
    for _ in range(MAX_STRIDE_ATTEMPTS):
        strides = _pick_strides(size, d, rng)
        edges = circulant_edges(size, strides)
        fragment = DynamicGraph(size)
        fragment.add_edges(edges)
        if len(edges) == d * size and global_min_cut(fragment) >= 2 * d:
            return edges, strides
    message = f"No {2 * d}-edge-connected circulant on {size} nodes after {MAX_STRIDE_ATTEMPTS} draws"
    logger.error(message)
    raise GadgetConstructionError(message)


def build_vector_gadget(size: int, d: int = 3, seed: int = 0) -> Tuple[DynamicGraph, List[int]]:
    """
    A 2d-regular union of d Hamiltonian-ish circulant cycles on ``size`` nodes.

    Returns:
        (fragment, strides); the fragment's global min cut is at least 2d.
    """
    if d < 3:
        raise GadgetConstructionError(f"Gadget degree parameter d must be at least 3, got {d}")
    edges, strides = _gadget_edges(size, d, seed)
    fragment = DynamicGraph(size)
    fragment.add_edges(edges)
    fragment.clear_log()
    return fragment, strides


def build_matrix_gadget(size: int, d: int = 3, seed: int = 0) -> Tuple[DynamicGraph, List[int]]:
    """
    Vector gadget with the edge (0, 1) removed; nodes 0 and 1 are M[0], M[1].

    The circulant is relabelled so the removed edge's endpoints come first.
    """
    fragment, strides = build_vector_gadget(size, d, seed)
    far = strides[0]
    order = [0, far] + [x for x in range(size) if x not in (0, far)]
    position = {x: k for k, x in enumerate(order)}
    relabelled = DynamicGraph(size)
    relabelled.add_edges(normalize(position[a], position[b]) for a, b in fragment.edges())
    relabelled.delete_edge(0, 1)
    relabelled.clear_log()
    return relabelled, strides


class DenseLayout(GadgetLayout):
    """
    Gadget membership, removable-edge registry and threshold.

    Gadget keys are ("U", i), ("V", j) and ("M", i, j).
    """

    def __init__(self, variant: str, n: int, d: int):
        super().__init__("densest", variant, n)
        self.d = d
        self.k, self.big = gadget_sizes(n, d)
        self.decision = DensityDecision.for_sizes(d, self.k, self.big)
        self.gadgets: Dict[GadgetKey, List[int]] = {}
        self.removable: Dict[GadgetKey, List[Edge]] = {}
        self.removed: Dict[GadgetKey, List[Edge]] = {}
        self.cycles: Dict[GadgetKey, List[int]] = {}
        self.matrix: Optional[BitMatrix] = None
        self.certificate: Optional[ExpansionCertificate] = None
        self.reduction_size = 0

    @property
    def threshold(self) -> Fraction:
        return self.decision.threshold

    def gadget_edges(self, graph: DynamicGraph, key: GadgetKey) -> List[Edge]:
        members = set(self.gadgets[key])
        return sorted(e for e in graph.iter_edges() if e[0] in members and e[1] in members)


def _add_gadget(layout: DenseLayout, key: GadgetKey, fragment: DynamicGraph,
                edges: List[Edge]) -> List[int]:
    prefix, *index = key
    nodes = []
    for local in range(fragment.node_count):
        label_index = (*index, local) if prefix == "M" else (*index, local + 1)
        nodes.append(layout.add(prefix, *label_index, group=f"{prefix}{','.join(map(str, index))}"))
    layout.gadgets[key] = nodes
    edges.extend(normalize(nodes[a], nodes[b]) for a, b in fragment.edges())
    return nodes


def _removal_candidates(layout: DenseLayout, graph: DynamicGraph, key: GadgetKey,
                        count: int) -> List[Edge]:
    """The ``count`` lexicographically smallest pairwise disjoint gadget edges, avoiding M[0], M[1]."""
    avoid: Set[int] = set()
    if key[0] == "M":
        avoid = {layout.gadgets[key][0], layout.gadgets[key][1]}
    chosen: List[Edge] = []
    for a, b in layout.gadget_edges(graph, key):
        if a in avoid or b in avoid:
            continue
        chosen.append((a, b))
        avoid.update((a, b))
        if len(chosen) == count:
            return chosen
    raise GadgetConstructionError(f"Gadget {key} has fewer than {count} disjoint removable edges")


def _build_core(layout: DenseLayout, matrix: BitMatrix, seed: int) -> DynamicGraph:
    n, d, k, big = layout.n, layout.d, layout.k, layout.big
    vector, _ = build_vector_gadget(k, d, seed)
    square, _ = build_matrix_gadget(big, d, seed + 1)
    edges: List[Edge] = []
    for i in range(1, n + 1):
        _add_gadget(layout, ("U", i), vector, edges)
    for j in range(1, n + 1):
        _add_gadget(layout, ("V", j), vector, edges)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            _add_gadget(layout, ("M", i, j), square, edges)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            corner = layout.gadgets[("M", i, j)]
            edges.append(normalize(layout.gadgets[("U", i)][j - 1], corner[0]))
            edges.append(normalize(layout.gadgets[("V", j)][i - 1], corner[1]))
    graph = DynamicGraph(layout.size)
    graph.add_edges(edges)
    layout.reduction_size = layout.size
    layout.matrix = matrix
    return graph


def _check(n: int, matrix: BitMatrix):
    if n < 1:
        raise GadgetConstructionError(f"Dimension must be positive, got {n}")
    if matrix.n != n:
        raise DimensionMismatchError(f"Matrix has dimension {matrix.n}, construction expects {n}")


def expected_node_count(variant: str, n: int, d: int) -> int:
    k, big = gadget_sizes(n, d)
    core = n * n * big + 2 * n * k
    if variant == "const":
        return core
    if variant == "expander":
        return 2 * core
    if variant == "powerlaw":
        return core + 4 * (n * n + 2 * n)
    raise GadgetConstructionError(f"Unknown densest variant: {variant}")


def _register_vector_removals(layout: DenseLayout, graph: DynamicGraph):
    for side in ("U", "V"):
        for i in range(1, layout.n + 1):
            key = (side, i)
            layout.removable[key] = _removal_candidates(layout, graph, key, 2)
            layout.removed[key] = []


def build_dense_const(n: int, matrix: BitMatrix, d: int = 3,
                      seed: int = 0) -> Tuple[DynamicGraph, DenseLayout]:
    """
    Bounded-degree densest reduction.

    Zero matrix entries lose one more gadget edge at build time. Vector
    gadgets start intact; ``apply_pair_dense`` removes two edges per zero bit.
    """
    _check(n, matrix)
    layout = DenseLayout("const", n, d)
    graph = _build_core(layout, matrix, seed)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            key = ("M", i, j)
            layout.removable[key] = _removal_candidates(layout, graph, key, 1)
            if not matrix.get(i, j):
                graph.delete_edge(*layout.removable[key][0])
                layout.removed[key] = list(layout.removable[key])
    _register_vector_removals(layout, graph)
    graph.clear_log()
    layout.params.update({"d": d, "k": layout.k, "K": layout.big, "threshold": layout.threshold})
    return graph, layout


def _vector_bits(layout: DenseLayout, u: BitVector, v: BitVector) -> Dict[GadgetKey, int]:
    if u.n != layout.n or v.n != layout.n:
        raise DimensionMismatchError(f"Pair of dimension ({u.n}, {v.n}) for n={layout.n}")
    bits = {("U", i): u[i] for i in range(1, layout.n + 1)}
    bits.update({("V", j): v[j] for j in range(1, layout.n + 1)})
    return bits


def apply_pair_dense(graph: DynamicGraph, layout: DenseLayout, u: BitVector, v: BitVector) -> int:
    """Reinsert the removals no longer wanted, then remove for the new zero bits."""
    if layout.variant == "powerlaw":
        return _apply_pair_dense_powerlaw(graph, layout, u, v)
    bits = _vector_bits(layout, u, v)
    count = 0
    for key, bit in sorted(bits.items()):
        if bit and layout.removed[key]:
            for a, b in layout.removed[key]:
                graph.insert_edge(a, b)
                count += 1
            layout.removed[key] = []
    for key, bit in sorted(bits.items()):
        if not bit and not layout.removed[key]:
            for a, b in layout.removable[key]:
                graph.delete_edge(a, b)
                count += 1
            layout.removed[key] = list(layout.removable[key])
    return count


def decide_dense(graph: DynamicGraph, layout: DenseLayout) -> int:
    """
    1 iff some subgraph reaches the threshold.

    Densities with denominators at most N differ by at least 1/N^2, so a
    strict test against threshold - 1/(2N^2) is an exact >= test.
    """
    slack = Fraction(1, 2 * graph.node_count * graph.node_count)
    return int(has_denser_subgraph(graph, layout.threshold - slack) is not None)


def build_dense_expander(n: int, matrix: BitMatrix, d: int = 6, inner_degree: Optional[int] = None,
                         min_h0: float = 0.1,
                         seed: int = 0) -> Tuple[DynamicGraph, DenseLayout, ExpansionCertificate]:
    """
    Const reduction G0 plus a d'-regular expander G1 on as many nodes,
    joined by a perfect matching G0[x] - G1[x].

    Raises:
        GadgetConstructionError: d' > d - 2.
    """
    inner = d - 2 if inner_degree is None else inner_degree
    if inner > d - 2:
        raise GadgetConstructionError(f"Expander degree {inner} must be at most d - 2 = {d - 2}")
    graph, layout = build_dense_const(n, matrix, d, seed)
    layout.variant = "expander"
    core = layout.reduction_size
    expander, _ = build_expander(ExpanderSpec(core, inner, min_h0, seed))
    mirror = graph.add_nodes(core)
    for x in mirror:
        layout.register(x, "X", x - core, group="expander")
    graph.add_edges(normalize(core + a, core + b) for a, b in expander.edges())
    graph.add_edges((x, core + x) for x in range(core))
    graph.clear_log()
    layout.reduction_size = graph.node_count
    certificate = expansion_lower_bound_spectral(graph)
    layout.certificate = certificate
    layout.params.update({"inner_degree": inner})
    logger.info("Expander densest reduction n=%d: N=%d, spectral bound %.4f",
                n, graph.node_count, certificate.as_float())
    return graph, layout, certificate


def check_power_law_beta(beta: float):
    """Padding works only while degree-1 nodes carry over half the degree sum."""
    if beta <= 2 or zeta(beta - 1) >= 2:
        raise PowerLawParameterError(
            f"Densest power-law padding needs zeta(beta - 1) < 2 (beta > 2.74), got beta={beta}")


def _attach_cycle(graph: DynamicGraph, cycle: List[int], removed: List[Edge]) -> int:
    (a, b), (c, e) = removed
    graph.delete_edge(a, b)
    graph.delete_edge(c, e)
    graph.delete_edge(cycle[0], cycle[1])
    graph.delete_edge(cycle[2], cycle[3])
    for gadget_node, cycle_node in zip((a, b, c, e), cycle):
        graph.insert_edge(gadget_node, cycle_node)
    return 8


def _detach_cycle(graph: DynamicGraph, cycle: List[int], removed: List[Edge]) -> int:
    (a, b), (c, e) = removed
    for gadget_node, cycle_node in zip((a, b, c, e), cycle):
        graph.delete_edge(gadget_node, cycle_node)
    graph.insert_edge(cycle[0], cycle[1])
    graph.insert_edge(cycle[2], cycle[3])
    graph.insert_edge(a, b)
    graph.insert_edge(c, e)
    return 8


def _add_cycles(layout: DenseLayout, graph: DynamicGraph, keys: Sequence[GadgetKey]):
    for key in keys:
        prefix, *index = key
        start = graph.add_nodes(4)
        cycle = []
        for x, node in zip("abcd", start):
            cycle.append(layout.register(node, f"C{prefix}", *index, x, group="cycle"))
        graph.add_edges(normalize(cycle[t], cycle[(t + 1) % 4]) for t in range(4))
        layout.cycles[key] = cycle


def build_dense_powerlaw(n: int, beta: float, seed: Optional[int], matrix: BitMatrix,
                         max_regrowths: int = MAX_REGROWTHS) -> Tuple[DynamicGraph, DenseLayout]:
    """
    Degree-stable reduction padded to a power law.

    Each gadget owns a 4-cycle; a zero bit swaps two disjoint gadget edges
    and two cycle edges for four gadget-to-cycle edges, so every degree is
    independent of the input. Stars and a matching complete the law.

    Raises:
        PowerLawParameterError: zeta(beta - 1) >= 2.
    """
    check_power_law_beta(beta)
    _check(n, matrix)
    d = 3
    layout = DenseLayout("powerlaw", n, d)
    core = _build_core(layout, matrix, seed or 0)
    keys = ([("U", i) for i in range(1, n + 1)] + [("V", j) for j in range(1, n + 1)]
            + [("M", i, j) for i in range(1, n + 1) for j in range(1, n + 1)])
    _add_cycles(layout, core, keys)
    for key in keys:
        layout.removable[key] = _removal_candidates(layout, core, key, 2)
        layout.removed[key] = []
    for i, j in [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if not matrix.get(i, j)]:
        key = ("M", i, j)
        _attach_cycle(core, layout.cycles[key], layout.removable[key])
        layout.removed[key] = list(layout.removable[key])
    core.clear_log()
    layout.reduction_size = core.node_count
    histogram = degree_histogram(core)
    alpha = math.log(max(count * degree ** beta for degree, count in histogram.items())) + 1e-6
    for regrowth in range(max_regrowths + 1):
        params = PowerLawParams(alpha, beta)
        try:
            graph, notes = pad_with_stars(core, params, histogram)
            break
        except HostTooSmallError as error:
            if regrowth == max_regrowths:
                raise
            logger.debug("Padding failed at alpha=%.3f (%s); regrowing", alpha, error)
            alpha += math.log(2)
    for x in range(core.node_count, graph.node_count):
        layout.register(x, "P", x - core.node_count + 1, group="pad")
    layout.notes.extend(notes)
    layout.params.update({"d": d, "k": layout.k, "K": layout.big, "beta": beta,
                          "alpha": alpha, "threshold": layout.threshold})
    logger.info("Power-law densest reduction n=%d: core %d nodes, padded to %d",
                n, core.node_count, graph.node_count)
    return graph, layout


def _apply_pair_dense_powerlaw(graph: DynamicGraph, layout: DenseLayout, u: BitVector,
                               v: BitVector) -> int:
    count = 0
    for key, bit in sorted(_vector_bits(layout, u, v).items()):
        if bit and layout.removed[key]:
            count += _detach_cycle(graph, layout.cycles[key], layout.removed[key])
            layout.removed[key] = []
        elif not bit and not layout.removed[key]:
            count += _attach_cycle(graph, layout.cycles[key], layout.removable[key])
            layout.removed[key] = list(layout.removable[key])
    return count


def check_gadget_densities(graph: DynamicGraph, layout: DenseLayout) -> Dict[str, Fraction]:
    """Exact density of every gadget on its own, keyed by group name."""
    return {layout.group(nodes[0]): density_of(graph, nodes)
            for _, nodes in sorted(layout.gadgets.items())}


@dataclass
class WitnessAudit:
    """Structure of a dense witness set."""

    full_matrix_gadgets: List[Tuple[int, int]] = field(default_factory=list)
    padding_nodes: int = 0

    @property
    def ok(self) -> bool:
        return bool(self.full_matrix_gadgets) and self.padding_nodes == 0

    def to_dict(self) -> dict:
        return {"full_matrix_gadgets": [list(p) for p in self.full_matrix_gadgets],
                "padding_nodes": self.padding_nodes, "ok": self.ok}


def witness_audit(nodes: Sequence[int], layout: DenseLayout) -> WitnessAudit:
    """
    Which set-bit matrix gadgets the witness holds in full, together with
    both endpoints of their outgoing edges, and how many padding or
    expander nodes it includes.
    """
    members = set(nodes)
    audit = WitnessAudit()
    for i in range(1, layout.n + 1):
        for j in range(1, layout.n + 1):
            if layout.matrix is None or not layout.matrix.get(i, j):
                continue
            gadget = layout.gadgets[("M", i, j)]
            ends = (layout.gadgets[("U", i)][j - 1], layout.gadgets[("V", j)][i - 1])
            if members.issuperset(gadget) and members.issuperset(ends):
                audit.full_matrix_gadgets.append((i, j))
    audit.padding_nodes = sum(1 for x in members if layout.group(x) in ("pad", "expander"))
    return audit


class DensestDriver(ReductionDriver):
    """All densest reductions; answers are exact Fractions."""

    family = "densest"
    query_kind = DENSITY

    def __init__(self, graph: DynamicGraph, layout: DenseLayout):
        super().__init__(graph, layout)
        self.variant = layout.variant

    @property
    def expected_nodes(self) -> Optional[int]:
        if self.variant == "powerlaw":
            return None
        return expected_node_count(self.variant, self.n, self.layout.d)

    def apply_pair(self, u: BitVector, v: BitVector) -> int:
        self.pairs_applied += 1
        return apply_pair_dense(self.graph, self.layout, u, v)

    def decide(self, answer) -> int:
        return self.layout.decision.decide(Fraction(answer))

    def decide_fast(self) -> int:
        return decide_dense(self.graph, self.layout)

    def summary(self) -> dict:
        summary = super().summary()
        threshold = self.layout.threshold
        summary["threshold"] = f"{threshold.numerator}/{threshold.denominator}"
        if self.variant == "powerlaw":
            summary["expected_N"] = expected_node_count("powerlaw", self.n, self.layout.d)
            summary["core_N"] = self.layout.reduction_size
        if self.layout.certificate is not None:
            summary["certificate"] = self.layout.certificate.to_dict()
        return summary


def make_dense_driver(variant: str, matrix: BitMatrix, options: Dict) -> DensestDriver:
    """Build the driver for ``variant`` from harness options."""
    n = matrix.n
    seed = int(options.get("seed") or 0)
    if variant == "const":
        return DensestDriver(*build_dense_const(n, matrix, int(options.get("d", 3)), seed))
    if variant == "expander":
        graph, layout, _ = build_dense_expander(n, matrix, int(options.get("expander_d", 6)),
                                                min_h0=float(options.get("min_h0", 0.1)), seed=seed)
        return DensestDriver(graph, layout)
    if variant == "powerlaw":
        return DensestDriver(*build_dense_powerlaw(n, float(options.get("beta", 3.0)), seed, matrix,
                                                    int(options.get("max_regrowths", 8))))
    raise GadgetConstructionError(f"Unknown densest variant: {variant}")
