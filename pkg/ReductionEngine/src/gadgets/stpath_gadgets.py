"""
Reductions from OuMv to dynamic (s,t)-distance.

A binary tree rooted at s has leaves ``L2[i]``; a forest of n trees with
roots ``L3[i]`` has leaves ``L4[i,j]``. The right side mirrors this with t.
Every edge joins consecutive layers, so dist(s,t) is at least the layer of
t, with equality exactly when some u_i = M_ij = v_j = 1.

Trees use heap numbering: internal node k has children 2k and 2k + 1, and
leaf j of a depth-D tree is heap node 2^D + j - 1.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..exceptions import DimensionMismatchError, GadgetConstructionError
from ..expanders.factory import ExpanderSpec, overlay_expander
from ..graph.degrees import degree_histogram
from ..graph.dynamic_graph import DynamicGraph, normalize
from ..graph.expansion import ExpansionCertificate, expansion_lower_bound_spectral
from ..graph.traversal import INFINITY, bfs_distance
from ..oumv.generators import InstanceGenerator
from ..oumv.instance import BitMatrix, BitVector
from .base import DISTANCE, ReductionDriver, swap_edges
from .layout import GadgetLayout
from .power_law_host import PowerLawHost, build_power_law_host, embed

logger = logging.getLogger(__name__)

ST_VARIANTS = ("const", "approx", "varying", "expander", "powerlaw")

# tree sets of the reinforced forests: upper, middle, lower
_TRIPLE = ("U", "M", "L")


def log2_exact(n: int) -> int:
    """log2(n) for a power of two n >= 2."""
    if n < 2 or n & (n - 1):
        raise GadgetConstructionError(f"Distance reductions need n a power of two >= 2, got {n}")
    return n.bit_length() - 1


@dataclass(frozen=True)
class ApproxParams:
    """Gap parameters: every cross edge becomes a path of alpha * log n inner nodes."""

    delta: float

    def __post_init__(self):
        if not 0 < self.delta < 3:
            raise GadgetConstructionError(f"delta must lie in (0, 3), got {self.delta}")

    @property
    def alpha(self) -> int:
        return max(1, math.ceil(12 / self.delta - 4 - 1e-9))


class ForestLayout(GadgetLayout):
    """
    Labels, layer function and decision threshold of a distance reduction.

    Args:
        variant: const, approx, varying, expander or powerlaw.
        n: dimension, a power of two.
        tree_depth: depth of the L3/L4 forest (log n unless traded off).
    """

    def __init__(self, variant: str, n: int, tree_depth: Optional[int] = None):
        super().__init__("st", variant, n)
        self.depth = log2_exact(n)
        self.tree_depth = self.depth if tree_depth is None else tree_depth
        self.roots: Dict[Tuple[str, int], int] = {}
        self.input_edges: Set[Tuple[int, int]] = set()
        self.slots: Dict[Tuple[str, int], Tuple[int, int]] = {}
        self.overlay_edges: List[Tuple[int, int]] = []
        self.certificate: Optional[ExpansionCertificate] = None
        self.threshold = 4 * self.depth + 3
        self.reduction_size = 0

    @property
    def source(self) -> int:
        return self.id("L1", 1)

    @property
    def sink(self) -> int:
        return self.id("R1", 1)

    @property
    def width(self) -> int:
        return 2 ** self.tree_depth

    def root(self, forest: str, i: int) -> int:
        return self.roots[(forest, i)]

    def leaf(self, forest: str, i: int, j: int) -> int:
        """Leaf j of tree i in ``forest`` (``L`` or ``LM``, ``R`` or ``RL``, ...)."""
        return self.id(f"{forest[0]}4{forest[1:]}", i, j)

    def consecutive_layers(self, graph: DynamicGraph) -> bool:
        """True iff every edge joins layers differing by exactly one."""
        return all(abs(self.layers[a] - self.layers[b]) == 1 for a, b in graph.iter_edges())


def add_tree(layout: GadgetLayout, internal: str, leaf: str, key: Tuple, depth: int,
              layer_of, edges: List[Tuple[int, int]]) -> int:
    """Allocate one heap-numbered tree; returns its root id."""
    ids = {}
    for k in range(1, 2 ** (depth + 1)):
        level = k.bit_length() - 1
        if k >= 2 ** depth:
            ids[k] = layout.add(leaf, *key, k - 2 ** depth + 1, layer=layer_of(level))
        else:
            ids[k] = layout.add(internal, *key, k, layer=layer_of(level))
        if k > 1:
            edges.append((ids[k // 2], ids[k]))
    return ids[1]


def _build_forests(layout: ForestLayout, tree_sets: Sequence[str], gap: int = 0,
                   reserve=None) -> DynamicGraph:
    """
    Both sides' trees with their layering; ``gap`` extra layers sit between
    the two leaf rows. ``reserve`` is called between the sides to allocate
    nodes that must be numbered before the right side.
    """
    h, depth, n = layout.depth, layout.tree_depth, layout.n
    edges: List[Tuple[int, int]] = []
    add_tree(layout, "L1", "L2", (), h, lambda level: level, edges)
    for suffix in tree_sets:
        for i in range(1, n + 1):
            layout.roots[(f"L{suffix}", i)] = add_tree(
                layout, f"L3{suffix}", f"L4{suffix}", (i,), depth,
                lambda level: h + 1 + level, edges)
    if reserve is not None:
        reserve()
    right_leaves = h + depth + 2 + gap
    for suffix in tree_sets:
        for i in range(1, n + 1):
            layout.roots[(f"R{suffix}", i)] = add_tree(
                layout, f"R3{suffix}", f"R4{suffix}", (i,), depth,
                lambda level: right_leaves + depth - level, edges)
    top = right_leaves + depth + 1
    add_tree(layout, "R1", "R2", (), h, lambda level: top + h - level, edges)
    layout.threshold = top + h
    graph = DynamicGraph(layout.size)
    graph.add_edges(edges)
    layout.reduction_size = layout.size
    return graph


def _check_matrix(n: int, matrix: BitMatrix):
    if matrix.n != n:
        raise DimensionMismatchError(f"Matrix has dimension {matrix.n}, construction expects {n}")


def _input_edges(layout: ForestLayout, u: BitVector, v: BitVector) -> Set[Tuple[int, int]]:
    edges = set()
    for side, vector in (("L", u), ("R", v)):
        for i in vector.ones_indices():
            edges.add(normalize(layout.id(f"{side}2", i), layout.root(side, i)))
    return edges


def expected_node_count(variant: str, n: int, alpha: int = 0, width: Optional[int] = None) -> int:
    h = log2_exact(n)
    if variant == "const":
        return 4 * n * n + 2 * n - 2
    if variant == "approx":
        return 4 * n * n + 2 * n - 2 + n * n * alpha * h
    if variant == "varying":
        return 2 * (2 * n - 1) + 2 * n * (2 * width - 1)
    if variant in ("expander", "powerlaw"):
        return 12 * n * n - 2 * n - 2
    raise GadgetConstructionError(f"Unknown distance variant: {variant}")


def build_st_const(n: int, matrix: BitMatrix) -> Tuple[DynamicGraph, ForestLayout]:
    """
    Bounded-degree distance reduction.

    Returns:
        (graph, layout) with N = 4n^2 + 2n - 2, threshold 4 log n + 3.
    """
    layout = ForestLayout("const", n)
    _check_matrix(n, matrix)
    graph = _build_forests(layout, ("",))
    graph.add_edges(normalize(layout.leaf("L", i, j), layout.leaf("R", j, i))
                    for i, j in matrix.ones_positions())
    graph.clear_log()
    return graph, layout


def apply_pair_st(graph: DynamicGraph, layout: ForestLayout, u: BitVector, v: BitVector) -> int:
    """Replace the L2 -> L3 root and R2 -> R3 root edges by the new pair's."""
    if layout.variant not in ("const", "approx", "varying"):
        raise GadgetConstructionError(f"apply_pair_st does not drive {layout.variant}")
    if u.n != layout.n or v.n != layout.n:
        raise DimensionMismatchError(f"Pair of dimension ({u.n}, {v.n}) for n={layout.n}")
    return swap_edges(graph, layout.input_edges, _input_edges(layout, u, v))


def decide_st(graph: DynamicGraph, layout: ForestLayout) -> int:
    """1 iff dist(s, t) reaches the layering lower bound."""
    return int(bfs_distance(graph, layout.source, layout.sink) == layout.threshold)


def _approx_graph(n: int, params: ApproxParams, matrix: BitMatrix) -> Tuple[DynamicGraph, ForestLayout]:
    layout = ForestLayout("approx", n)
    _check_matrix(n, matrix)
    h = layout.depth
    inner = params.alpha * h
    paths: Dict[Tuple[int, int], List[int]] = {}

    def allocate_paths():
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                paths[(i, j)] = [layout.add("P", i, j, k, layer=2 * h + 1 + k)
                                 for k in range(1, inner + 1)]

    graph = _build_forests(layout, ("",), gap=inner, reserve=allocate_paths)
    for i, j in matrix.ones_positions():
        chain = [layout.leaf("L", i, j)] + paths[(i, j)] + [layout.leaf("R", j, i)]
        graph.add_edges(normalize(a, b) for a, b in zip(chain, chain[1:]))
    graph.clear_log()
    layout.params.update({"delta": params.delta, "alpha": params.alpha})
    return graph, layout


def _sample_distance(n: int, params: ApproxParams, matrix: BitMatrix,
                    pairs: Sequence[Tuple[BitVector, BitVector]]) -> float:
    graph, layout = _approx_graph(n, params, matrix)
    best = INFINITY
    for u, v in pairs:
        apply_pair_st(graph, layout, u, v)
        best = min(best, bfs_distance(graph, layout.source, layout.sink))
    return best


def build_st_approx(n: int, delta: float, matrix: BitMatrix, samples: int = 4,
                    seed: int = 0) -> Tuple[DynamicGraph, ForestLayout, float, float]:
    """
    Gap reduction: matrix ones become paths of alpha * log n inner nodes.

    The one-side distance T1 comes from the sample M = ones, u = v = e_1. The
    zero-side distance T0 is the minimum over the tight sample (M_11 = 0, the
    rest ones, u = v = e_1) and ``samples`` seeded planted-zero instances.

    Returns:
        (graph, layout, T1, T0); T0 / T1 >= 3 - delta is checked and logged.
    """
    params = ApproxParams(delta)
    e1 = BitVector.unit(n, 1)
    ones = BitMatrix.ones(n)
    t1 = _sample_distance(n, params, ones, [(e1, e1)])
    t0 = _sample_distance(n, params, ones.with_bit(1, 1, 0), [(e1, e1)])
    generator = InstanceGenerator(seed)
    for _ in range(samples):
        instance = generator.generate(n, "planted_zero")
        t0 = min(t0, _sample_distance(n, params, instance.matrix, instance.pairs))
    graph, layout = _approx_graph(n, params, matrix)
    nominal = (4 + params.alpha) * layout.depth + 2
    if t1 != nominal:
        logger.debug("Measured one-side distance %s, additive form gives %s", t1, nominal)
    layout.threshold = t1
    layout.params.update({"T1": t1, "T0": t0})
    if t0 < (3 - delta) * t1:
        layout.notes.append(f"gap {t0}/{t1} below 3 - delta")
        logger.warning("Distance gap %s/%s is below %.3f", t0, t1, 3 - delta)
    return graph, layout, t1, t0


def decide_st_approx(answer: float, layout: ForestLayout, approximate: bool = False) -> int:
    """
    Decode an (approximate) distance.

    Exact answers are compared to the midpoint of [T1, T0]; with
    ``approximate`` any answer in [dist, (3 - delta) dist) is accepted and
    the bit is 1 iff it stays below T0.
    """
    t1, t0 = layout.params["T1"], layout.params["T0"]
    if approximate:
        return int(answer < t0)
    return int(answer < (t1 + t0) / 2)


def varying_depth(n: int, t: float) -> int:
    if not 0 <= t <= 1:
        raise GadgetConstructionError(f"Degree trade-off t must lie in [0, 1], got {t}")
    return max(0, math.ceil((1 - t) / (1 + t) * log2_exact(n) - 1e-9))


def _compress(index: int, width: int, n: int) -> int:
    return -(-index * width // n)


def build_st_varying(n: int, t: float, matrix: BitMatrix) -> Tuple[DynamicGraph, ForestLayout]:
    """
    Forest of depth D = ceil((1-t)/(1+t) log n); matrix entry (i, j) becomes
    (L4[i, j'], R4[j, i']) with k' = ceil(k * 2^D / n).
    """
    depth = varying_depth(n, t)
    layout = ForestLayout("varying", n, tree_depth=depth)
    _check_matrix(n, matrix)
    width = layout.width
    exact = (1 - t) / (1 + t) * layout.depth
    if abs(exact - depth) > 1e-9:
        layout.notes.append(f"forest depth rounded up to {depth}")
    graph = _build_forests(layout, ("",))
    cross = {normalize(layout.leaf("L", i, _compress(j, width, n)),
                       layout.leaf("R", j, _compress(i, width, n)))
             for i, j in matrix.ones_positions()}
    graph.add_edges(sorted(cross))
    graph.clear_log()
    layout.params.update({"t": t, "tree_depth": depth, "max_degree": max(graph.degrees())})
    measured = _measure_varying(n, t)
    if measured != layout.threshold:
        logger.warning("Measured distance %s differs from layer bound %s", measured, layout.threshold)
    layout.threshold = measured
    return graph, layout


def _measure_varying(n: int, t: float) -> float:
    layout = ForestLayout("varying", n, tree_depth=varying_depth(n, t))
    graph = _build_forests(layout, ("",))
    graph.insert_edge(layout.leaf("L", 1, 1), layout.leaf("R", 1, 1))
    e1 = BitVector.unit(n, 1)
    apply_pair_st(graph, layout, e1, e1)
    return bfs_distance(graph, layout.source, layout.sink)


def _triple_cross_edges(layout: ForestLayout, matrix: BitMatrix, lower_too: bool) -> List[Tuple[int, int]]:
    edges = []
    for i in range(1, layout.n + 1):
        for j in range(1, layout.n + 1):
            if matrix.get(i, j):
                edges.append((layout.leaf("LM", i, j), layout.leaf("RM", j, i)))
                if lower_too:
                    edges.append((layout.leaf("LL", i, j), layout.leaf("RL", j, i)))
            else:
                edges.append((layout.leaf("LM", i, j), layout.leaf("RL", j, i)))
                edges.append((layout.leaf("LL", i, j), layout.leaf("RM", j, i)))
    return [normalize(a, b) for a, b in edges]


def _triple_input_edges(layout: ForestLayout, u: BitVector, v: BitVector) -> Dict[Tuple[str, int], Tuple[int, int]]:
    edges = {}
    for side, vector in (("L", u), ("R", v)):
        for i in range(1, layout.n + 1):
            forest = f"{side}M" if vector[i] else f"{side}U"
            edges[(side, i)] = normalize(layout.id(f"{side}2", i), layout.root(forest, i))
    return edges


def _check_pair(layout: ForestLayout, u: BitVector, v: BitVector):
    if u.n != layout.n or v.n != layout.n:
        raise DimensionMismatchError(f"Pair of dimension ({u.n}, {v.n}) for n={layout.n}")


def build_st_expander(n: int, matrix: BitMatrix, degree: int = 4, min_h0: float = 0.1,
                      seed: int = 0) -> Tuple[DynamicGraph, ForestLayout, ExpansionCertificate]:
    """
    Reinforced forests: 3n trees per side (upper, middle, lower) and
    expander overlays with one dummy node per expander edge on L2, L4, R2
    and R4. Left dummies sit one layer before their neighbours, right
    dummies one layer after, so the graph stays bipartite.
    """
    layout = ForestLayout("expander", n)
    _check_matrix(n, matrix)
    graph = _build_forests(layout, _TRIPLE)
    graph.add_edges(_triple_cross_edges(layout, matrix, lower_too=False))
    groups = {
        "L2": layout.nodes_in("L2"),
        "L4": [v for suffix in _TRIPLE for v in layout.nodes_in(f"L4{suffix}")],
        "R2": layout.nodes_in("R2"),
        "R4": [v for suffix in _TRIPLE for v in layout.nodes_in(f"R4{suffix}")],
    }
    for offset, (group, targets) in enumerate(sorted(groups.items())):
        overlay = overlay_expander(graph, targets, ExpanderSpec(len(targets), degree, min_h0, seed + offset),
                                   dummy=True)
        shift = -1 if group.startswith("L") else 1
        neighbour = {x: a for a, x in overlay.edges[0::2]}
        for k, x in enumerate(overlay.dummy_nodes):
            layout.register(x, f"D{group}", k, layer=layout.layers[neighbour[x]] + shift,
                            group=f"{group}_dummy")
        layout.overlay_edges.extend(overlay.edges)
        layout.notes.extend(f"{group}: {note}" for note in overlay.notes)
    zero = BitVector.zeros(n)
    swap_edges(graph, layout.input_edges, set(_triple_input_edges(layout, zero, zero).values()))
    graph.clear_log()
    certificate = expansion_lower_bound_spectral(graph)
    layout.certificate = certificate
    layout.params.update({"expander_degree": degree, "min_h0": min_h0})
    logger.info("Expander distance reduction n=%d: N=%d, spectral bound %.4f",
                n, graph.node_count, certificate.as_float())
    return graph, layout, certificate


def apply_pair_st_expander(graph: DynamicGraph, layout: ForestLayout, u: BitVector,
                           v: BitVector) -> int:
    """Insert every new root edge first, then delete the stale ones."""
    _check_pair(layout, u, v)
    desired = set(_triple_input_edges(layout, u, v).values())
    return swap_edges(graph, layout.input_edges, desired, insert_first=True)


def expected_left_table(n: int) -> Dict[str, Dict[int, int]]:
    """
    Per-group left degree counts of the power-law distance reduction, n >= 2.

    Every L2 leaf carries one root edge, so exactly n of the 3n forest roots
    reach degree 3; of the three leaf copies two carry a cross edge.
    """
    return {
        "L1": {2: 1, 3: n - 2} if n > 2 else {2: 1},
        "L2": {2: n},
        "L3": {2: 2 * n, 3: 3 * n * n - 5 * n},
        "L4": {1: n * n, 2: 2 * n * n},
    }


def left_degree_table(graph: DynamicGraph, layout: ForestLayout) -> Dict[str, Dict[int, int]]:
    table = {}
    for group, prefixes in (("L1", ["L1"]), ("L2", ["L2"]),
                            ("L3", [f"L3{x}" for x in _TRIPLE]), ("L4", [f"L4{x}" for x in _TRIPLE])):
        nodes = [v for prefix in prefixes for v in layout.nodes_in(prefix)]
        table[group] = degree_histogram(graph, nodes)
    return table


def build_st_powerlaw(n: int, beta: float, seed: Optional[int],
                      matrix: BitMatrix) -> Tuple[DynamicGraph, ForestLayout, PowerLawHost]:
    """
    Triple forests with complementary cross edges, embedded in a power-law
    host. Every degree is independent of (u, M, v), so no compensation is
    needed per pair.
    """
    layout = ForestLayout("powerlaw", n)
    _check_matrix(n, matrix)
    reduction = _build_forests(layout, _TRIPLE)
    reduction.add_edges(_triple_cross_edges(layout, matrix, lower_too=True))
    zero = BitVector.zeros(n)
    reduction.add_edges(sorted(_triple_input_edges(layout, zero, zero).values()))
    measured = left_degree_table(reduction, layout)
    if measured != expected_left_table(n):
        logger.warning("Left degree table %s differs from %s", measured, expected_left_table(n))
    required = {d: c for d, c in degree_histogram(reduction).items() if c}
    host = build_power_law_host(required, beta, seed)
    embedded = embed(host, reduction)
    layout.slots = _triple_input_edges(layout, zero, zero)
    layout.input_edges.update(layout.slots.values())
    for k, node in enumerate(embedded.host_nodes):
        layout.register(node, "H", k, group="host")
    layout.params.update({"beta": beta, "alpha": host.params.alpha, "seed": seed})
    layout.notes.extend(host.notes)
    logger.info("Power-law distance reduction n=%d: N=%d (reduction %d)",
                n, embedded.graph.node_count, layout.reduction_size)
    return embedded.graph, layout, host


def apply_pair_st_powerlaw(graph: DynamicGraph, layout: ForestLayout, u: BitVector,
                           v: BitVector) -> int:
    """Per node, delete the stale root edge and insert the new one."""
    _check_pair(layout, u, v)
    count = 0
    desired = _triple_input_edges(layout, u, v)
    for key in sorted(desired):
        old, new = layout.slots.get(key), desired[key]
        if old == new:
            continue
        if old is not None:
            graph.delete_edge(*old)
            count += 1
        graph.insert_edge(*new)
        count += 1
    layout.slots = desired
    layout.input_edges.clear()
    layout.input_edges.update(desired.values())
    return count


class DistanceDriver(ReductionDriver):
    """All distance reductions; the variant picks the update routine."""

    family = "st"
    query_kind = DISTANCE

    def __init__(self, graph: DynamicGraph, layout: ForestLayout, approximate: bool = False):
        super().__init__(graph, layout)
        self.variant = layout.variant
        self.approximate = approximate

    @property
    def expected_nodes(self) -> int:
        """Reduction nodes only: expander dummies and host nodes are not counted."""
        alpha = self.layout.params.get("alpha", 0) if self.variant == "approx" else 0
        return expected_node_count(self.variant, self.n, int(alpha),
                                   self.layout.width)

    def query_args(self) -> Dict[str, int]:
        return {"s": self.layout.source, "t": self.layout.sink}

    def apply_pair(self, u: BitVector, v: BitVector) -> int:
        self.pairs_applied += 1
        if self.variant == "expander":
            return apply_pair_st_expander(self.graph, self.layout, u, v)
        if self.variant == "powerlaw":
            return apply_pair_st_powerlaw(self.graph, self.layout, u, v)
        return apply_pair_st(self.graph, self.layout, u, v)

    def decide(self, answer) -> int:
        if self.variant == "approx":
            return decide_st_approx(answer, self.layout, self.approximate)
        return int(answer == self.layout.threshold)

    def summary(self) -> dict:
        summary = super().summary()
        summary["threshold"] = self.layout.threshold
        if self.variant == "powerlaw":
            summary["expected_N"] = self.layout.reduction_size
        if self.layout.certificate is not None:
            summary["certificate"] = self.layout.certificate.to_dict()
        return summary


def make_st_driver(variant: str, matrix: BitMatrix, options: Dict) -> DistanceDriver:
    """Build the driver for ``variant`` from harness options."""
    n = matrix.n
    if variant == "const":
        return DistanceDriver(*build_st_const(n, matrix))
    if variant == "approx":
        graph, layout, _, _ = build_st_approx(n, float(options.get("delta", 1.0)), matrix,
                                              seed=int(options.get("seed") or 0))
        return DistanceDriver(graph, layout, approximate=bool(options.get("approximate", False)))
    if variant == "varying":
        return DistanceDriver(*build_st_varying(n, float(options.get("t", 0.5)), matrix))
    if variant == "expander":
        graph, layout, _ = build_st_expander(
            n, matrix, int(options.get("expander_degree", 4)), float(options.get("min_h0", 0.1)),
            int(options.get("seed") or 0))
        return DistanceDriver(graph, layout)
    if variant == "powerlaw":
        graph, layout, _ = build_st_powerlaw(n, float(options.get("beta", 2.5)), options.get("seed"), matrix)
        return DistanceDriver(graph, layout)
    raise GadgetConstructionError(f"Unknown distance variant: {variant}")
