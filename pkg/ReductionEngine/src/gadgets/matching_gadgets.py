"""
Reductions from OuMv to dynamic maximum matching.

Each side of the graph is an odd path ``L2[0] - L1[1] - L2[1] - ... - L2[n]``
plus one even path ``L3[i,0] - L4[i,0] - ... - L4[i,w]`` per row. The base
matching pairs ``L1[i]`` with ``L2[i]`` and ``L3[i,j]`` with ``L4[i,j]``, so
only ``L2[0]`` and ``R2[0]`` are free. Matrix ones become cross edges
between the two sides and vector ones attach ``L2[i]`` to ``L3[i,0]``. An
augmenting path from ``L2[0]`` to ``R2[0]`` exists exactly when uMv = 1,
so the maximum matching has size N/2 on a one and N/2 - 1 on a zero.
"""

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from ..exceptions import DimensionMismatchError, GadgetConstructionError, HostTooSmallError
from ..expanders.factory import ExpanderSpec, overlay_expander
from ..graph.degrees import degree_histogram
from ..graph.dynamic_graph import DynamicGraph, normalize
from ..graph.expansion import ExpansionCertificate, expansion_lower_bound_spectral
from ..graph.matching import Matching, augmenting_path_exists, max_matching_size
from ..oumv.instance import BitMatrix, BitVector, augment_instance
from .base import MATCHING_SIZE, ReductionDriver, swap_edges
from .layout import GadgetLayout
from .power_law_host import (PowerLawHost, apply_rewire, build_power_law_host, embed,
                             pick_rewire_pairs)

logger = logging.getLogger(__name__)

MATCHING_VARIANTS = ("const", "varying", "expander", "powerlaw")

_RANKS = {"L1": 0, "L2": 1, "L3": 2, "L4": 3, "R4": 4, "R3": 5, "R2": 6, "R1": 7}


class MatchingLayout(GadgetLayout):
    """
    Node labels of a matching reduction plus its base matching.

    Args:
        variant: const, varying, expander or powerlaw.
        n: dimension encoded by the vector path.
        width: columns per row path (n unless the degree is traded off).
        rows: row paths per side (2n for the power-law variant).
    """

    def __init__(self, variant: str, n: int, width: Optional[int] = None,
                 rows: Optional[int] = None):
        super().__init__("matching", variant, n)
        self.width = width if width is not None else n
        self.rows = rows if rows is not None else n
        self.base = Matching()
        self.input_edges: Set[Tuple[int, int]] = set()
        self.overlay_edges: List[Tuple[int, int]] = []
        self.certificate: Optional[ExpansionCertificate] = None
        self.reduction_size = 0

    @property
    def source(self) -> int:
        return self.id("L2", 0)

    @property
    def sink(self) -> int:
        return self.id("R2", 0)

    @property
    def full_matching_size(self) -> int:
        """Matching size of the reduction part when uMv = 1."""
        return self.reduction_size // 2


def _build_skeleton(layout: MatchingLayout) -> DynamicGraph:
    path_edges = []
    for side in ("L", "R"):
        one, two, three, four = (f"{side}{k}" for k in range(1, 5))
        previous = layout.add(two, 0, layer=_RANKS[two])
        for i in range(1, layout.n + 1):
            a = layout.add(one, i, layer=_RANKS[one])
            b = layout.add(two, i, layer=_RANKS[two])
            path_edges.extend([(previous, a), (a, b)])
            layout.base.add(a, b)
            previous = b
        for i in range(1, layout.rows + 1):
            previous = None
            for j in range(layout.width + 1):
                a = layout.add(three, i, j, layer=_RANKS[three])
                b = layout.add(four, i, j, layer=_RANKS[four])
                if previous is not None:
                    path_edges.append((previous, a))
                path_edges.append((a, b))
                layout.base.add(a, b)
                previous = b
    graph = DynamicGraph(layout.size)
    graph.add_edges(path_edges)
    layout.reduction_size = layout.size
    return graph


def _check_dimension(n: int, matrix: BitMatrix):
    if n < 1:
        raise GadgetConstructionError(f"Dimension must be positive, got {n}")
    if matrix.n != n:
        raise DimensionMismatchError(f"Matrix has dimension {matrix.n}, construction expects {n}")


def _compress(index: int, width: int, n: int) -> int:
    """ceil(index * width / n) in exact integer arithmetic."""
    return -(-index * width // n)


def _input_edges(layout: MatchingLayout, u: BitVector, v: BitVector) -> Set[Tuple[int, int]]:
    edges = set()
    for side, vector in (("L", u), ("R", v)):
        for i in vector.ones_indices():
            edges.add(normalize(layout.id(f"{side}2", i), layout.id(f"{side}3", i, 0)))
    return edges


def expected_node_count(variant: str, n: int, width: Optional[int] = None) -> int:
    if variant == "const":
        return 4 * n * n + 8 * n + 2
    if variant == "varying":
        return 2 * (2 * n + 1) + 2 * n * (2 * width + 2)
    if variant == "expander":
        return 16 * n * n + 16 * n + 2
    if variant == "powerlaw":
        return 8 * n * n + 12 * n + 2
    raise GadgetConstructionError(f"Unknown matching variant: {variant}")


def build_matching_const(n: int, matrix: BitMatrix) -> Tuple[DynamicGraph, MatchingLayout]:
    """
    Build the bounded-degree reduction for an n x n matrix.

    Returns:
        (graph, layout) with N = 4n^2 + 8n + 2 nodes and no vector edges yet.
    """
    _check_dimension(n, matrix)
    layout = MatchingLayout("const", n)
    graph = _build_skeleton(layout)
    graph.add_edges(normalize(layout.id("L4", i, j), layout.id("R4", j, i))
                    for i, j in matrix.ones_positions())
    graph.clear_log()
    logger.debug("Built %r with %d cross edges", layout, matrix.count())
    return graph, layout


def varying_width(n: int, t: float) -> Tuple[int, bool]:
    """Columns per row path for trade-off t, and whether n^((1-t)/(1+t)) was exact."""
    if not 0 <= t <= 1:
        raise GadgetConstructionError(f"Degree trade-off t must lie in [0, 1], got {t}")
    exact = n ** ((1 - t) / (1 + t))
    width = max(1, math.ceil(exact - 1e-9))
    return width, abs(exact - round(exact)) < 1e-9


def build_matching_varying(n: int, t: float, matrix: BitMatrix) -> Tuple[DynamicGraph, MatchingLayout]:
    """
    Trade node count against degree: rows of w = n^((1-t)/(1+t)) columns.

    Matrix entry (i, j) becomes the edge (L4[i, j'], R4[j, i']) where
    k' = ceil(k * w / n). t = 0 gives the bounded-degree graph.
    """
    _check_dimension(n, matrix)
    width, exact = varying_width(n, t)
    layout = MatchingLayout("varying", n, width=width)
    layout.params.update({"t": t, "width": width})
    if not exact:
        layout.notes.append(f"row width rounded up to {width}")
    graph = _build_skeleton(layout)
    cross = {normalize(layout.id("L4", i, _compress(j, width, n)),
                       layout.id("R4", j, _compress(i, width, n)))
             for i, j in matrix.ones_positions()}
    graph.add_edges(sorted(cross))
    graph.clear_log()
    layout.params["max_degree"] = max(graph.degrees())
    return graph, layout


def apply_pair_matching(graph: DynamicGraph, layout: MatchingLayout, u: BitVector,
                        v: BitVector) -> int:
    """Delete the previous vector edges and insert the new pair's."""
    if layout.variant not in ("const", "varying"):
        raise GadgetConstructionError(f"apply_pair_matching does not drive {layout.variant}")
    if u.n != layout.n or v.n != layout.n:
        raise DimensionMismatchError(f"Pair of dimension ({u.n}, {v.n}) for n={layout.n}")
    return swap_edges(graph, layout.input_edges, _input_edges(layout, u, v))


def decide_matching(graph: DynamicGraph, layout: MatchingLayout) -> int:
    """1 iff the base matching has an augmenting path from L2[0] to R2[0]."""
    return int(augmenting_path_exists(graph, layout.base, layout.source, layout.sink))


def decide_matching_size(answer: int, layout: MatchingLayout) -> int:
    return int(answer == layout.full_matching_size)


def _expander_input_edges(layout: MatchingLayout, u: BitVector, v: BitVector) -> Set[Tuple[int, int]]:
    edges = set()
    for side, vector in (("L", u), ("R", v)):
        for i in range(1, layout.n + 1):
            end = f"{side}3" if vector[i] else f"{side}4"
            edges.add(normalize(layout.id(f"{side}2", i), layout.id(end, i, 0)))
    return edges


def build_matching_expander(n: int, matrix: BitMatrix, degree: int = 4, min_h0: float = 0.1,
                            seed: int = 0) -> Tuple[DynamicGraph, MatchingLayout, ExpansionCertificate]:
    """
    Reinforced reduction: augment to dimension 2n, then overlay expanders.

    Every L2[i] carries exactly one vector edge at all times: to L3[i,0] on a
    one, to L4[i,0] on a zero. Expanders are laid directly (no dummy nodes)
    on L2, L4, R2 and R4.

    Returns:
        (graph, layout, certificate) where the certificate is the spectral
        bound of the whole graph with the zero pair installed.
    """
    _check_dimension(n, matrix)
    zeros = BitVector.zeros(n)
    _, augmented, _ = augment_instance(zeros, matrix, zeros)
    m = 2 * n
    layout = MatchingLayout("expander", m)
    layout.params.update({"original_n": n, "expander_degree": degree, "min_h0": min_h0})
    graph = _build_skeleton(layout)
    graph.add_edges(normalize(layout.id("L4", i, j), layout.id("R4", j, i))
                    for i, j in augmented.ones_positions())
    targets = {
        "L2": layout.nodes_in("L2"), "L4": layout.nodes_in("L4"),
        "R2": layout.nodes_in("R2"), "R4": layout.nodes_in("R4"),
    }
    for offset, (group, nodes) in enumerate(sorted(targets.items())):
        overlay = overlay_expander(graph, nodes, ExpanderSpec(len(nodes), degree, min_h0, seed + offset))
        layout.overlay_edges.extend(overlay.edges)
        layout.notes.extend(f"{group}: {note}" for note in overlay.notes)
    zero = BitVector.zeros(m)
    swap_edges(graph, layout.input_edges, _expander_input_edges(layout, zero, zero))
    graph.clear_log()
    certificate = expansion_lower_bound_spectral(graph)
    layout.certificate = certificate
    logger.info("Expander matching reduction n=%d: N=%d, spectral bound %.4f",
                n, graph.node_count, certificate.as_float())
    return graph, layout, certificate


def apply_pair_matching_expander(graph: DynamicGraph, layout: MatchingLayout, u: BitVector,
                                 v: BitVector) -> int:
    """Insert the new pair's edges, then delete the previous pair's."""
    original = layout.params["original_n"]
    if u.n != original or v.n != original:
        raise DimensionMismatchError(f"Pair of dimension ({u.n}, {v.n}) for n={original}")
    desired = _expander_input_edges(layout, u.padded(layout.n), v.padded(layout.n))
    return swap_edges(graph, layout.input_edges, desired, insert_first=True)


def strip_overlay(graph: DynamicGraph, layout: MatchingLayout) -> DynamicGraph:
    """Copy of ``graph`` without the expander overlay edges."""
    stripped = graph.copy()
    for a, b in layout.overlay_edges:
        if stripped.has_edge(a, b):
            stripped.delete_edge(a, b)
    stripped.clear_log()
    return stripped


def expected_left_table(n: int) -> Dict[str, Dict[int, int]]:
    """
    Per-group degree counts of the left side before any vector edge.

    Both path ends L2[0] and L2[n] have degree 1. In every row L4[i,0] has
    no cross edge and L4[i,n] ends the path, so each row holds two degree-2
    L4 nodes and n - 1 of degree 3.
    """
    table = {
        "L1": {2: n},
        "L2": {1: 2, 2: n - 1},
        "L3": {1: 2 * n, 2: 2 * n * n},
        "L4": {2: 4 * n, 3: 2 * n * (n - 1)},
    }
    return {group: {d: c for d, c in counts.items() if c} for group, counts in table.items()}


def left_degree_table(graph: DynamicGraph, layout: GadgetLayout) -> Dict[str, Dict[int, int]]:
    """Measured per-group degree histogram of L1..L4."""
    return {group: degree_histogram(graph, layout.nodes_in(group))
            for group in ("L1", "L2", "L3", "L4")}


@dataclass
class PowerLawMatchingState:
    """
    A matching reduction embedded in a power-law host.

    A vector one on an inner row moves L2[i] from degree 2 to 3 and L3[i,0]
    from 1 to 2; a one on row n moves both from 1 to 2. Each kind has its own
    compensating host rewiring, so the histogram is unchanged while queried.

    Attributes:
        graph: reduction ids first, host remainder after.
        rewires: 2n - 2 rewirings (a, b, c, d) with deg b = 3, one per inner one.
        end_rewires: 2 rewirings with deg b = 2, one per one on row n.
        matching_sizes: host maximum matching after (inner, end) rewires.
    """

    graph: DynamicGraph
    layout: MatchingLayout
    host: PowerLawHost
    rewires: List[Tuple[int, int, int, int]]
    end_rewires: List[Tuple[int, int, int, int]]
    matching_sizes: Dict[Tuple[int, int], int]
    mark: Optional[int] = None
    pending: Tuple[int, int] = (0, 0)
    notes: List[str] = field(default_factory=list)

    @property
    def reduction_size(self) -> int:
        return self.layout.reduction_size

    @property
    def reduction_nodes(self) -> range:
        return range(self.reduction_size)


def _host_matching_size(graph: DynamicGraph, offset: int) -> int:
    host = DynamicGraph(graph.node_count - offset)
    host.add_edges((a - offset, b - offset) for a, b in graph.iter_edges() if a >= offset)
    return max_matching_size(host)


def _power_law_reduction(n: int, matrix: BitMatrix) -> Tuple[DynamicGraph, MatchingLayout]:
    layout = MatchingLayout("powerlaw", n, width=n, rows=2 * n)
    graph = _build_skeleton(layout)
    cross = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if matrix.get(i, j):
                cross.append((layout.id("L4", i, j), layout.id("R4", j, i)))
                cross.append((layout.id("L4", n + i, j), layout.id("R4", n + j, i)))
            else:
                cross.append((layout.id("L4", i, j), layout.id("R4", n + j, i)))
                cross.append((layout.id("L4", n + i, j), layout.id("R4", j, i)))
    graph.add_edges(normalize(a, b) for a, b in cross)
    graph.clear_log()
    return graph, layout


def _pick_both_kinds(graph: DynamicGraph, n: int, nodes: List[int], rng: random.Random):
    inner = pick_rewire_pairs(graph, 2 * n - 2, nodes, rng)
    if inner is None:
        return None
    end = pick_rewire_pairs(graph, 2, nodes, rng, b_degree=2,
                            exclude=[v for pair in inner for v in pair])
    if end is None:
        return None
    return inner, end


def build_matching_powerlaw(n: int, beta: float, seed: Optional[int], matrix: BitMatrix,
                            reserve: Optional[int] = None,
                            attempts: int = 3) -> PowerLawMatchingState:
    """
    Embed the reduction in a power-law host and prepare the compensating rewires.

    Rows n+1..2n carry the complementary cross edges, so every reduction
    degree is independent of M. Each vector one later raises two degrees;
    one host rewiring of the matching kind pulls the histogram back.

    Raises:
        HostTooSmallError: no host in the retry budget had the 2n rewire pairs.
    """
    _check_dimension(n, matrix)
    reduction, layout = _power_law_reduction(n, matrix)
    measured = left_degree_table(reduction, layout)
    if measured != expected_left_table(n):
        raise GadgetConstructionError(
            f"Left degree table {measured} differs from {expected_left_table(n)}")
    required = {d: c for d, c in degree_histogram(reduction).items() if c}
    reserve = reserve if reserve is not None else 2 * (2 * n) + 2
    rng = random.Random(seed)
    for attempt in range(attempts):
        host = build_power_law_host(required, beta, None if seed is None else seed + attempt, reserve)
        embedded = embed(host, reduction)
        picked = _pick_both_kinds(embedded.graph, n, embedded.host_nodes, rng)
        if picked is not None:
            break
        logger.debug("Host left no %d rewire pairs; growing reserve", 2 * n)
        reserve *= 2
    else:
        message = f"No host with {2 * n} disjoint rewire pairs after {attempts} attempts"
        logger.error(message)
        raise HostTooSmallError(message, 2 * embedded.graph.node_count)
    inner, end = picked
    for k, node in enumerate(embedded.host_nodes):
        layout.register(node, "H", k, group="host")
    layout.params.update({"beta": beta, "alpha": host.params.alpha, "seed": seed})
    layout.notes.extend(host.notes)
    sizes = {}
    for ends in range(len(end) + 1):
        work = embedded.graph.copy()
        for pair in end[:ends]:
            apply_rewire(work, pair)
        sizes[(0, ends)] = _host_matching_size(work, layout.reduction_size)
        for k, pair in enumerate(inner, start=1):
            apply_rewire(work, pair)
            sizes[(k, ends)] = _host_matching_size(work, layout.reduction_size)
    logger.info("Power-law matching reduction n=%d: N=%d (reduction %d), m_0=%d",
                n, embedded.graph.node_count, layout.reduction_size, sizes[(0, 0)])
    return PowerLawMatchingState(embedded.graph, layout, host, inner, end, sizes)


def rewire_counts(u: BitVector, v: BitVector) -> Tuple[int, int]:
    """(inner, end): vector ones on rows below n, and ones on row n."""
    n = u.n
    end = u[n] + v[n]
    return u.support() + v.support() - end, end


def apply_pair_powerlaw_matching(state: PowerLawMatchingState, u: BitVector, v: BitVector) -> int:
    """Insert the vector edges and one matching rewire per one, after a checkpoint."""
    layout = state.layout
    if u.n != layout.n or v.n != layout.n:
        raise DimensionMismatchError(f"Pair of dimension ({u.n}, {v.n}) for n={layout.n}")
    state.mark = state.graph.checkpoint()
    edges = sorted(_input_edges(layout, u, v))
    state.graph.add_edges(edges)
    state.pending = rewire_counts(u, v)
    inner, end = state.pending
    count = len(edges)
    for pair in state.rewires[:inner] + state.end_rewires[:end]:
        count += apply_rewire(state.graph, pair)
    return count


def decide_powerlaw_matching(state: PowerLawMatchingState, answer: int) -> int:
    return int(answer == state.matching_sizes[state.pending] + state.layout.full_matching_size)


def rollback_powerlaw_matching(state: PowerLawMatchingState) -> int:
    if state.mark is None:
        return 0
    count = state.graph.rollback(state.mark)
    state.mark = None
    return count


def apply_and_decide_powerlaw_matching(state: PowerLawMatchingState, u: BitVector,
                                       v: BitVector) -> int:
    """One full round: updates, exact query, decode, rollback."""
    apply_pair_powerlaw_matching(state, u, v)
    bit = decide_powerlaw_matching(state, max_matching_size(state.graph))
    rollback_powerlaw_matching(state)
    return bit


class MatchingDriver(ReductionDriver):
    """Const, varying and expander matching reductions."""

    family = "matching"
    query_kind = MATCHING_SIZE

    def __init__(self, graph: DynamicGraph, layout: MatchingLayout):
        super().__init__(graph, layout)
        self.variant = layout.variant

    @property
    def expected_nodes(self) -> int:
        n = self.layout.params.get("original_n", self.n)
        return expected_node_count(self.variant, n, self.layout.width)

    def apply_pair(self, u: BitVector, v: BitVector) -> int:
        self.pairs_applied += 1
        if self.variant == "expander":
            return apply_pair_matching_expander(self.graph, self.layout, u, v)
        return apply_pair_matching(self.graph, self.layout, u, v)

    def decide(self, answer) -> int:
        return decide_matching_size(answer, self.layout)

    def decide_fast(self) -> int:
        return decide_matching(self.graph, self.layout)

    def summary(self) -> dict:
        summary = super().summary()
        if self.layout.certificate is not None:
            summary["certificate"] = self.layout.certificate.to_dict()
        return summary


class PowerLawMatchingDriver(ReductionDriver):
    """Power-law matching reduction; rewires are rolled back after every query."""

    family = "matching"
    variant = "powerlaw"
    query_kind = MATCHING_SIZE

    def __init__(self, state: PowerLawMatchingState):
        super().__init__(state.graph, state.layout)
        self.state = state

    @property
    def expected_nodes(self) -> int:
        return expected_node_count("powerlaw", self.n)

    def apply_pair(self, u: BitVector, v: BitVector) -> int:
        self.pairs_applied += 1
        return apply_pair_powerlaw_matching(self.state, u, v)

    def decide(self, answer) -> int:
        return decide_powerlaw_matching(self.state, answer)

    def finish_pair(self) -> int:
        return rollback_powerlaw_matching(self.state)

    def summary(self) -> dict:
        summary = super().summary()
        summary["expected_N"] = self.layout.reduction_size
        summary["host"] = {
            "alpha": self.state.host.params.alpha,
            "beta": self.state.host.params.beta,
            "regrowths": self.state.host.regrowths,
            "matching_sizes": {f"{inner},{end}": size
                               for (inner, end), size in sorted(self.state.matching_sizes.items())},
        }
        return summary


def make_matching_driver(variant: str, matrix: BitMatrix, options: Dict) -> ReductionDriver:
    """Build the driver for ``variant`` from harness options."""
    n = matrix.n
    if variant == "const":
        return MatchingDriver(*build_matching_const(n, matrix))
    if variant == "varying":
        return MatchingDriver(*build_matching_varying(n, float(options.get("t", 0.5)), matrix))
    if variant == "expander":
        graph, layout, _ = build_matching_expander(
            n, matrix, int(options.get("expander_degree", 4)), float(options.get("min_h0", 0.1)),
            int(options.get("seed", 0)))
        return MatchingDriver(graph, layout)
    if variant == "powerlaw":
        state = build_matching_powerlaw(n, float(options.get("beta", 2.5)), options.get("seed"), matrix)
        return PowerLawMatchingDriver(state)
    raise GadgetConstructionError(f"Unknown matching variant: {variant}")
