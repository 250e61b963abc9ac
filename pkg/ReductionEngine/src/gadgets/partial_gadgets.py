"""
Partially dynamic reductions: one OuMv pair per round, deletions only.

Round j of the distance construction keeps the edges (L4[i,j], P[i,j]) with
u_i = 1; the path P[i] then adds 2j to the length of every s-t route through
round j, so the threshold grows by two per round. The matching
construction frees two fresh path ends per round, and the number of
unmatched nodes grows by four per round.

A finished decremental run can be replayed backwards as an insertions-only
stream; its thresholds are measured on an all-ones calibration run.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from ..exceptions import DimensionMismatchError, GadgetConstructionError
from ..graph.dynamic_graph import INSERT, DynamicGraph, UpdateOp, normalize
from ..graph.matching import max_matching_size
from ..graph.traversal import bfs_distance
from ..oumv.instance import BitMatrix, BitVector, OuMvInstance
from .base import DISTANCE, MATCHING_SIZE, ReductionDriver, reference_answer
from .layout import GadgetLayout
from .stpath_gadgets import add_tree, log2_exact

logger = logging.getLogger(__name__)

PARTIAL_VARIANTS = ("st", "matching")


@dataclass
class RoundState:
    """
    Progress of a decremental run.

    Attributes:
        round: rounds started so far (1-based once running).
        thresholds: answer that decodes to 1, per round.
        query_marks: update-log position at each round's query.
        pending: edges the current round's sweep still has to delete.
    """

    graph: DynamicGraph
    layout: GadgetLayout
    kind: str
    round: int = 0
    thresholds: Dict[int, int] = field(default_factory=dict)
    query_marks: List[int] = field(default_factory=list)
    pending: List[Tuple[int, int]] = field(default_factory=list)
    in_round: bool = False

    @property
    def n(self) -> int:
        return self.layout.n

    @property
    def threshold(self) -> int:
        return self.thresholds[self.round]

    def query_args(self) -> Dict[str, int]:
        if self.kind == DISTANCE:
            return {"s": self.layout.id("L1", 1), "t": self.layout.id("R1", 1)}
        return {}

    def answer(self):
        args = self.query_args()
        return reference_answer(self.graph, self.kind, args.get("s"), args.get("t"))

    def _begin(self, u: BitVector, v: BitVector):
        if u.n != self.n or v.n != self.n:
            raise DimensionMismatchError(f"Pair of dimension ({u.n}, {v.n}) for n={self.n}")
        if self.in_round:
            raise GadgetConstructionError(f"Round {self.round} has not been swept yet")
        if self.round >= self.n:
            raise GadgetConstructionError(f"All {self.n} rounds already played")
        self.round += 1
        self.in_round = True

    def _delete(self, edges) -> int:
        count = 0
        for a, b in edges:
            if self.graph.has_edge(a, b):
                self.graph.delete_edge(a, b)
                count += 1
        return count

    def sweep(self) -> int:
        """End-of-round deletions."""
        if not self.in_round:
            return 0
        count = self._delete(self.pending)
        self.pending = []
        self.in_round = False
        return count


def partial_node_count(variant: str, n: int) -> int:
    return 10 * n * n - 2 if variant == "st" else 12 * n * n + 12 * n


def _check(n: int, matrix: BitMatrix):
    if matrix.n != n:
        raise DimensionMismatchError(f"Matrix has dimension {matrix.n}, construction expects {n}")


def build_decremental_st(n: int, matrix: BitMatrix) -> Tuple[DynamicGraph, GadgetLayout, RoundState]:
    """
    Distance construction with round paths P[i] and Q[i].

    Path P[i] runs P[i,n] - ... - P[i,1] - L5[i]; leaf L4[i,j] hangs on
    P[i,j], and tree L5[i] has leaves L6[i,k] carrying the matrix edges to
    R6[k,i]. N = 10n^2 - 2; round j decodes 1 iff dist(s,t) = 6 log n + 5 + 2j.
    """
    h = log2_exact(n)
    _check(n, matrix)
    layout = GadgetLayout("decremental", "st", n)
    edges: List[Tuple[int, int]] = []
    for side, path in (("L", "P"), ("R", "Q")):
        add_tree(layout, f"{side}1", f"{side}2", (), h, lambda level: level, edges)
        roots = [add_tree(layout, f"{side}3", f"{side}4", (i,), h, lambda level: level, edges)
                 for i in range(1, n + 1)]
        for i in range(1, n + 1):
            edges.append((layout.id(f"{side}2", i), roots[i - 1]))
        chains = {}
        for i in range(1, n + 1):
            chains[i] = [layout.add(path, i, j) for j in range(n, 0, -1)]
            edges.extend(zip(chains[i], chains[i][1:]))
        for i in range(1, n + 1):
            root = add_tree(layout, f"{side}5", f"{side}6", (i,), h, lambda level: level, edges)
            edges.append((layout.id(path, i, 1), root))
            edges.extend((layout.id(f"{side}4", i, j), layout.id(path, i, j)) for j in range(1, n + 1))
    for i, j in matrix.ones_positions():
        edges.append((layout.id("L6", i, j), layout.id("R6", j, i)))
    graph = DynamicGraph(layout.size)
    graph.add_edges(normalize(a, b) for a, b in edges)
    graph.clear_log()
    state = RoundState(graph, layout, DISTANCE,
                       thresholds={j: 6 * h + 5 + 2 * j for j in range(1, n + 1)})
    return graph, layout, state


def start_round_st(state: RoundState, u: BitVector, v: BitVector) -> int:
    """Delete the round edges of zero bits; the rest wait for the sweep."""
    state._begin(u, v)
    layout, j = state.layout, state.round
    zero, keep = [], []
    for side, path, vector in (("L", "P", u), ("R", "Q", v)):
        for i in range(1, state.n + 1):
            edge = normalize(layout.id(f"{side}4", i, j), layout.id(path, i, j))
            (keep if vector[i] else zero).append(edge)
    count = state._delete(zero)
    state.pending = keep
    state.query_marks.append(state.graph.checkpoint())
    return count


def advance_round_st(state: RoundState, u: BitVector, v: BitVector) -> Tuple[int, int]:
    """
    Play one full round: zero-bit deletions, the distance query, the sweep.

    Returns:
        (decoded bit, deletions issued).
    """
    count = start_round_st(state, u, v)
    args = state.query_args()
    bit = int(bfs_distance(state.graph, args["s"], args["t"]) == state.threshold)
    count += state.sweep()
    return bit, count


def build_decremental_matching(n: int, matrix: BitMatrix) -> Tuple[DynamicGraph, GadgetLayout, RoundState]:
    """
    Matching construction with three path layers per side.

    LE[j]: L1[j,0] - L2[j,0] - ... - L2[j,n]; LF[i]: L3[i,0] - ... - L4[i,n];
    LG[i]: L5[i,0] - ... - L6[i,n]. L2[j,i] - L3[i,j], L4[i,n] - L5[i,0] and
    matrix edges (L6[i,j], R6[j,i]). N = 12n^2 + 12n; round j decodes 1 iff
    exactly 4j - 2 nodes stay unmatched.
    """
    if n < 1:
        raise GadgetConstructionError(f"Dimension must be positive, got {n}")
    _check(n, matrix)
    layout = GadgetLayout("decremental", "matching", n)
    edges: List[Tuple[int, int]] = []
    for side in ("L", "R"):
        for first, second in ((1, 2), (3, 4), (5, 6)):
            for outer in range(1, n + 1):
                chain = []
                for inner in range(n + 1):
                    chain.append(layout.add(f"{side}{first}", outer, inner))
                    chain.append(layout.add(f"{side}{second}", outer, inner))
                edges.extend(zip(chain, chain[1:]))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                edges.append((layout.id(f"{side}2", j, i), layout.id(f"{side}3", i, j)))
            edges.append((layout.id(f"{side}4", i, n), layout.id(f"{side}5", i, 0)))
    for i, j in matrix.ones_positions():
        edges.append((layout.id("L6", i, j), layout.id("R6", j, i)))
    graph = DynamicGraph(layout.size)
    graph.add_edges(normalize(a, b) for a, b in edges)
    graph.clear_log()
    size = layout.size
    state = RoundState(graph, layout, MATCHING_SIZE,
                       thresholds={j: (size - 4 * j + 2) // 2 for j in range(1, n + 1)})
    layout.notes.append("end-of-round sweep deletes (R2[j,i], R3[i,j]) on the right side")
    return graph, layout, state


def start_round_matching(state: RoundState, u: BitVector, v: BitVector) -> int:
    """Cut the round's path starts and the vector edges of zero bits."""
    state._begin(u, v)
    layout, j = state.layout, state.round
    cuts = [normalize(layout.id("L1", j, 0), layout.id("L2", j, 0)),
            normalize(layout.id("R1", j, 0), layout.id("R2", j, 0))]
    zero, keep = [], []
    for side, vector in (("L", u), ("R", v)):
        for i in range(1, state.n + 1):
            edge = normalize(layout.id(f"{side}2", j, i), layout.id(f"{side}3", i, j))
            (keep if vector[i] else zero).append(edge)
    count = state._delete(cuts + zero)
    state.pending = keep + [normalize(layout.id("L2", j, 0), layout.id("L1", j, 1)),
                            normalize(layout.id("R2", j, 0), layout.id("R1", j, 1))]
    state.query_marks.append(state.graph.checkpoint())
    return count


def advance_round_matching(state: RoundState, u: BitVector, v: BitVector) -> Tuple[int, int]:
    """Play one full round; returns (decoded bit, deletions issued)."""
    count = start_round_matching(state, u, v)
    bit = int(max_matching_size(state.graph) == state.threshold)
    count += state.sweep()
    return bit, count


_BUILDERS = {"st": (build_decremental_st, start_round_st),
             "matching": (build_decremental_matching, start_round_matching)}


def run_decremental(variant: str, instance: OuMvInstance,
                    answer: Optional[Callable[[RoundState], object]] = None) -> Tuple[RoundState, List[int]]:
    """Play every pair of ``instance``; returns the finished state and decoded bits."""
    build, start = _BUILDERS[variant]
    _, _, state = build(instance.n, instance.matrix)
    bits = []
    for u, v in instance.pairs:
        start(state, u, v)
        value = answer(state) if answer is not None else state.answer()
        bits.append(int(value == state.threshold))
        state.sweep()
    return state, bits


@dataclass
class IncrementalReplay:
    """
    A decremental run played backwards as insertions only.

    Reversed round r recreates the query state of decremental round n + 1 - r.

    Attributes:
        start: the decremental run's final graph.
        rounds: insertions issued before each reversed query.
        tail: insertions after the last query (they restore the built graph).
        thresholds: measured answer decoding to 1, per reversed round.
    """

    start: DynamicGraph
    kind: str
    query: Dict[str, int]
    rounds: List[List[UpdateOp]]
    tail: List[UpdateOp]
    thresholds: List[object]

    @property
    def n(self) -> int:
        return len(self.rounds)

    def operations(self) -> List[UpdateOp]:
        return [op for ops in self.rounds for op in ops] + list(self.tail)

    def rebuilt(self) -> DynamicGraph:
        """Graph after every insertion, i.e. the decremental build."""
        graph = self.start.copy()
        for op in self.operations():
            graph.apply(op)
        graph.clear_log()
        return graph

    def reverse_back(self) -> DynamicGraph:
        """Undo the whole replay again, which restores ``start``."""
        graph = self.rebuilt()
        for op in reversed(self.operations()):
            graph.apply(op.inverse())
        graph.clear_log()
        return graph


def _reversed_rounds(state: RoundState) -> Tuple[List[List[UpdateOp]], List[UpdateOp]]:
    log = state.graph.update_log
    marks = state.query_marks + [len(log)]
    rounds = []
    for j in range(state.n, 0, -1):
        segment = log[marks[j - 1]:marks[j]]
        rounds.append([op.inverse() for op in reversed(segment)])
    tail = [op.inverse() for op in reversed(log[:marks[0]])]
    return rounds, tail


def reverse_to_incremental(variant: str, instance: OuMvInstance) -> IncrementalReplay:
    """
    Turn the decremental run on ``instance`` into an insertions-only replay.

    Thresholds come from the same construction run on the all-ones instance
    of dimension n, answered by the reference solver at every reversed query.
    """
    state, _ = run_decremental(variant, instance)
    rounds, tail = _reversed_rounds(state)
    n = instance.n
    ones = BitVector.ones(n)
    calibration = OuMvInstance(BitMatrix.ones(n), tuple((ones, ones) for _ in range(n)))
    calibration_state, _ = run_decremental(variant, calibration)
    calibration_rounds, _ = _reversed_rounds(calibration_state)
    graph = calibration_state.graph.copy()
    thresholds = []
    for ops in calibration_rounds:
        for op in ops:
            graph.apply(op)
        args = calibration_state.query_args()
        thresholds.append(reference_answer(graph, calibration_state.kind, args.get("s"), args.get("t")))
    if any(op.kind != INSERT for op in (op for ops in rounds for op in ops)):
        raise GadgetConstructionError("Reversed decremental stream contains a deletion")
    start = state.graph.copy()
    start.clear_log()
    logger.debug("Reversed %s run n=%d: thresholds %s", variant, n, thresholds)
    return IncrementalReplay(start, state.kind, state.query_args(), rounds, tail, thresholds)


class DecrementalDriver(ReductionDriver):
    """One round per pair: deletions, query, sweep."""

    family = "decremental"

    def __init__(self, state: RoundState):
        super().__init__(state.graph, state.layout)
        self.state = state
        self.variant = state.layout.variant
        self.query_kind = state.kind

    @property
    def expected_nodes(self) -> int:
        return partial_node_count(self.variant, self.n)

    def query_args(self) -> Dict[str, int]:
        return self.state.query_args()

    def apply_pair(self, u: BitVector, v: BitVector) -> int:
        self.pairs_applied += 1
        start = start_round_st if self.variant == "st" else start_round_matching
        return start(self.state, u, v)

    def decide(self, answer) -> int:
        return int(answer == self.state.threshold)

    def finish_pair(self) -> int:
        return self.state.sweep()


class IncrementalDriver(ReductionDriver):
    """
    Insertions-only replay; reversed round k answers pair n - 1 - k.

    The replay is prepared from the whole instance up front.
    """

    family = "incremental"

    def __init__(self, replay: IncrementalReplay, layout: GadgetLayout):
        graph = replay.start.copy()
        super().__init__(graph, layout)
        self.replay = replay
        self.variant = layout.variant
        self.query_kind = replay.kind

    @property
    def expected_nodes(self) -> int:
        return partial_node_count(self.variant, self.n)

    def pair_index(self, k: int) -> int:
        return self.replay.n - 1 - k

    def query_args(self) -> Dict[str, int]:
        return dict(self.replay.query)

    def apply_pair(self, u: BitVector, v: BitVector) -> int:
        ops = self.replay.rounds[self.pairs_applied]
        self.pairs_applied += 1
        for op in ops:
            self.graph.apply(op)
        return len(ops)

    def decide(self, answer) -> int:
        return int(answer == self.replay.thresholds[self.pairs_applied - 1])


def make_partial_driver(family: str, variant: str, instance: OuMvInstance,
                        options: Dict) -> ReductionDriver:
    """Build a decremental or incremental driver for ``variant`` (st or matching)."""
    if variant not in _BUILDERS:
        raise GadgetConstructionError(f"Unknown partially dynamic variant: {variant}")
    build, _ = _BUILDERS[variant]
    if family == "decremental":
        _, _, state = build(instance.n, instance.matrix)
        return DecrementalDriver(state)
    if family == "incremental":
        _, layout, _ = build(instance.n, instance.matrix)
        return IncrementalDriver(reverse_to_incremental(variant, instance), layout)
    raise GadgetConstructionError(f"Unknown partially dynamic family: {family}")
