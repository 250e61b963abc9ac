"""
Dynamic-algorithm adapters.

An adapter receives a snapshot of the built graph, then every edge update
the driver issues, and answers one query per pair. The shipped adapters
recompute from scratch on each query (constant update time, linear or
polynomial query time); tests add fault-injecting ones.
"""

import logging
from abc import ABC, abstractmethod
from typing import Callable, Dict, Optional, Type

from ..exceptions import AdapterError
from ..gadgets.base import DENSITY, DISTANCE, MATCHING_SIZE
from ..graph.densest import densest_subgraph
from ..graph.dynamic_graph import DynamicGraph, UpdateOp
from ..graph.matching import Matching, blossom_matching, maximum_matching
from ..graph.traversal import bfs_distance

logger = logging.getLogger(__name__)


class AlgorithmAdapter(ABC):
    """Common lifecycle: ``init`` once, ``apply`` per update, ``query`` per pair."""

    name = ""
    supports = ()

    def __init__(self):
        self.graph: Optional[DynamicGraph] = None
        self.updates = 0
        self.queries = 0

    def init(self, graph: DynamicGraph, layout=None):
        self.graph = graph.copy()
        self.updates = 0
        self.queries = 0

    def apply(self, op: UpdateOp):
        if self.graph is None:
            raise AdapterError(f"{self.name} adapter received an update before init")
        try:
            self.graph.apply(op)
        except Exception as e:
            raise AdapterError(f"{self.name} adapter failed on update {op.to_string()}: {e}") from e
        self.updates += 1

    def query(self, kind: str, s: Optional[int] = None, t: Optional[int] = None):
        if kind not in self.supports:
            raise AdapterError(f"{self.name} adapter does not answer {kind} queries")
        self.queries += 1
        answer = self._answer(kind, s, t)
        logger.debug("%s query %s -> %s", self.name, kind, answer)
        return answer

    @abstractmethod
    def _answer(self, kind: str, s: Optional[int], t: Optional[int]):
        """Answer on the adapter's current graph."""


class RecomputeBFSAdapter(AlgorithmAdapter):
    name = "recompute-bfs"
    supports = (DISTANCE,)

    def _answer(self, kind, s, t):
        return bfs_distance(self.graph, s, t)


class RecomputeMatchingAdapter(AlgorithmAdapter):
    """
    Maximum matching recomputed per query.

    When the layout carries a base matching, the search starts from the
    pairs of it that are still edges.
    """

    name = "recompute-matching"
    supports = (MATCHING_SIZE,)

    def __init__(self):
        super().__init__()
        self.base: Optional[Matching] = None

    def init(self, graph: DynamicGraph, layout=None):
        super().init(graph, layout)
        self.base = getattr(layout, "base", None)

    def _answer(self, kind, s, t):
        if self.base is None:
            return maximum_matching(self.graph).size()
        warm = Matching(pair for pair in self.base.pairs() if self.graph.has_edge(*pair))
        return blossom_matching(self.graph, initial=warm).size()


class RecomputeDensestAdapter(AlgorithmAdapter):
    name = "recompute-densest"
    supports = (DENSITY,)

    def _answer(self, kind, s, t):
        return densest_subgraph(self.graph).density


class RecomputeAdapter(AlgorithmAdapter):
    """Dispatches on the query kind; the default adapter of the harness."""

    name = "recompute"
    supports = (DISTANCE, MATCHING_SIZE, DENSITY)

    def __init__(self):
        super().__init__()
        self._inner = {DISTANCE: RecomputeBFSAdapter(), MATCHING_SIZE: RecomputeMatchingAdapter(),
                       DENSITY: RecomputeDensestAdapter()}

    def init(self, graph: DynamicGraph, layout=None):
        super().init(graph, layout)
        for inner in self._inner.values():
            inner.graph = self.graph
        self._inner[MATCHING_SIZE].base = getattr(layout, "base", None)

    def _answer(self, kind, s, t):
        return self._inner[kind]._answer(kind, s, t)


class ScaledDistanceAdapter(RecomputeBFSAdapter):
    """
    Approximate distances: reports ``factor * dist``, rounded down.

    With factor below 3 - delta the answer stays inside the window the
    approximate decoder accepts.
    """

    name = "scaled-bfs"

    def __init__(self, factor: float = 1.0):
        super().__init__()
        if factor < 1:
            raise ValueError(f"Scaling factor must be at least 1, got {factor}")
        self.factor = factor

    def _answer(self, kind, s, t):
        distance = super()._answer(kind, s, t)
        if distance == float("inf"):
            return distance
        return max(distance, int(self.factor * distance))


class FaultyAdapter(AlgorithmAdapter):
    """
    Wraps an adapter and perturbs its answers.

    Args:
        inner: the adapter being wrapped.
        perturb: answer -> reported answer.
        fail_after: raise ``AdapterError`` on this query number (1-based).
    """

    name = "faulty"

    def __init__(self, inner: AlgorithmAdapter, perturb: Callable = lambda x: x,
                 fail_after: Optional[int] = None):
        super().__init__()
        self.inner = inner
        self.supports = inner.supports
        self.perturb = perturb
        self.fail_after = fail_after

    def init(self, graph: DynamicGraph, layout=None):
        super().init(graph, layout)
        self.inner.init(graph, layout)

    def apply(self, op: UpdateOp):
        super().apply(op)
        self.inner.apply(op)

    def _answer(self, kind, s, t):
        if self.fail_after is not None and self.queries >= self.fail_after:
            raise AdapterError(f"Injected failure on query {self.queries}")
        return self.perturb(self.inner.query(kind, s, t))


ADAPTERS: Dict[str, Type[AlgorithmAdapter]] = {
    "recompute": RecomputeAdapter,
    "recompute-bfs": RecomputeBFSAdapter,
    "recompute-matching": RecomputeMatchingAdapter,
    "recompute-densest": RecomputeDensestAdapter,
    "scaled-bfs": ScaledDistanceAdapter,
}


def make_adapter(name: str, **kwargs) -> AlgorithmAdapter:
    try:
        return ADAPTERS[name](**kwargs)
    except KeyError:
        raise ValueError(f"Unknown adapter: {name} (choose from {', '.join(sorted(ADAPTERS))})")
