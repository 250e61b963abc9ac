"""
Common driver interface for built reductions.

A driver owns one built construction. Per OuMv pair the harness calls
``apply_pair`` (updates before the query), asks its adapter for the answer
to ``query_kind``, decodes it with ``decide`` and finally calls
``finish_pair`` for any updates that follow the query (rollbacks, end of
round sweeps).
"""

import logging
from abc import ABC, abstractmethod
from typing import Dict, Optional, Set, Tuple

from ..graph.densest import densest_subgraph
from ..graph.dynamic_graph import DynamicGraph, normalize
from ..graph.matching import max_matching_size
from ..graph.traversal import bfs_distance
from ..oumv.instance import BitVector
from .layout import GadgetLayout

logger = logging.getLogger(__name__)

DISTANCE = "distance"
MATCHING_SIZE = "matching_size"
DENSITY = "density"
QUERY_KINDS = (DISTANCE, MATCHING_SIZE, DENSITY)


def reference_answer(graph: DynamicGraph, kind: str, s: Optional[int] = None,
                     t: Optional[int] = None):
    """Answer a query by recomputing from scratch."""
    if kind == DISTANCE:
        return bfs_distance(graph, s, t)
    if kind == MATCHING_SIZE:
        return max_matching_size(graph)
    if kind == DENSITY:
        return densest_subgraph(graph).density
    raise ValueError(f"Unsupported query kind: {kind}")


def swap_edges(graph: DynamicGraph, current: Set[Tuple[int, int]], desired: Set[Tuple[int, int]],
               insert_first: bool = False) -> int:
    """
    Replace the input-dependent edges ``current`` by ``desired`` in place.

    Edges in both sets are left alone. ``current`` is updated to equal
    ``desired``; returns the number of update operations issued.
    """
    desired = {normalize(a, b) for a, b in desired}
    stale = sorted(current - desired)
    fresh = sorted(desired - current)
    steps = [(graph.insert_edge, fresh), (graph.delete_edge, stale)]
    if not insert_first:
        steps.reverse()
    for update, edges in steps:
        for a, b in edges:
            update(a, b)
    current.clear()
    current.update(desired)
    return len(stale) + len(fresh)


class ReductionDriver(ABC):
    """One built reduction: graph, layout, per-pair updates and decision rule."""

    family = ""
    variant = ""
    query_kind = ""

    def __init__(self, graph: DynamicGraph, layout: GadgetLayout):
        self.graph = graph
        self.layout = layout
        self.pairs_applied = 0

    @property
    def n(self) -> int:
        return self.layout.n

    @property
    def expected_nodes(self) -> Optional[int]:
        """Closed-form node count, when the construction has one."""
        return None

    @abstractmethod
    def apply_pair(self, u: BitVector, v: BitVector) -> int:
        """Issue the updates for a new pair; returns the update count."""

    @abstractmethod
    def decide(self, answer) -> int:
        """Decode a query answer into the OuMv bit."""

    def pair_index(self, k: int) -> int:
        """Index of the instance pair the k-th round encodes."""
        return k

    def finish_pair(self) -> int:
        """Updates issued after the query; returns their count."""
        return 0

    def query_args(self) -> Dict[str, int]:
        return {}

    def reference_answer(self):
        args = self.query_args()
        return reference_answer(self.graph, self.query_kind, args.get("s"), args.get("t"))

    def summary(self) -> dict:
        return {
            "family": self.family,
            "variant": self.variant,
            "n": self.n,
            "N": self.graph.node_count,
            "m": self.graph.edge_count,
            "expected_N": self.expected_nodes,
            "params": {k: str(v) for k, v in sorted(self.layout.params.items())},
            "notes": list(self.layout.notes),
        }
