"""
Dynamic simple undirected graph with an update log.

Every successful insertion or deletion is appended to ``update_log`` and
published to the registered listeners, which is how algorithm adapters and
invariant checks follow a reduction run op by op.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Optional, Set, Tuple

from ..exceptions import GraphUpdateError

logger = logging.getLogger(__name__)

INSERT = "insert"
DELETE = "delete"


@dataclass(frozen=True)
class UpdateOp:
    """One edge update."""

    kind: str
    a: int
    b: int

    def __post_init__(self):
        if self.kind not in (INSERT, DELETE):
            raise ValueError(f"Unsupported update kind: {self.kind}")
        if self.a == self.b:
            raise GraphUpdateError(f"Self-loop update on node {self.a}")

    @property
    def endpoints(self) -> Tuple[int, int]:
        return (self.a, self.b)

    def inverse(self) -> "UpdateOp":
        return UpdateOp(DELETE if self.kind == INSERT else INSERT, self.a, self.b)

    def to_string(self) -> str:
        return f"{'+' if self.kind == INSERT else '-'} {self.a} {self.b}"


def normalize(a: int, b: int) -> Tuple[int, int]:
    return (a, b) if a < b else (b, a)


class DynamicGraph:
    """
    Simple undirected graph on nodes 0..N-1 supporting edge updates.

    Args:
        node_count: Number of nodes; fixed at build, but ``add_nodes`` may
            append fresh isolated nodes while a construction is assembled.
    """

    def __init__(self, node_count: int = 0):
        if node_count < 0:
            raise ValueError(f"Node count must be non-negative, got {node_count}")
        self._adj: List[Set[int]] = [set() for _ in range(node_count)]
        self.edge_count = 0
        self.update_log: List[UpdateOp] = []
        self._listeners: List[Callable[[UpdateOp], None]] = []

    @property
    def node_count(self) -> int:
        return len(self._adj)

    def __len__(self) -> int:
        return len(self._adj)

    def add_nodes(self, count: int) -> range:
        """Append ``count`` isolated nodes and return their ids."""
        start = len(self._adj)
        self._adj.extend(set() for _ in range(count))
        return range(start, start + count)

    # -- listeners -----------------------------------------------------------

    def add_listener(self, callback: Callable[[UpdateOp], None]):
        self._listeners.append(callback)

    def remove_listener(self, callback: Callable[[UpdateOp], None]):
        if callback in self._listeners:
            self._listeners.remove(callback)

    def _publish(self, op: UpdateOp):
        self.update_log.append(op)
        for callback in list(self._listeners):
            callback(op)

    # -- updates -------------------------------------------------------------

    def _check_pair(self, a: int, b: int):
        if a == b:
            raise GraphUpdateError(f"Self-loop on node {a}")
        size = len(self._adj)
        if not (0 <= a < size and 0 <= b < size):
            raise GraphUpdateError(f"Edge ({a}, {b}) outside node range [0, {size})")

    def insert_edge(self, a: int, b: int):
        self._check_pair(a, b)
        if b in self._adj[a]:
            raise GraphUpdateError(f"Duplicate insertion of edge ({a}, {b})")
        self._adj[a].add(b)
        self._adj[b].add(a)
        self.edge_count += 1
        self._publish(UpdateOp(INSERT, a, b))

    def delete_edge(self, a: int, b: int):
        self._check_pair(a, b)
        if b not in self._adj[a]:
            raise GraphUpdateError(f"Deletion of missing edge ({a}, {b})")
        self._adj[a].discard(b)
        self._adj[b].discard(a)
        self.edge_count -= 1
        self._publish(UpdateOp(DELETE, a, b))

    def apply(self, op: UpdateOp):
        if op.kind == INSERT:
            self.insert_edge(op.a, op.b)
        else:
            self.delete_edge(op.a, op.b)

    def add_edges(self, edges: Iterable[Tuple[int, int]]) -> int:
        count = 0
        for a, b in edges:
            self.insert_edge(a, b)
            count += 1
        return count

    def checkpoint(self) -> int:
        """Position in the update log to roll back to."""
        return len(self.update_log)

    def rollback(self, mark: int) -> int:
        """Undo every update issued after ``mark`` (the undo ops are logged too)."""
        undo = [op.inverse() for op in reversed(self.update_log[mark:])]
        for op in undo:
            self.apply(op)
        return len(undo)

    def clear_log(self):
        self.update_log = []

    # -- queries -------------------------------------------------------------

    def has_edge(self, a: int, b: int) -> bool:
        return 0 <= a < len(self._adj) and b in self._adj[a]

    def neighbors(self, v: int) -> Set[int]:
        return self._adj[v]

    def sorted_neighbors(self, v: int) -> List[int]:
        return sorted(self._adj[v])

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> List[int]:
        return [len(nbrs) for nbrs in self._adj]

    def nodes(self) -> range:
        return range(len(self._adj))

    def edges(self) -> List[Tuple[int, int]]:
        """All edges as sorted (a, b) pairs with a < b."""
        return [(a, b) for a in range(len(self._adj)) for b in sorted(self._adj[a]) if a < b]

    def iter_edges(self) -> Iterator[Tuple[int, int]]:
        for a, nbrs in enumerate(self._adj):
            for b in nbrs:
                if a < b:
                    yield a, b

    def edge_set(self) -> Set[Tuple[int, int]]:
        return set(self.iter_edges())

    def same_edges(self, other: "DynamicGraph") -> bool:
        return self.node_count == other.node_count and self._adj == other._adj

    def copy(self, keep_log: bool = False) -> "DynamicGraph":
        """Snapshot without listeners."""
        clone = DynamicGraph(0)
        clone._adj = [set(nbrs) for nbrs in self._adj]
        clone.edge_count = self.edge_count
        if keep_log:
            clone.update_log = list(self.update_log)
        return clone

    def subgraph_adjacency(self, nodes: Iterable[int]) -> dict:
        keep = set(nodes)
        return {v: self._adj[v] & keep for v in keep}

    def check_invariants(self):
        """Raise ``GraphUpdateError`` if simplicity, symmetry or the edge count is broken."""
        total = 0
        for a, nbrs in enumerate(self._adj):
            if a in nbrs:
                raise GraphUpdateError(f"Self-loop on node {a}")
            for b in nbrs:
                if a not in self._adj[b]:
                    raise GraphUpdateError(f"Asymmetric adjacency between {a} and {b}")
            total += len(nbrs)
        if total != 2 * self.edge_count:
            raise GraphUpdateError(f"Edge count {self.edge_count} disagrees with degree sum {total}")

    def __repr__(self):
        return f"DynamicGraph(N={self.node_count}, m={self.edge_count})"


def replay(log: Iterable[UpdateOp], node_count: int,
           base: Optional[DynamicGraph] = None) -> DynamicGraph:
    """Apply ``log`` to a copy of ``base`` (or an empty graph) and return it."""
    graph = base.copy() if base is not None else DynamicGraph(node_count)
    for op in log:
        graph.apply(op)
    return graph
