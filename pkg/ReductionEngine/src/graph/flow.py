"""
Dinic's maximum flow on integer capacities.

Arcs live in flat arrays with the reverse arc at ``index ^ 1``; the blocking
flow search is iterative so long augmenting paths do not hit the recursion
limit.
"""

from collections import deque
from typing import List, Set


class FlowNetwork:
    """Directed network on nodes 0..size-1 with integer capacities."""

    def __init__(self, size: int):
        self.size = size
        self.head: List[List[int]] = [[] for _ in range(size)]
        self.to: List[int] = []
        self.cap: List[int] = []

    def add_edge(self, u: int, v: int, capacity: int, reverse_capacity: int = 0) -> int:
        if capacity < 0 or reverse_capacity < 0:
            raise ValueError(f"Negative capacity on arc ({u}, {v})")
        index = len(self.to)
        self.to.extend((v, u))
        self.cap.extend((capacity, reverse_capacity))
        self.head[u].append(index)
        self.head[v].append(index + 1)
        return index

    def _levels(self, source: int, sink: int) -> List[int]:
        level = [-1] * self.size
        level[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level

    def _blocking_flow(self, source: int, sink: int, level: List[int]) -> int:
        cursor = [0] * self.size
        total = 0
        head, to, cap = self.head, self.to, self.cap
        while True:
            stack = [source]
            path: List[int] = []
            while stack and stack[-1] != sink:
                u = stack[-1]
                arcs = head[u]
                advanced = False
                while cursor[u] < len(arcs):
                    e = arcs[cursor[u]]
                    v = to[e]
                    if cap[e] > 0 and level[v] == level[u] + 1:
                        stack.append(v)
                        path.append(e)
                        advanced = True
                        break
                    cursor[u] += 1
                if not advanced:
                    stack.pop()
                    if path:
                        path.pop()
                        cursor[stack[-1]] += 1
            if not stack:
                return total
            pushed = min(cap[e] for e in path)
            for e in path:
                cap[e] -= pushed
                cap[e ^ 1] += pushed
            total += pushed

    def max_flow(self, source: int, sink: int) -> int:
        if source == sink:
            raise ValueError("Source and sink must differ")
        flow = 0
        while True:
            level = self._levels(source, sink)
            if level[sink] < 0:
                return flow
            flow += self._blocking_flow(source, sink, level)

    def source_side(self, source: int) -> Set[int]:
        """Nodes reachable from ``source`` in the residual network (call after max_flow)."""
        seen = {source}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen
