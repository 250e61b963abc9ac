"""
Structured node labels for reduction graphs.

Every construction names its nodes the way the reduction describes them
(``L4[2,1]``, ``P[1,3]``, ``M_12[0]``) and the layout keeps the bijection
between those labels and the dense integer ids of the DynamicGraph.
"""

from typing import Dict, Iterable, List, Optional, Tuple

from ..exceptions import GadgetConstructionError


def format_label(prefix: str, index: Tuple) -> str:
    if not index:
        return prefix
    return f"{prefix}[{','.join(str(k) for k in index)}]"


class GadgetLayout:
    """
    Label <-> id bijection plus per-node group and layer.

    Args:
        family: reduction family (matching, st, densest, decremental).
        variant: construction variant (const, expander, ...).
        n: OuMv dimension the construction encodes.
    """

    def __init__(self, family: str, variant: str, n: int):
        self.family = family
        self.variant = variant
        self.n = n
        self._ids: Dict[str, int] = {}
        self._labels: List[str] = []
        self._groups: List[str] = []
        self.layers: Dict[int, int] = {}
        self.params: Dict[str, object] = {}
        self.notes: List[str] = []

    @property
    def size(self) -> int:
        return len(self._labels)

    def add(self, prefix: str, *index, layer: Optional[int] = None,
            group: Optional[str] = None) -> int:
        """Allocate the next id for ``prefix[index]``."""
        label = format_label(prefix, index)
        if label in self._ids:
            raise GadgetConstructionError(f"Duplicate node label {label}")
        node = len(self._labels)
        self._ids[label] = node
        self._labels.append(label)
        self._groups.append(group or prefix)
        if layer is not None:
            self.layers[node] = layer
        return node

    def register(self, node: int, prefix: str, *index, layer: Optional[int] = None,
                 group: Optional[str] = None) -> int:
        """Name a node the graph already allocated (dummy nodes, host nodes)."""
        if node != len(self._labels):
            raise GadgetConstructionError(
                f"Layout out of step with graph: expected id {len(self._labels)}, got {node}")
        return self.add(prefix, *index, layer=layer, group=group)

    def id(self, prefix: str, *index) -> int:
        label = format_label(prefix, index)
        try:
            return self._ids[label]
        except KeyError:
            raise KeyError(f"Unknown node label {label}")

    def has(self, prefix: str, *index) -> bool:
        return format_label(prefix, index) in self._ids

    def label(self, node: int) -> str:
        return self._labels[node]

    def group(self, node: int) -> str:
        return self._groups[node]

    def nodes_in(self, group: str) -> List[int]:
        return [node for node, name in enumerate(self._groups) if name == group]

    def labels(self) -> Dict[int, str]:
        return dict(enumerate(self._labels))

    def groups(self) -> Dict[int, str]:
        return dict(enumerate(self._groups))

    def to_map_text(self) -> str:
        """One ``label id`` line per node, in id order."""
        return "".join(f"{label} {node}\n" for node, label in enumerate(self._labels))

    def check_bijection(self) -> bool:
        return (len(self._ids) == len(self._labels)
                and all(self._ids[label] == node for node, label in enumerate(self._labels)))

    def edges_between_groups(self, edges: Iterable[Tuple[int, int]],
                             first: str, second: str) -> List[Tuple[int, int]]:
        """Edges with one endpoint in each group, oriented (first, second)."""
        found = []
        for a, b in edges:
            if self._groups[a] == first and self._groups[b] == second:
                found.append((a, b))
            elif self._groups[a] == second and self._groups[b] == first:
                found.append((b, a))
        return sorted(found)

    def __repr__(self):
        return f"GadgetLayout({self.family}/{self.variant}, n={self.n}, N={self.size})"
