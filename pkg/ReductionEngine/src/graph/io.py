"""Edge-list text format and Graphviz DOT export."""

from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .dynamic_graph import DynamicGraph


def format_edge_list(graph: DynamicGraph) -> str:
    """``N m`` header, then one ``a b`` line per edge in sorted order."""
    lines = [f"{graph.node_count} {graph.edge_count}"]
    lines.extend(f"{a} {b}" for a, b in graph.edges())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> DynamicGraph:
    lines = [line.strip() for line in text.splitlines()
             if line.strip() and not line.startswith("#")]
    if not lines:
        raise ValueError("Empty edge list")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"Line 1: expected 'N m' header, got {lines[0]!r}")
    node_count, edge_count = int(header[0]), int(header[1])
    if len(lines) - 1 != edge_count:
        raise ValueError(f"Header announces {edge_count} edges, found {len(lines) - 1}")
    graph = DynamicGraph(node_count)
    for line_number, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"Line {line_number}: expected 'a b', got {line!r}")
        graph.insert_edge(int(parts[0]), int(parts[1]))
    graph.clear_log()
    return graph


def write_edge_list(graph: DynamicGraph, path) -> None:
    with open(Path(path), "w") as f:
        f.write(format_edge_list(graph))


def read_edge_list(path) -> DynamicGraph:
    file_path = Path(path)
    try:
        with open(file_path, "r") as f:
            return parse_edge_list(f.read())
    except FileNotFoundError:
        raise FileNotFoundError(f"Edge list not found: {file_path}")


_PALETTE = ["lightblue", "lightsalmon", "palegreen", "khaki", "plum",
            "lightgray", "lightpink", "aquamarine", "wheat", "thistle"]


def to_dot(graph: DynamicGraph,
           labels: Optional[Mapping[int, str]] = None,
           ranks: Optional[Mapping[int, int]] = None,
           groups: Optional[Mapping[int, str]] = None,
           highlight: Iterable[Tuple[int, int]] = (),
           name: str = "reduction") -> str:
    """
    Render the graph as an undirected DOT document.

    Args:
        labels: node id -> display label (e.g. ``L4[2,1]``).
        ranks: node id -> layer; nodes sharing a layer are emitted in the
            same ``rank=same`` block.
        groups: node id -> group name; each group gets a fill colour.
        highlight: edges drawn bold red (base matchings).
    """
    colours: Dict[str, str] = {}
    lines = [f"graph {name} {{", "  node [shape=circle, style=filled, fontsize=9];"]
    for v in graph.nodes():
        attributes = []
        if labels and v in labels:
            attributes.append(f'label="{labels[v]}"')
        if groups and v in groups:
            group = groups[v]
            if group not in colours:
                colours[group] = _PALETTE[len(colours) % len(_PALETTE)]
            attributes.append(f'fillcolor="{colours[group]}"')
        lines.append(f"  {v} [{', '.join(attributes)}];" if attributes else f"  {v};")
    if ranks:
        layers: Dict[int, List[int]] = {}
        for v, layer in ranks.items():
            layers.setdefault(layer, []).append(v)
        for layer in sorted(layers):
            members = " ".join(str(v) for v in sorted(layers[layer]))
            lines.append(f"  {{ rank=same; {members} }}")
    bold = {(min(a, b), max(a, b)) for a, b in highlight}
    for a, b in graph.edges():
        if (a, b) in bold:
            lines.append(f"  {a} -- {b} [color=red, penwidth=2];")
        else:
            lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
