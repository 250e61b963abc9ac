"""Export a built construction as DOT, an edge list or its layout map."""

import logging
from typing import Optional

from ..gadgets.base import ReductionDriver
from ..graph.io import format_edge_list, to_dot
from ..oumv.instance import OuMvInstance
from .config import HarnessConfig
from .runner import build_driver, prepare_instance

logger = logging.getLogger(__name__)

EXPORT_FORMATS = ("dot", "edges", "map")


def render(driver: ReductionDriver, fmt: str) -> str:
    """Text of ``driver``'s current graph in ``fmt``."""
    layout = driver.layout
    if fmt == "edges":
        return format_edge_list(driver.graph)
    if fmt == "map":
        return layout.to_map_text()
    if fmt == "dot":
        base = getattr(layout, "base", None)
        highlight = base.pairs() if base is not None else ()
        return to_dot(driver.graph, labels=layout.labels(), ranks=layout.layers,
                      groups=layout.groups(), highlight=highlight,
                      name=f"{driver.family}_{driver.variant}")
    raise ValueError(f"Unknown export format: {fmt} (choose from {', '.join(EXPORT_FORMATS)})")


def export_construction(family: str, variant: str, instance: OuMvInstance, fmt: str,
                        config: HarnessConfig, seed: Optional[int] = None,
                        apply_first_pair: bool = False) -> str:
    """
    Build the construction for ``instance`` and render it.

    With ``apply_first_pair`` the first pair's updates are applied, which
    shows the graph in its first queried state.
    """
    prepared = prepare_instance(family, variant, instance)
    driver = build_driver(family, variant, prepared, config.gadget_options(family, seed))
    if apply_first_pair:
        u, v = prepared.pairs[driver.pair_index(0)]
        driver.apply_pair(u, v)
    text = render(driver, fmt)
    logger.info("Exported %s/%s n=%d as %s (%d nodes)", family, variant, prepared.n, fmt,
                driver.graph.node_count)
    return text
