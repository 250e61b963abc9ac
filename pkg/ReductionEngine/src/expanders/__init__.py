"""Constant-degree expander generation and overlays."""

from .factory import (MAX_ATTEMPTS, ExpanderSpec, OverlayResult, build_expander, derive_seed,
                      effective_degree, overlay_expander)

__all__ = [
    "MAX_ATTEMPTS", "ExpanderSpec", "OverlayResult", "build_expander", "derive_seed",
    "effective_degree", "overlay_expander",
]
