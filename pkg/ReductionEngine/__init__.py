"""
Reduction Engine

OuMv-to-dynamic-graph reductions for matching, s-t distance and densest
subgraph, with exact reference solvers, verifiers and a benchmark harness.
"""

from .src.exceptions import ReductionEngineError
from .src.graph.dynamic_graph import DynamicGraph, UpdateOp
from .src.harness.adapters import AlgorithmAdapter, RecomputeAdapter
from .src.harness.config import HarnessConfig, load_config
from .src.harness.runner import build_driver, run_reduction
from .src.harness.verification import verify_construction
from .src.oumv.instance import BitMatrix, BitVector, OuMvInstance

__version__ = "1.0.0"
__all__ = ["ReductionEngineError", "DynamicGraph", "UpdateOp", "AlgorithmAdapter",
           "RecomputeAdapter", "HarnessConfig", "load_config",
           "build_driver", "run_reduction", "verify_construction", "BitMatrix", "BitVector",
           "OuMvInstance"]
