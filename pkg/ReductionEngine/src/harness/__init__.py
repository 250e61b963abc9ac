"""Adapters, the reduction loop, verification, benchmarks and reports."""

from .adapters import (ADAPTERS, AlgorithmAdapter, FaultyAdapter, RecomputeAdapter,
                       RecomputeBFSAdapter, RecomputeDensestAdapter, RecomputeMatchingAdapter,
                       ScaledDistanceAdapter, make_adapter)
from .bench import BENCH_COLUMNS, TIMING_COLUMNS, ScalingFit, bench, fit_update_scaling
from .config import HarnessConfig, load_config, parse_config_text, parse_value
from .export import EXPORT_FORMATS, export_construction, render
from .reports import VERIFY_COLUMNS, to_csv, to_json, verify_rows, write_text
from .runner import (FAMILIES, Cell, PairRecord, ReductionRun, build_driver, make_cells,
                     prepare_instance, run_cell, run_cells, run_reduction)
from .verification import CheckItem, UpdateWatch, VerificationReport, verify_construction

__all__ = [
    "ADAPTERS", "AlgorithmAdapter", "FaultyAdapter", "RecomputeAdapter", "RecomputeBFSAdapter",
    "RecomputeDensestAdapter", "RecomputeMatchingAdapter", "ScaledDistanceAdapter", "make_adapter",
    "BENCH_COLUMNS", "TIMING_COLUMNS", "ScalingFit", "bench", "fit_update_scaling",
    "HarnessConfig", "load_config", "parse_config_text", "parse_value",
    "EXPORT_FORMATS", "export_construction", "render",
    "VERIFY_COLUMNS", "to_csv", "to_json", "verify_rows", "write_text",
    "FAMILIES", "Cell", "PairRecord", "ReductionRun", "build_driver", "make_cells",
    "prepare_instance", "run_cell", "run_cells", "run_reduction",
    "CheckItem", "UpdateWatch", "VerificationReport", "verify_construction",
]
