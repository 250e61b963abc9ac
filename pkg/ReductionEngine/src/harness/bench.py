"""
Descriptive benchmarks: sizes, update and query counts per n.

Counts are deterministic for a fixed seed; wall times are collected but
only reported when asked for.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from .config import HarnessConfig
from .runner import ReductionRun, make_cells, run_cells

logger = logging.getLogger(__name__)

BENCH_COLUMNS = ["family", "variant", "n", "padded_n", "seed", "N", "m", "pairs",
                 "total_updates", "total_queries", "max_updates_per_pair", "mismatches"]
TIMING_COLUMNS = ["build_s", "update_s", "query_s"]


def bench_row(run: ReductionRun) -> Dict[str, object]:
    return {
        "family": run.family,
        "variant": run.variant,
        "n": run.n,
        "padded_n": run.padded_n,
        "seed": run.seed,
        "N": run.summary.get("N"),
        "m": run.summary.get("m"),
        "pairs": len(run.pairs),
        "total_updates": run.total_updates,
        "total_queries": run.total_queries,
        "max_updates_per_pair": run.max_updates_per_pair,
        "mismatches": run.mismatches,
        "build_s": run.timings.get("build_s", 0.0),
        "update_s": run.timings.get("update_s", 0.0),
        "query_s": run.timings.get("query_s", 0.0),
    }


@dataclass
class ScalingFit:
    """Least-squares fit of updates per pair against n on log-log axes."""

    exponent: float
    coefficient: float
    points: int

    def to_dict(self) -> dict:
        return {"exponent": round(self.exponent, 6), "coefficient": round(self.coefficient, 6),
                "points": self.points}


def fit_update_scaling(rows: Sequence[Dict[str, object]]) -> Optional[ScalingFit]:
    """
    Fit updates-per-pair ~ c * n^e.

    Returns None with fewer than two distinct n or when some row issued no
    updates at all.
    """
    points = {}
    for row in rows:
        pairs = int(row["pairs"]) or 1
        points.setdefault(int(row["padded_n"]), []).append(int(row["total_updates"]) / pairs)
    if len(points) < 2 or any(min(v) <= 0 for v in points.values()):
        return None
    ns = np.array(sorted(points), dtype=float)
    per_pair = np.array([np.mean(points[int(n)]) for n in ns])
    exponent, intercept = np.polyfit(np.log(ns), np.log(per_pair), 1)
    return ScalingFit(float(exponent), float(math.exp(intercept)), len(ns))


def bench(family: str, variant: str, n_values: Sequence[int], config: HarnessConfig,
          seed: Optional[int] = None, trials: int = 1,
          workers: Optional[int] = None) -> List[Dict[str, object]]:
    """One row per (n, seed) cell, sorted by the cell key."""
    if not n_values:
        raise ValueError("Benchmark needs at least one n")
    seed = config.seed if seed is None else seed
    cells = make_cells(family, variant, sorted(set(n_values)), seed, trials)
    runs = run_cells(cells, config, workers)
    rows = [bench_row(run) for run in runs]
    fit = fit_update_scaling(rows)
    if fit is not None:
        logger.info("%s/%s updates per pair ~ %.3f * n^%.3f", family, variant, fit.coefficient,
                    fit.exponent)
    return rows
