"""
The reduction loop.

For every OuMv pair the driver issues its updates, the adapter (fed the same
updates) answers exactly one query, the driver decodes the answer and the
bit is compared against the brute-force oracle. The first disagreement
aborts the run with a reproduction dump.
"""

import logging
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..exceptions import AdapterError, GadgetConstructionError, OracleMismatchError
from ..gadgets.base import ReductionDriver
from ..gadgets.densest_gadgets import DENSE_VARIANTS, make_dense_driver
from ..gadgets.matching_gadgets import MATCHING_VARIANTS, make_matching_driver
from ..gadgets.partial_gadgets import PARTIAL_VARIANTS, make_partial_driver
from ..gadgets.stpath_gadgets import ST_VARIANTS, make_st_driver
from ..graph.dynamic_graph import UpdateOp
from ..oumv.generators import generate_instance
from ..oumv.instance import OuMvInstance, pad_to_power_of_two
from ..oumv.text_format import format_instance
from .adapters import AlgorithmAdapter, ScaledDistanceAdapter, make_adapter
from .config import HarnessConfig

logger = logging.getLogger(__name__)

FAMILIES: Dict[str, Tuple[str, ...]] = {
    "matching": MATCHING_VARIANTS,
    "st": ST_VARIANTS,
    "densest": DENSE_VARIANTS,
    "decremental": PARTIAL_VARIANTS,
    "incremental": PARTIAL_VARIANTS,
}

# families whose trees need n to be a power of two
_POWER_OF_TWO = {("st", v) for v in ST_VARIANTS} | {("decremental", "st"), ("incremental", "st")}


def check_family(family: str, variant: str):
    if family not in FAMILIES:
        raise ValueError(f"Unknown family: {family} (choose from {', '.join(FAMILIES)})")
    if variant not in FAMILIES[family]:
        raise ValueError(f"Unknown {family} variant: {variant} "
                         f"(choose from {', '.join(FAMILIES[family])})")


def prepare_instance(family: str, variant: str, instance: OuMvInstance) -> OuMvInstance:
    """Pad to a power of two where the construction needs it; bits are preserved."""
    if (family, variant) in _POWER_OF_TWO:
        return pad_to_power_of_two(instance)
    return instance


def build_driver(family: str, variant: str, instance: OuMvInstance,
                 options: Optional[Dict] = None) -> ReductionDriver:
    """Construct the driver for ``family``/``variant`` on an already prepared instance."""
    check_family(family, variant)
    options = dict(options or {})
    if family == "matching":
        return make_matching_driver(variant, instance.matrix, options)
    if family == "st":
        return make_st_driver(variant, instance.matrix, options)
    if family == "densest":
        return make_dense_driver(variant, instance.matrix, options)
    return make_partial_driver(family, variant, instance, options)


@dataclass
class PairRecord:
    index: int
    updates: int
    queries: int
    answer: object
    bit: int
    oracle: int

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "updates": self.updates,
            "queries": self.queries,
            "answer": self.answer,
            "bit": self.bit,
            "oracle": self.oracle,
        }


@dataclass
class ReductionRun:
    """Outcome of one (family, variant, instance, seed) run."""

    family: str
    variant: str
    n: int
    padded_n: int
    seed: Optional[int]
    summary: Dict = field(default_factory=dict)
    pairs: List[PairRecord] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def key(self) -> Tuple:
        return (self.family, self.variant, self.n, -1 if self.seed is None else self.seed)

    @property
    def total_updates(self) -> int:
        return sum(p.updates for p in self.pairs)

    @property
    def total_queries(self) -> int:
        return sum(p.queries for p in self.pairs)

    @property
    def max_updates_per_pair(self) -> int:
        return max((p.updates for p in self.pairs), default=0)

    @property
    def mismatches(self) -> int:
        return sum(1 for p in self.pairs if p.bit != p.oracle)

    @property
    def passed(self) -> bool:
        return self.mismatches == 0 and all(p.queries == 1 for p in self.pairs)

    def to_dict(self, timings: bool = False) -> dict:
        data = {
            "family": self.family,
            "variant": self.variant,
            "n": self.n,
            "padded_n": self.padded_n,
            "seed": self.seed,
            "summary": self.summary,
            "pairs": [p.to_dict() for p in self.pairs],
            "total_updates": self.total_updates,
            "total_queries": self.total_queries,
            "max_updates_per_pair": self.max_updates_per_pair,
            "mismatches": self.mismatches,
            "passed": self.passed,
        }
        if timings:
            data["timings"] = dict(self.timings)
        return data


def run_reduction(driver: ReductionDriver, instance: OuMvInstance, adapter: AlgorithmAdapter,
                  seed: Optional[int] = None,
                  observer: Optional[Callable[[ReductionDriver, UpdateOp], None]] = None,
                  original_n: Optional[int] = None) -> ReductionRun:
    """
    Play every pair of ``instance`` through ``driver`` and ``adapter``.

    Args:
        driver: freshly built construction for ``instance``.
        adapter: answers the queries; it is initialised from the driver's graph.
        observer: called after every single update with the driver and the op.
        original_n: dimension before padding, for the report.

    Raises:
        OracleMismatchError: a decoded bit disagrees with the oracle.
        AdapterError: the adapter failed; the message names the pair.
    """
    graph = driver.graph
    start = len(graph.update_log)
    run = ReductionRun(driver.family, driver.variant, original_n or instance.n, instance.n, seed,
                       summary=driver.summary())
    adapter.init(graph, driver.layout)
    forward = adapter.apply
    graph.add_listener(forward)
    if observer is not None:
        def watch(op):
            observer(driver, op)
        graph.add_listener(watch)
    update_time = query_time = 0.0
    try:
        for k in range(instance.n):
            index = driver.pair_index(k)
            u, v = instance.pairs[index]
            oracle = instance.truth[index]
            try:
                clock = time.perf_counter()
                updates = driver.apply_pair(u, v)
                update_time += time.perf_counter() - clock
                clock = time.perf_counter()
                before = adapter.queries
                answer = adapter.query(driver.query_kind, **driver.query_args())
                queries = adapter.queries - before
                query_time += time.perf_counter() - clock
                bit = driver.decide(answer)
                clock = time.perf_counter()
                updates += driver.finish_pair()
                update_time += time.perf_counter() - clock
            except AdapterError as e:
                logger.error("Adapter failed on pair %d of %s/%s: %s", index, driver.family,
                             driver.variant, e)
                raise AdapterError(f"Pair {index} of {driver.family}/{driver.variant} "
                                   f"n={instance.n}: {e}") from e
            run.pairs.append(PairRecord(index, updates, queries, _plain(answer), bit, oracle))
            if bit != oracle:
                prefix = [op.to_string() for op in graph.update_log[start:]]
                message = (f"{driver.family}/{driver.variant} n={instance.n}: pair {index} decoded "
                           f"{bit}, oracle says {oracle} (answer {_plain(answer)})")
                logger.error(message)
                raise OracleMismatchError(message, format_instance(instance), prefix)
    finally:
        graph.remove_listener(forward)
        if observer is not None:
            graph.remove_listener(watch)
    run.timings = {"update_s": update_time, "query_s": query_time}
    logger.info("%s/%s n=%d: %d pairs, %d updates, %d queries", run.family, run.variant, run.n,
                len(run.pairs), run.total_updates, run.total_queries)
    return run


def _plain(answer):
    """JSON-friendly answer: fractions as ``p/q``, infinity as a string."""
    if hasattr(answer, "denominator") and not isinstance(answer, int):
        return f"{answer.numerator}/{answer.denominator}"
    if isinstance(answer, float):
        if answer == float("inf"):
            return "inf"
        if answer.is_integer():
            return int(answer)
    return answer


def adapter_for(config: HarnessConfig, name: Optional[str] = None,
                factor: Optional[float] = None) -> AlgorithmAdapter:
    """Adapter named in the config; ``scaled-bfs`` picks up a factor below 3 - delta."""
    name = name or config.adapter
    if name == "scaled-bfs":
        if factor is None:
            factor = max(1.0, (3.0 - config.delta) - 0.5)
        return ScaledDistanceAdapter(factor)
    return make_adapter(name)


@dataclass(frozen=True)
class Cell:
    """One independent unit of work, owned by a single worker."""

    family: str
    variant: str
    n: int
    seed: Optional[int]

    @property
    def key(self) -> Tuple:
        return (self.family, self.variant, self.n, -1 if self.seed is None else self.seed)


def run_cell(cell: Cell, config: HarnessConfig,
             instance: Optional[OuMvInstance] = None) -> ReductionRun:
    """Generate (or take) the instance, build, run; deterministic for a fixed seed."""
    check_family(cell.family, cell.variant)
    if instance is None:
        instance = generate_instance(cell.n, config.mode, cell.seed)
    prepared = prepare_instance(cell.family, cell.variant, instance)
    clock = time.perf_counter()
    driver = build_driver(cell.family, cell.variant, prepared,
                          config.gadget_options(cell.family, cell.seed))
    build_time = time.perf_counter() - clock
    adapter = adapter_for(config)
    if cell.family == "st" and cell.variant == "approx" and config.adapter == "scaled-bfs":
        driver.approximate = True
    run = run_reduction(driver, prepared, adapter, cell.seed, original_n=instance.n)
    run.timings["build_s"] = build_time
    return run


def _run_cell_args(args) -> ReductionRun:
    return run_cell(*args)


def run_cells(cells: Sequence[Cell], config: HarnessConfig,
              workers: Optional[int] = None) -> List[ReductionRun]:
    """
    Run independent cells, in a process pool when more than one worker is asked for.

    Results are merged sorted by (family, variant, n, seed) so reports do not
    depend on completion order.
    """
    workers = config.workers if workers is None else workers
    ordered = sorted(cells, key=lambda c: c.key)
    if workers > 1 and len(ordered) > 1:
        with Pool(processes=min(workers, len(ordered))) as pool:
            runs = pool.map(_run_cell_args, [(cell, config) for cell in ordered])
    else:
        runs = [run_cell(cell, config) for cell in ordered]
    return sorted(runs, key=lambda r: r.key)


def make_cells(family: str, variant: str, n_values: Sequence[int], seed: Optional[int],
               trials: int = 1) -> List[Cell]:
    """``trials`` consecutive seeds per n, starting at ``seed``."""
    check_family(family, variant)
    if trials < 1:
        raise ValueError(f"Trials must be positive, got {trials}")
    base = 0 if seed is None else seed
    return [Cell(family, variant, n, base + trial) for n in n_values for trial in range(trials)]


def fresh_driver(family: str, variant: str, n: int, config: HarnessConfig,
                 seed: Optional[int]) -> Tuple[ReductionDriver, OuMvInstance]:
    """Build a driver on an all-zero instance, for structural checks and exports."""
    instance = prepare_instance(family, variant, generate_instance(n, "planted_zero", seed))
    try:
        return build_driver(family, variant, instance, config.gadget_options(family, seed)), instance
    except GadgetConstructionError:
        logger.error("Could not build %s/%s for n=%d", family, variant, n)
        raise
