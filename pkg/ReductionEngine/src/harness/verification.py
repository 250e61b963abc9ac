"""
Structural and behavioural checks of a construction.

``verify_construction`` builds the reduction for a few seeded instances,
watches every single update (degree bound, bipartiteness, expansion
certificate) and checks every queried answer against the invariants the
construction promises, on top of the oracle comparison of the run itself.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from ..exceptions import AdapterError, OracleMismatchError
from ..gadgets import matching_gadgets, stpath_gadgets
from ..gadgets.base import ReductionDriver
from ..graph.degrees import PowerLawParams, check_power_law, degree_histogram
from ..graph.densest import density_of
from ..graph.dynamic_graph import UpdateOp
from ..graph.expansion import expansion_lower_bound_spectral
from ..graph.traversal import is_bipartite
from ..oumv.generators import generate_instance
from ..oumv.instance import BitMatrix, BitVector, OuMvInstance
from .config import HarnessConfig
from .runner import ReductionRun, adapter_for, build_driver, check_family, prepare_instance, run_reduction

logger = logging.getLogger(__name__)

# max degree at every update
DEGREE_BOUNDS = {("matching", "const"): 3, ("st", "const"): 3}
# updates per pair, as a multiple of n
UPDATE_BUDGETS = {
    ("matching", "const"): 6, ("matching", "varying"): 6, ("st", "const"): 6,
    ("st", "approx"): 6, ("st", "varying"): 6,
    ("matching", "expander"): 10, ("st", "expander"): 10,
    ("densest", "const"): 8, ("densest", "expander"): 8,
}
BIPARTITE = {("matching", "const"), ("matching", "varying"), ("st", "const"), ("st", "varying")}
# largest number of host nodes allowed one degree class away from the law
MAX_DEVIATING_NODES = 4


@dataclass
class CheckItem:
    name: str
    passed: bool
    value: object = None
    expected: object = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "value": _plain(self.value),
                "expected": _plain(self.expected), "detail": self.detail}


@dataclass
class VerificationReport:
    """Machine-checkable booleans plus the measured values behind them."""

    family: str
    variant: str
    n: int
    seeds: List[Optional[int]]
    items: List[CheckItem] = field(default_factory=list)
    runs: List[ReductionRun] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def add(self, name: str, passed: bool, value=None, expected=None, detail: str = "") -> CheckItem:
        item = CheckItem(name, bool(passed), value, expected, detail)
        if not item.passed:
            logger.error("%s/%s n=%d: check %s failed (value %s, expected %s) %s", self.family,
                         self.variant, self.n, name, value, expected, detail)
        self.items.append(item)
        return item

    def failures(self) -> List[CheckItem]:
        return [item for item in self.items if not item.passed]

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "family": self.family,
            "variant": self.variant,
            "n": self.n,
            "seeds": self.seeds,
            "passed": self.passed,
            "items": [item.to_dict() for item in self.items],
            "runs": [run.to_dict(timings) for run in self.runs],
        }


def _plain(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


class UpdateWatch:
    """Observer run after every update of a reduction run."""

    def __init__(self, bipartite: bool = False, spectral: bool = False,
                 config: Optional[HarnessConfig] = None):
        self.bipartite = bipartite
        self.spectral = spectral
        self.config = config or HarnessConfig()
        self.max_degree = 0
        self.bipartite_violations = 0
        self.min_certificate: Optional[float] = None
        self.updates = 0

    def start(self, driver: ReductionDriver):
        degrees = driver.graph.degrees()
        self.max_degree = max(self.max_degree, max(degrees, default=0))
        self._inspect(driver)

    def _inspect(self, driver: ReductionDriver):
        graph = driver.graph
        if self.bipartite and not is_bipartite(graph)[0]:
            self.bipartite_violations += 1
        if self.spectral:
            bound = expansion_lower_bound_spectral(graph, self.config.spectral_tolerance,
                                                   self.config.dense_cutoff).as_float()
            self.min_certificate = bound if self.min_certificate is None else min(self.min_certificate, bound)

    def __call__(self, driver: ReductionDriver, op: UpdateOp):
        self.updates += 1
        graph = driver.graph
        self.max_degree = max(self.max_degree, graph.degree(op.a), graph.degree(op.b))
        self._inspect(driver)


def _reduction_nodes(driver: ReductionDriver) -> int:
    """Nodes the closed-form count covers: no dummies, hosts or padding."""
    layout = driver.layout
    if driver.variant == "powerlaw":
        return layout.reduction_size
    return sum(1 for v in range(layout.size) if not layout.group(v).endswith("_dummy"))


def _structural_checks(report: VerificationReport, driver: ReductionDriver, config: HarnessConfig,
                       seed: Optional[int]):
    family, variant = driver.family, driver.variant
    graph, layout = driver.graph, driver.layout
    expected = driver.expected_nodes
    if expected is None:
        expected = driver.summary().get("expected_N")
    report.add("node_count", _reduction_nodes(driver) == expected, _reduction_nodes(driver), expected)
    report.add("layout_bijection", layout.check_bijection() and layout.size == graph.node_count,
               layout.size, graph.node_count)
    certificate = getattr(layout, "certificate", None)
    if certificate is not None:
        report.add("build_certificate", certificate.as_float() > 0, certificate.as_float(), "> 0")
    if family == "st" and variant == "approx":
        t1, t0 = layout.params["T1"], layout.params["T0"]
        report.add("approx_gap", t0 >= (3 - config.delta) * t1, f"{t0}/{t1}", f">= {3 - config.delta}")
    if variant == "powerlaw":
        _power_law_checks(report, driver, config, seed)


def _all_ones(n: int) -> OuMvInstance:
    ones = BitVector.ones(n)
    return OuMvInstance(BitMatrix.ones(n), tuple((ones, ones) for _ in range(n)))


def _power_law_checks(report: VerificationReport, driver: ReductionDriver, config: HarnessConfig,
                      seed: Optional[int]):
    layout, graph = driver.layout, driver.graph
    params = PowerLawParams(float(layout.params["alpha"]), float(layout.params["beta"]),
                            "additive", c=config.host_slack)
    law = check_power_law(degree_histogram(graph), params)
    report.add("power_law_additive", law.passed and law.deviating_nodes <= MAX_DEVIATING_NODES,
               law.to_dict(), f"c={config.host_slack}, <= {MAX_DEVIATING_NODES} deviating nodes")
    n = layout.n
    if driver.family in ("matching", "st"):
        module = matching_gadgets if driver.family == "matching" else stpath_gadgets
        if driver.family == "matching" or n >= 2:
            table = module.left_degree_table(graph, layout)
            expected = module.expected_left_table(n)
            report.add("left_degree_table", table == expected, table, expected)
        if driver.family == "matching":
            _query_histogram_check(report, driver)
    elif driver.family == "densest":
        core = degree_histogram(graph, range(layout.reduction_size))
        d, k, big = layout.d, layout.k, layout.big
        wanted = {2: 4 * n * n + 8 * n, 2 * d: n * n * big + 2 * n * (k - n), 2 * d + 1: 2 * n * n}
        report.add("core_histogram", core == wanted, core, wanted)


def _query_histogram_check(report: VerificationReport, driver: ReductionDriver):
    """Vector ones plus their rewires leave the whole histogram unchanged while queried."""
    state, n = driver.state, driver.layout.n
    base = degree_histogram(state.graph)
    ones, zeros = BitVector.ones(n), BitVector.zeros(n)
    pairs = [(ones, ones), (BitVector.unit(n, n), zeros), (zeros, BitVector.unit(n, n)),
             (BitVector.unit(n, 1), BitVector.unit(n, 1))]
    drifted = []
    for u, v in pairs:
        matching_gadgets.apply_pair_powerlaw_matching(state, u, v)
        if degree_histogram(state.graph) != base:
            drifted.append(f"{u.to_string()}/{v.to_string()}")
        matching_gadgets.rollback_powerlaw_matching(state)
    report.add("query_histogram", not drifted, len(pairs) - len(drifted), len(pairs),
               ", ".join(drifted))


def _gadget_density_checks(report: VerificationReport, family: str, variant: str, n: int,
                           config: HarnessConfig, seed: Optional[int]):
    """Every gadget on its own: vectors have density d, matrix gadgets d - 1/K."""
    driver = build_driver(family, variant, _all_ones(n), config.gadget_options(family, seed))
    layout = driver.layout
    wrong = []
    for key, nodes in sorted(layout.gadgets.items()):
        wanted = Fraction(layout.d) if key[0] in ("U", "V") else layout.d - Fraction(1, layout.big)
        density = density_of(driver.graph, nodes)
        if density != wanted:
            wrong.append((key, density, wanted))
    report.add("gadget_densities", not wrong, len(layout.gadgets) - len(wrong), len(layout.gadgets),
               "; ".join(f"{key}: {density} != {wanted}" for key, density, wanted in wrong[:5]))
    threshold = layout.d + Fraction(1, layout.big + 2 * layout.k)
    report.add("density_threshold", layout.threshold == threshold, layout.threshold, threshold)


def _answer_checks(report: VerificationReport, driver: ReductionDriver, run: ReductionRun,
                   seed: Optional[int]):
    family, variant, layout = driver.family, driver.variant, driver.layout
    bad = []
    if family == "matching" and variant != "powerlaw":
        full = layout.full_matching_size
        for pair in run.pairs:
            if pair.answer not in (full - 1, full) or (pair.answer == full) != bool(pair.oracle):
                bad.append(pair.index)
        report.add(f"matching_dichotomy[seed={seed}]", not bad, bad, f"{{{full - 1}, {full}}}")
    elif family == "st" and variant in ("const", "expander", "varying"):
        floor = layout.threshold
        for pair in run.pairs:
            # s and t fall apart when u or v is all zeros
            reached = pair.answer != "inf"
            if (reached and pair.answer < floor) or (pair.answer == floor) != bool(pair.oracle):
                bad.append(pair.index)
        report.add(f"distance_floor[seed={seed}]", not bad, bad, floor)
    elif family in ("decremental", "incremental"):
        for k, pair in enumerate(run.pairs):
            j = pair.index + 1
            if variant == "st":
                floor = driver.state.thresholds[j] if family == "decremental" else driver.replay.thresholds[k]
                ok = pair.answer == "inf" or pair.answer >= floor
                ok = ok and (pair.answer == floor) == bool(pair.oracle)
            else:
                unmatched = driver.graph.node_count - 2 * pair.answer
                ok = unmatched in (4 * j - 2, 4 * j) and (unmatched == 4 * j - 2) == bool(pair.oracle)
            if not ok:
                bad.append(pair.index)
        report.add(f"round_answers[seed={seed}]", not bad, bad)


def verify_construction(family: str, variant: str, n: int, config: HarnessConfig,
                        seeds: Optional[Sequence[int]] = None,
                        trials: Optional[int] = None) -> VerificationReport:
    """
    Run every check that applies to ``family``/``variant`` at dimension ``n``.

    Deterministic given the seeds: ``trials`` consecutive seeds from
    ``config.seed`` unless ``seeds`` is given.
    """
    check_family(family, variant)
    trials = config.trials if trials is None else trials
    if seeds is None:
        base = config.seed or 0
        seeds = [base + k for k in range(trials)]
    report = VerificationReport(family, variant, n, list(seeds))
    key = (family, variant)
    min_certificate = None
    for position, seed in enumerate(seeds):
        instance = prepare_instance(family, variant, generate_instance(n, config.mode, seed))
        driver = build_driver(family, variant, instance, config.gadget_options(family, seed))
        if position == 0:
            _structural_checks(report, driver, config, seed)
            if family == "densest" and variant == "const":
                _gadget_density_checks(report, family, variant, instance.n, config, seed)
        watch = UpdateWatch(bipartite=key in BIPARTITE, spectral=variant == "expander", config=config)
        watch.start(driver)
        adapter = adapter_for(config)
        try:
            run = run_reduction(driver, instance, adapter, seed, observer=watch, original_n=n)
        except (OracleMismatchError, AdapterError) as e:
            report.add(f"oracle[seed={seed}]", False, str(e))
            continue
        report.runs.append(run)
        report.add(f"oracle[seed={seed}]", run.passed, run.mismatches, 0)
        report.add(f"one_query_per_pair[seed={seed}]", all(p.queries == 1 for p in run.pairs),
                   run.total_queries, len(run.pairs))
        _answer_checks(report, driver, run, seed)
        if key in DEGREE_BOUNDS:
            report.add(f"max_degree[seed={seed}]", watch.max_degree <= DEGREE_BOUNDS[key],
                       watch.max_degree, DEGREE_BOUNDS[key])
        elif family == "densest" and variant == "const":
            bound = 2 * driver.layout.d + 1
            report.add(f"max_degree[seed={seed}]", watch.max_degree <= bound, watch.max_degree, bound)
        elif variant == "varying":
            scale = instance.n ** (2 * config.t / (config.t + 1))
            report.add(f"max_degree[seed={seed}]", True, watch.max_degree,
                       detail=f"fitted c = {watch.max_degree / scale:.4f}")
        if key in BIPARTITE:
            report.add(f"bipartite[seed={seed}]", watch.bipartite_violations == 0,
                       watch.bipartite_violations, 0)
        if watch.min_certificate is not None:
            min_certificate = (watch.min_certificate if min_certificate is None
                               else min(min_certificate, watch.min_certificate))
        per_n = run.max_updates_per_pair / instance.n
        if key in UPDATE_BUDGETS:
            report.add(f"update_budget[seed={seed}]", per_n <= UPDATE_BUDGETS[key],
                       run.max_updates_per_pair, UPDATE_BUDGETS[key] * instance.n)
        else:
            report.add(f"update_budget[seed={seed}]", True, run.max_updates_per_pair,
                       detail=f"c = {per_n:.3f}")
    if min_certificate is not None:
        report.add("min_certificate", min_certificate > 0, min_certificate, "> 0")
    logger.info("Verified %s/%s n=%d: %d checks, %d failed", family, variant, n,
                len(report.items), len(report.failures()))
    return report
