"""
Degree statistics and dynamic power-law checking.

Expected counts follow N_d = floor(e^alpha / d^beta). The relaxed variants
accept a range per degree: beta_varying between the two exponents,
additive(c) within +-c on realisable degrees, multiplicative(eps) within a
factor of (1 + eps).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from ..exceptions import PowerLawParameterError
from .dynamic_graph import DynamicGraph

logger = logging.getLogger(__name__)

POWER_LAW_VARIANTS = ("exact", "beta_varying", "additive", "multiplicative")


@dataclass
class DegreeStats:
    max_degree: int
    histogram: Dict[int, int]

    def to_dict(self) -> dict:
        return {"max_degree": self.max_degree,
                "histogram": {str(d): c for d, c in sorted(self.histogram.items())}}


def degree_stats(graph: DynamicGraph) -> DegreeStats:
    histogram: Dict[int, int] = {}
    for degree in graph.degrees():
        histogram[degree] = histogram.get(degree, 0) + 1
    return DegreeStats(max(histogram) if histogram else 0, dict(sorted(histogram.items())))


def degree_histogram(graph: DynamicGraph, nodes=None) -> Dict[int, int]:
    histogram: Dict[int, int] = {}
    for v in (nodes if nodes is not None else graph.nodes()):
        d = graph.degree(v)
        histogram[d] = histogram.get(d, 0) + 1
    return dict(sorted(histogram.items()))


def zeta(beta: float, terms: int = 100000) -> float:
    """Riemann zeta for beta > 1: partial sum plus the integral tail estimate."""
    if beta <= 1:
        raise PowerLawParameterError(f"zeta diverges for beta <= 1, got {beta}")
    partial = math.fsum(1.0 / k ** beta for k in range(1, terms + 1))
    tail = terms ** (1.0 - beta) / (beta - 1.0) - 0.5 * terms ** (-beta)
    return partial + tail


@dataclass(frozen=True)
class PowerLawParams:
    """
    (alpha, beta) power law plus the slack variant used when checking.

    Attributes:
        alpha: log of the degree-1 scale, N_d = floor(e^alpha / d^beta).
        beta: exponent, must exceed 2.
        variant: one of exact, beta_varying, additive, multiplicative.
        beta1, beta2: exponent interval for beta_varying.
        c: additive slack.
        epsilon: multiplicative slack.
    """

    alpha: float
    beta: float
    variant: str = "exact"
    beta1: Optional[float] = None
    beta2: Optional[float] = None
    c: int = 0
    epsilon: float = 0.0

    def __post_init__(self):
        if self.beta <= 2:
            raise PowerLawParameterError(f"Power-law exponent must exceed 2, got {self.beta}")
        if self.variant not in POWER_LAW_VARIANTS:
            raise PowerLawParameterError(f"Unsupported power-law variant: {self.variant}")
        if self.variant == "beta_varying":
            if self.beta1 is None or self.beta2 is None or min(self.beta1, self.beta2) <= 2:
                raise PowerLawParameterError("beta_varying needs beta1, beta2 > 2")
        if self.variant == "additive" and self.c < 0:
            raise PowerLawParameterError(f"Additive slack must be non-negative, got {self.c}")
        if self.variant == "multiplicative" and self.epsilon < 0:
            raise PowerLawParameterError(f"Multiplicative slack must be non-negative, got {self.epsilon}")

    def expected_count(self, degree: int, beta: Optional[float] = None) -> int:
        exponent = self.beta if beta is None else beta
        # floor with a guard against e^alpha landing a hair below an integer
        return int(math.floor(math.exp(self.alpha) / degree ** exponent + 1e-9))

    def max_realisable_degree(self, beta: Optional[float] = None) -> int:
        exponent = self.beta if beta is None else beta
        degree = 1
        while self.expected_count(degree + 1, exponent) >= 1:
            degree += 1
        return degree

    def expected_histogram(self) -> Dict[int, int]:
        return {d: self.expected_count(d) for d in range(1, self.max_realisable_degree() + 1)}

    def bounds(self, degree: int) -> Tuple[float, float]:
        """Accepted [low, high] node count for ``degree``."""
        base = self.expected_count(degree)
        if self.variant == "exact":
            return base, base
        if self.variant == "beta_varying":
            first = self.expected_count(degree, self.beta1)
            second = self.expected_count(degree, self.beta2)
            return min(first, second), max(first, second)
        if self.variant == "additive":
            return base - self.c, base + self.c
        return base / (1.0 + self.epsilon), base * (1.0 + self.epsilon)

    def with_variant(self, variant: str, **kwargs) -> "PowerLawParams":
        return PowerLawParams(self.alpha, self.beta, variant, **kwargs)


@dataclass
class PowerLawReport:
    variant: str
    passed: bool
    failing_degrees: List[int] = field(default_factory=list)
    deviating_degrees: List[int] = field(default_factory=list)
    deviating_nodes: int = 0
    violating_nodes: int = 0

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "passed": self.passed,
            "failing_degrees": self.failing_degrees,
            "deviating_degrees": self.deviating_degrees,
            "deviating_nodes": self.deviating_nodes,
            "violating_nodes": self.violating_nodes,
        }


def check_power_law(histogram: Mapping[int, int], params: PowerLawParams) -> PowerLawReport:
    """
    Compare a degree histogram against the selected power-law variant.

    Degree 0 is ignored. ``deviating_*`` counts departures from the exact
    law (half the total absolute difference gives the number of nodes that
    sit one class away); ``violating_nodes`` counts nodes outside the variant's
    accepted range. The additive variant only checks realisable degrees.
    """
    top = max([d for d in histogram if d > 0] + [params.max_realisable_degree()])
    if params.variant == "beta_varying":
        top = max(top, params.max_realisable_degree(params.beta1),
                  params.max_realisable_degree(params.beta2))
    realisable = params.max_realisable_degree()
    failing, deviating = [], []
    total_difference = 0
    violating = 0
    for degree in range(1, top + 1):
        count = histogram.get(degree, 0)
        expected = params.expected_count(degree)
        if count != expected:
            deviating.append(degree)
            total_difference += abs(count - expected)
        if params.variant == "additive" and degree > realisable:
            continue
        low, high = params.bounds(degree)
        if count < low or count > high:
            failing.append(degree)
            violating += int(max(low - count, count - high, 0))
    report = PowerLawReport(params.variant, not failing, failing, deviating,
                            (total_difference + 1) // 2, violating)
    if failing:
        logger.warning("Power-law check (%s) failed on degrees %s", params.variant, failing)
    return report
