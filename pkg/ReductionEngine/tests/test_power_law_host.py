"""Power-law hosts: alpha choice, make-space, embedding, rewires and padding."""

import math
import random

import pytest

from ReductionEngine.src.exceptions import HostTooSmallError, PowerLawParameterError
from ReductionEngine.src.gadgets.power_law_host import (apply_rewire, build_power_law_host,
                                                        choose_alpha, embed, pad_with_stars,
                                                        pick_rewire_pairs)
from ReductionEngine.src.graph.degrees import PowerLawParams, degree_histogram
from ReductionEngine.src.graph.dynamic_graph import DynamicGraph


@pytest.fixture
def kite():
    """K4 minus one edge: two nodes of degree 2, two of degree 3."""
    graph = DynamicGraph(4)
    graph.add_edges([(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    graph.clear_log()
    return graph


class TestAlpha:
    def test_leaves_room_per_class(self):
        alpha = choose_alpha({1: 3, 2: 1}, 2.5)
        assert alpha == pytest.approx(math.log(max(7, 3 * 2 ** 2.5)) + 1e-6)
        params = PowerLawParams(alpha, 2.5)
        assert params.expected_count(1) >= 7 and params.expected_count(2) >= 3

    def test_exponent_domain(self):
        with pytest.raises(PowerLawParameterError):
            choose_alpha({1: 1}, 2.0)


class TestHost:
    def test_embedding_keeps_the_host_histogram(self, kite):
        required = degree_histogram(kite)
        host = build_power_law_host(required, 2.5, seed=4)
        assert len(host.freed[2]) == 2 and len(host.freed[3]) == 2
        assert all(host.graph.degree(v) == 0 for v in host.freed_nodes)
        embedded = embed(host, kite)
        assert embedded.reduction_size == 4
        assert degree_histogram(embedded.graph) == host.sequence_histogram
        assert all(embedded.graph.has_edge(a, b) for a, b in kite.edges())
        embedded.graph.check_invariants()

    def test_degree_one_demand_uses_trades(self):
        host = build_power_law_host({1: 2, 3: 2}, 2.5, seed=1)
        # each trade turns a degree-3 node into a degree-2 one, which is then freed
        assert len(host.freed[1]) == 2
        assert len(host.freed[2]) == 2
        assert host.freed[3] == []

    def test_seed_is_deterministic(self, kite):
        required = degree_histogram(kite)
        first = build_power_law_host(required, 2.5, seed=11)
        second = build_power_law_host(required, 2.5, seed=11)
        assert first.graph.same_edges(second.graph)
        assert first.freed == second.freed


class TestRewires:
    @pytest.fixture
    def spider(self):
        graph = DynamicGraph(7)
        graph.add_edges([(0, 1), (0, 2), (3, 4), (3, 5), (3, 6)])
        graph.clear_log()
        return graph

    def test_pick_and_apply(self, spider):
        pairs = pick_rewire_pairs(spider, 1, range(7), random.Random(0))
        assert pairs is not None
        a, b, c, d = pairs[0]
        assert (a, b) == (0, 3)
        degrees = spider.degrees()
        assert apply_rewire(spider, pairs[0]) == 3
        assert spider.degree(a) == 1 and spider.degree(b) == 2
        assert spider.degree(c) == degrees[c] and spider.degree(d) == degrees[d]
        assert spider.has_edge(c, d)

    def test_not_enough_pairs(self, spider):
        assert pick_rewire_pairs(spider, 2, range(7), random.Random(0)) is None

    @pytest.fixture
    def path7(self):
        graph = DynamicGraph(7)
        graph.add_edges((k, k + 1) for k in range(6))
        graph.clear_log()
        return graph

    def test_degree_two_partners(self, path7):
        pairs = pick_rewire_pairs(path7, 1, range(7), random.Random(2), b_degree=2)
        assert pairs is not None
        a, b, c, d = pairs[0]
        degrees = path7.degrees()
        apply_rewire(path7, pairs[0])
        assert path7.degree(a) == 1 and path7.degree(b) == 1
        assert path7.degree(c) == degrees[c] and path7.degree(d) == degrees[d]
        assert degree_histogram(path7) == {1: 4, 2: 3}

    def test_excluded_nodes_are_skipped(self, path7):
        assert pick_rewire_pairs(path7, 1, range(7), random.Random(0), b_degree=2,
                                 exclude=[1, 2, 3]) is None


class TestPadding:
    def test_stars_and_matching_complete_the_law(self):
        params = PowerLawParams(math.log(16) + 1e-6, 2.5)
        assert params.expected_histogram() == {1: 16, 2: 2, 3: 1}
        graph, notes = pad_with_stars(DynamicGraph(0), params, {})
        assert degree_histogram(graph) == {1: 15, 2: 2, 3: 1}
        assert notes == ["odd degree-1 remainder: one node left out"]

    def test_core_over_the_law(self):
        core = DynamicGraph(4)
        core.add_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        params = PowerLawParams(math.log(16) + 1e-6, 2.5)
        with pytest.raises(HostTooSmallError):
            pad_with_stars(core, params, degree_histogram(core))
