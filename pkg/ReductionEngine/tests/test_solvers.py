"""Reference solvers cross-checked against networkx and brute force."""

from fractions import Fraction

import networkx as nx
import pytest

from ReductionEngine.src.exceptions import ExpansionCapError, InvalidMatchingError
from ReductionEngine.src.graph.degrees import PowerLawParams, check_power_law, degree_histogram, zeta
from ReductionEngine.src.graph.densest import (densest_subgraph, densest_subgraph_bruteforce,
                                               density_of, has_denser_subgraph)
from ReductionEngine.src.graph.dynamic_graph import DynamicGraph
from ReductionEngine.src.graph.expansion import edge_expansion_exact, expansion_lower_bound_spectral
from ReductionEngine.src.graph.flow import FlowNetwork
from ReductionEngine.src.graph.matching import (Matching, augmenting_path_exists, blossom_matching,
                                                hopcroft_karp, max_matching_bruteforce,
                                                max_matching_size)
from ReductionEngine.src.graph.min_cut import global_min_cut, global_min_cut_with_side, min_cut_bruteforce
from ReductionEngine.src.graph.traversal import (INFINITY, bfs_distance, connected_components,
                                                 is_bipartite, is_connected)

from .conftest import from_networkx

SEEDS = range(6)


def _random_graph(nodes, p, seed):
    return from_networkx(nx.gnp_random_graph(nodes, p, seed=seed))


class TestDistances:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_bfs_matches_networkx(self, seed):
        graph = nx.gnp_random_graph(30, 0.08, seed=seed)
        dynamic = from_networkx(graph)
        lengths = nx.single_source_shortest_path_length(graph, 0)
        for target in range(30):
            assert bfs_distance(dynamic, 0, target) == lengths.get(target, INFINITY)

    def test_components_and_bipartiteness(self):
        graph = from_networkx(nx.disjoint_union(nx.cycle_graph(5), nx.path_graph(3)))
        assert sorted(len(c) for c in connected_components(graph)) == [3, 5]
        assert not is_connected(graph)
        assert not is_bipartite(graph)[0]
        ok, colour = is_bipartite(from_networkx(nx.cycle_graph(6)))
        assert ok and colour[0] != colour[1]


class TestMatching:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_size_matches_networkx(self, seed):
        graph = nx.gnp_random_graph(24, 0.12, seed=seed)
        expected = len(nx.max_weight_matching(graph, maxcardinality=True))
        assert max_matching_size(from_networkx(graph)) == expected

    @pytest.mark.parametrize("seed", SEEDS)
    def test_size_matches_bruteforce(self, seed):
        graph = _random_graph(10, 0.3, seed)
        assert max_matching_size(graph) == max_matching_bruteforce(graph)

    def test_blossom_on_odd_cycles(self):
        graph = from_networkx(nx.disjoint_union(nx.cycle_graph(5), nx.cycle_graph(7)))
        matching = blossom_matching(graph)
        matching.validate(graph)
        assert matching.size() == 5

    def test_hopcroft_karp(self):
        graph = nx.complete_bipartite_graph(3, 5)
        dynamic = from_networkx(graph)
        _, colour = is_bipartite(dynamic)
        assert hopcroft_karp(dynamic, colour).size() == 3

    def test_augmenting_path(self):
        graph = from_networkx(nx.path_graph(4))
        assert augmenting_path_exists(graph, Matching([(1, 2)]), 0, 3)
        graph.delete_edge(2, 3)
        assert not augmenting_path_exists(graph, Matching([(1, 2)]), 0, 3)

    def test_matched_endpoint_rejected(self):
        graph = from_networkx(nx.path_graph(4))
        with pytest.raises(InvalidMatchingError):
            augmenting_path_exists(graph, Matching([(0, 1)]), 0, 3)

    def test_validate_rejects_non_edges(self):
        graph = from_networkx(nx.path_graph(4))
        with pytest.raises(InvalidMatchingError):
            Matching([(0, 2)]).validate(graph)


class TestDensest:
    def test_complete_graph(self):
        result = densest_subgraph(from_networkx(nx.complete_graph(4)))
        assert result.density == Fraction(3, 2)
        assert result.nodes == [0, 1, 2, 3]

    def test_clique_hanging_off_a_path(self):
        graph = nx.complete_graph(5)
        nx.add_path(graph, [4, 5, 6, 7])
        result = densest_subgraph(from_networkx(graph))
        assert result.density == 2
        assert result.nodes == [0, 1, 2, 3, 4]

    @pytest.mark.parametrize("seed", SEEDS)
    def test_matches_bruteforce(self, seed):
        graph = _random_graph(12, 0.35, seed)
        expected = densest_subgraph_bruteforce(graph).density
        for method in ("binary", "dinkelbach"):
            result = densest_subgraph(graph, method)
            assert result.density == expected
            if graph.edge_count:
                assert density_of(graph, result.nodes) == expected

    def test_threshold_query(self):
        graph = from_networkx(nx.complete_graph(4))
        assert has_denser_subgraph(graph, Fraction(7, 5)) is not None
        assert has_denser_subgraph(graph, Fraction(3, 2)) is None

    def test_empty_and_edgeless(self):
        assert densest_subgraph(DynamicGraph(0)).density == 0
        assert densest_subgraph(DynamicGraph(3)).density == 0

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            densest_subgraph(DynamicGraph(2), "greedy")


class TestCutsAndExpansion:
    @pytest.mark.parametrize("seed", SEEDS)
    def test_min_cut_matches_networkx(self, seed):
        graph = nx.connected_watts_strogatz_graph(14, 4, 0.3, seed=seed)
        expected, _ = nx.stoer_wagner(graph)
        dynamic = from_networkx(graph)
        value, side = global_min_cut_with_side(dynamic)
        assert value == expected == min_cut_bruteforce(dynamic)
        crossing = sum(1 for a, b in dynamic.edges() if (a in side) != (b in side))
        assert crossing == value

    def test_disconnected_cut_is_zero(self):
        graph = from_networkx(nx.disjoint_union(nx.complete_graph(3), nx.complete_graph(3)))
        assert global_min_cut(graph) == 0

    def test_exact_expansion_of_a_cycle(self):
        certificate = edge_expansion_exact(from_networkx(nx.cycle_graph(8)))
        assert certificate.value == Fraction(1, 2)
        assert len(certificate.witness) == 4

    def test_exact_expansion_cap(self):
        with pytest.raises(ExpansionCapError):
            edge_expansion_exact(DynamicGraph(30), cap=22)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_spectral_bound_below_exact(self, seed):
        graph = from_networkx(nx.random_regular_graph(4, 16, seed=seed))
        exact = edge_expansion_exact(graph)
        spectral = expansion_lower_bound_spectral(graph)
        if exact.connected:
            assert 0 < spectral.as_float() <= float(exact.value)

    def test_spectral_on_disconnected_graph(self):
        certificate = expansion_lower_bound_spectral(DynamicGraph(4))
        assert certificate.as_float() == 0 and not certificate.connected

    def test_power_iteration_path(self):
        graph = from_networkx(nx.random_regular_graph(4, 40, seed=1))
        dense = expansion_lower_bound_spectral(graph)
        iterative = expansion_lower_bound_spectral(graph, dense_cutoff=10)
        assert iterative.as_float() == pytest.approx(dense.as_float(), rel=0.05)
        assert any(note.startswith("uncertified") for note in iterative.notes)
        assert not any("uncertified" in note for note in dense.notes)

    def test_max_flow(self):
        network = FlowNetwork(4)
        network.add_edge(0, 1, 3)
        network.add_edge(0, 2, 2)
        network.add_edge(1, 2, 5)
        network.add_edge(1, 3, 2)
        network.add_edge(2, 3, 3)
        assert network.max_flow(0, 3) == 5
        assert network.source_side(0) == {0}


class TestDegrees:
    def test_exact_law_passes(self):
        params = PowerLawParams(6.0, 2.5)
        report = check_power_law(params.expected_histogram(), params)
        assert report.passed and report.deviating_nodes == 0

    def test_additive_slack(self):
        params = PowerLawParams(6.0, 2.5, "additive", c=1)
        histogram = params.expected_histogram()
        histogram[1] += 1
        histogram[2] -= 1
        report = check_power_law(histogram, params)
        assert report.passed
        assert report.deviating_nodes == 1
        assert not check_power_law(histogram, params.with_variant("exact")).passed

    def test_exponent_must_exceed_two(self):
        with pytest.raises(ValueError):
            PowerLawParams(5.0, 2.0)

    def test_zeta(self):
        assert zeta(2.0) == pytest.approx(1.6449340668, rel=1e-6)

    def test_histogram_of_a_subset(self):
        graph = from_networkx(nx.star_graph(3))
        assert degree_histogram(graph) == {1: 3, 3: 1}
        assert degree_histogram(graph, [1, 2]) == {1: 2}
