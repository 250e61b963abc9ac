"""Matching reductions: node counts, structure and exhaustive small checks."""

from itertools import product

import pytest

from ReductionEngine.src.exceptions import DimensionMismatchError, GadgetConstructionError
from ReductionEngine.src.gadgets.matching_gadgets import (MatchingDriver, apply_pair_matching,
                                                          apply_and_decide_powerlaw_matching,
                                                          apply_pair_powerlaw_matching,
                                                          build_matching_const,
                                                          build_matching_expander,
                                                          build_matching_powerlaw,
                                                          build_matching_varying, decide_matching,
                                                          expected_left_table, expected_node_count,
                                                          left_degree_table,
                                                          make_matching_driver, rewire_counts,
                                                          rollback_powerlaw_matching,
                                                          strip_overlay, varying_width)
from ReductionEngine.src.graph.degrees import degree_histogram
from ReductionEngine.src.graph.matching import max_matching_size
from ReductionEngine.src.graph.traversal import is_bipartite
from ReductionEngine.src.oumv.generators import all_small_queries, generate_instance
from ReductionEngine.src.oumv.instance import BitMatrix, BitVector, vmv


class TestConstruction:
    def test_const_node_count(self):
        for n in (1, 2, 3):
            graph, layout = build_matching_const(n, BitMatrix.ones(n))
            assert graph.node_count == expected_node_count("const", n)
            assert layout.check_bijection()
        assert expected_node_count("const", 2) == 34

    def test_const_is_bipartite_with_degree_three(self):
        graph, layout = build_matching_const(3, BitMatrix.ones(3))
        apply_pair_matching(graph, layout, BitVector.ones(3), BitVector.ones(3))
        assert max(graph.degrees()) <= 3
        assert is_bipartite(graph)[0]

    def test_base_matching_leaves_two_free_nodes(self):
        graph, layout = build_matching_const(2, BitMatrix.zeros(2))
        layout.base.validate(graph)
        assert 2 * layout.base.size() == graph.node_count - 2
        assert layout.full_matching_size == 17

    def test_matrix_dimension_checked(self):
        with pytest.raises(DimensionMismatchError):
            build_matching_const(3, BitMatrix.ones(2))
        with pytest.raises(GadgetConstructionError):
            build_matching_const(0, BitMatrix.ones(2))

    def test_pair_dimension_checked(self):
        graph, layout = build_matching_const(2, BitMatrix.ones(2))
        with pytest.raises(DimensionMismatchError):
            apply_pair_matching(graph, layout, BitVector.ones(3), BitVector.ones(2))

    def test_only_vector_edges_change(self):
        graph, layout = build_matching_const(2, BitMatrix.identity(2))
        before = graph.edge_set()
        updates = apply_pair_matching(graph, layout, BitVector.ones(2), BitVector.unit(2, 1))
        assert updates == 3
        assert graph.edge_set() - before == layout.input_edges
        assert apply_pair_matching(graph, layout, BitVector.zeros(2), BitVector.zeros(2)) == 3
        assert graph.edge_set() == before


class TestExhaustiveSmall:
    def test_const_decides_every_query(self):
        for u, matrix, v in all_small_queries(2):
            graph, layout = build_matching_const(2, matrix)
            apply_pair_matching(graph, layout, u, v)
            truth = vmv(u, matrix, v)
            assert decide_matching(graph, layout) == truth
            expected = layout.full_matching_size - (1 - truth)
            assert max_matching_size(graph) == expected

    def test_driver_reuses_one_graph_across_pairs(self):
        for seed in range(4):
            instance = generate_instance(3, "uniform", seed)
            driver = make_matching_driver("const", instance.matrix, {})
            for (u, v), truth in zip(instance.pairs, instance.truth):
                driver.apply_pair(u, v)
                assert driver.decide(max_matching_size(driver.graph)) == truth
                assert driver.decide_fast() == truth


class TestVarying:
    def test_width(self):
        assert varying_width(8, 0.0) == (8, True)
        assert varying_width(8, 1.0) == (1, True)
        assert varying_width(4, 0.5)[0] == 2
        with pytest.raises(GadgetConstructionError):
            varying_width(4, 1.5)

    def test_node_count_and_answers(self):
        for seed in range(4):
            instance = generate_instance(4, "uniform", seed)
            graph, layout = build_matching_varying(4, 0.5, instance.matrix)
            assert graph.node_count == expected_node_count("varying", 4, 2) == 66
            assert layout.notes
            driver = MatchingDriver(graph, layout)
            for (u, v), truth in zip(instance.pairs, instance.truth):
                driver.apply_pair(u, v)
                assert driver.decide(max_matching_size(graph)) == truth

    def test_zero_tradeoff_matches_const(self):
        matrix = BitMatrix.from_rows([[1, 0, 1], [0, 1, 0], [1, 1, 0]])
        varying, _ = build_matching_varying(3, 0.0, matrix)
        const, _ = build_matching_const(3, matrix)
        assert varying.same_edges(const)


class TestExpander:
    def test_node_count_and_answers(self, mixed_instance):
        graph, layout, certificate = build_matching_expander(2, mixed_instance.matrix, seed=5)
        driver = MatchingDriver(graph, layout)
        assert graph.node_count == driver.expected_nodes == 98
        assert certificate.connected and certificate.as_float() > 0
        for (u, v), truth in zip(mixed_instance.pairs, mixed_instance.truth):
            driver.apply_pair(u, v)
            assert driver.decide(max_matching_size(graph)) == truth

    def test_every_row_node_keeps_one_vector_edge(self, ones_instance):
        graph, layout, _ = build_matching_expander(2, ones_instance.matrix, seed=1)
        stripped = strip_overlay(graph, layout)
        assert len(layout.input_edges) == 2 * layout.n
        driver = MatchingDriver(graph, layout)
        driver.apply_pair(*ones_instance.pairs[0])
        assert len(layout.input_edges) == 2 * layout.n
        assert stripped.edge_count < graph.edge_count

    def test_summary_carries_certificate(self, mixed_instance):
        graph, layout, _ = build_matching_expander(2, mixed_instance.matrix)
        summary = MatchingDriver(graph, layout).summary()
        assert summary["N"] == 98 and "certificate" in summary


@pytest.mark.slow
class TestPowerLaw:
    def test_answers_and_rollback(self, mixed_instance):
        state = build_matching_powerlaw(2, 2.5, 3, mixed_instance.matrix)
        assert state.reduction_size == expected_node_count("powerlaw", 2) == 58
        assert len(state.rewires) == 2 and len(state.end_rewires) == 2
        before = state.graph.edge_set()
        for (u, v), truth in zip(mixed_instance.pairs, mixed_instance.truth):
            assert apply_and_decide_powerlaw_matching(state, u, v) == truth
            assert state.graph.edge_set() == before

    def test_unknown_variant(self):
        with pytest.raises(GadgetConstructionError):
            make_matching_driver("spiral", BitMatrix.ones(2), {})


class TestPowerLawDegrees:
    @pytest.fixture(scope="class")
    def state(self):
        return build_matching_powerlaw(2, 2.5, 3, BitMatrix.ones(2))

    def test_left_table_closed_form(self, state):
        assert expected_left_table(2) == {"L1": {2: 2}, "L2": {1: 2, 2: 1},
                                          "L3": {1: 4, 2: 8}, "L4": {2: 8, 3: 4}}
        assert expected_left_table(1) == {"L1": {2: 1}, "L2": {1: 2},
                                          "L3": {1: 2, 2: 2}, "L4": {2: 4}}
        assert left_degree_table(state.graph, state.layout) == expected_left_table(2)

    def test_rewire_kinds(self):
        assert rewire_counts(BitVector.ones(2), BitVector.ones(2)) == (2, 2)
        assert rewire_counts(BitVector.from_bits([1, 0]), BitVector.from_bits([0, 1])) == (1, 1)
        assert rewire_counts(BitVector.zeros(2), BitVector.zeros(2)) == (0, 0)

    def test_histogram_is_unchanged_while_queried(self, state):
        base = degree_histogram(state.graph)
        vectors = [BitVector.from_bits(bits) for bits in ([0, 0], [1, 0], [0, 1], [1, 1])]
        for u, v in product(vectors, vectors):
            apply_pair_powerlaw_matching(state, u, v)
            assert degree_histogram(state.graph) == base, (u.bits, v.bits)
            rollback_powerlaw_matching(state)
        assert degree_histogram(state.graph) == base

    def test_matching_sizes_cover_every_kind(self, state):
        assert set(state.matching_sizes) == {(inner, end) for inner in range(3) for end in range(3)}
