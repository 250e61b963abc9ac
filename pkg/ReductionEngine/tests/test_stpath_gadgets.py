"""Distance reductions: layering, thresholds, gaps and small exhaustive checks."""

import pytest

from ReductionEngine.src.exceptions import DimensionMismatchError, GadgetConstructionError
from ReductionEngine.src.gadgets.stpath_gadgets import (ApproxParams, DistanceDriver, apply_pair_st,
                                                        build_st_approx, build_st_const,
                                                        build_st_expander, build_st_powerlaw,
                                                        build_st_varying, decide_st,
                                                        decide_st_approx, expected_node_count,
                                                        log2_exact, make_st_driver, varying_depth)
from ReductionEngine.src.graph.traversal import bfs_distance, is_bipartite
from ReductionEngine.src.oumv.generators import all_small_queries, generate_instance
from ReductionEngine.src.oumv.instance import BitMatrix, BitVector, vmv


def _run_driver(driver, instance):
    bits = []
    for u, v in instance.pairs:
        driver.apply_pair(u, v)
        bits.append(driver.decide(driver.reference_answer()))
    return bits


class TestParameters:
    def test_log2_exact(self):
        assert log2_exact(2) == 1 and log2_exact(16) == 4
        for bad in (1, 3, 12):
            with pytest.raises(GadgetConstructionError):
                log2_exact(bad)

    def test_approx_alpha(self):
        assert ApproxParams(1.0).alpha == 8
        assert ApproxParams(0.5).alpha == 20
        assert ApproxParams(2.9).alpha == 1
        for bad in (0.0, 3.0):
            with pytest.raises(GadgetConstructionError):
                ApproxParams(bad)

    def test_varying_depth(self):
        assert varying_depth(4, 0.5) == 1
        assert varying_depth(8, 0.0) == 3
        assert varying_depth(8, 1.0) == 0


class TestConst:
    def test_node_count_and_threshold(self):
        for n in (2, 4):
            graph, layout = build_st_const(n, BitMatrix.ones(n))
            assert graph.node_count == expected_node_count("const", n)
            assert layout.threshold == 4 * log2_exact(n) + 3
        assert expected_node_count("const", 2) == 18

    def test_layers_are_consecutive(self):
        graph, layout = build_st_const(4, BitMatrix.ones(4))
        apply_pair_st(graph, layout, BitVector.ones(4), BitVector.ones(4))
        assert layout.consecutive_layers(graph)
        assert is_bipartite(graph)[0]
        assert max(graph.degrees()) <= 3

    def test_every_small_query(self):
        for u, matrix, v in all_small_queries(2):
            graph, layout = build_st_const(2, matrix)
            apply_pair_st(graph, layout, u, v)
            distance = bfs_distance(graph, layout.source, layout.sink)
            assert distance >= layout.threshold
            assert decide_st(graph, layout) == vmv(u, matrix, v)

    def test_driver_over_a_stream(self):
        for seed in range(3):
            instance = generate_instance(4, "uniform", seed)
            assert _run_driver(make_st_driver("const", instance.matrix, {}), instance) == instance.ground_truth()

    def test_dimension_checks(self):
        with pytest.raises(DimensionMismatchError):
            build_st_const(2, BitMatrix.ones(4))
        graph, layout = build_st_const(2, BitMatrix.ones(2))
        with pytest.raises(DimensionMismatchError):
            apply_pair_st(graph, layout, BitVector.ones(4), BitVector.ones(2))


class TestApprox:
    def test_gap_on_two_by_two(self):
        graph, layout, t1, t0 = build_st_approx(2, 1.0, BitMatrix.ones(2))
        assert graph.node_count == expected_node_count("approx", 2, alpha=8) == 50
        assert t1 == 15
        assert t0 == 37
        assert t0 >= (3 - 1.0) * t1
        assert layout.consecutive_layers(graph)
        assert not layout.notes

    def test_exact_and_approximate_decoding(self):
        _, layout, t1, t0 = build_st_approx(2, 1.0, BitMatrix.ones(2))
        assert decide_st_approx(t1, layout) == 1
        assert decide_st_approx(t0, layout) == 0
        assert decide_st_approx(int(1.9 * t1), layout, approximate=True) == 1
        assert decide_st_approx(t0, layout, approximate=True) == 0

    def test_driver_answers(self, mixed_instance):
        driver = make_st_driver("approx", mixed_instance.matrix, {"delta": 1.0})
        assert _run_driver(driver, mixed_instance) == [1, 0]
        assert driver.expected_nodes == driver.graph.node_count


class TestVarying:
    def test_node_count_and_answers(self):
        for seed in range(3):
            instance = generate_instance(4, "uniform", seed)
            graph, layout = build_st_varying(4, 0.5, instance.matrix)
            assert graph.node_count == expected_node_count("varying", 4, width=2) == 38
            assert layout.consecutive_layers(graph)
            assert _run_driver(DistanceDriver(graph, layout), instance) == instance.ground_truth()

    def test_depth_rounding_is_noted(self):
        _, layout = build_st_varying(4, 0.5, BitMatrix.ones(4))
        assert layout.params["tree_depth"] == 1
        assert layout.notes


class TestExpander:
    def test_reduction_size_and_layers(self, mixed_instance):
        graph, layout, certificate = build_st_expander(2, mixed_instance.matrix, seed=2)
        assert layout.reduction_size == expected_node_count("expander", 2) == 42
        assert graph.node_count > layout.reduction_size
        assert layout.consecutive_layers(graph)
        assert certificate.connected

    def test_answers(self, mixed_instance, ones_instance):
        for instance in (mixed_instance, ones_instance):
            driver = make_st_driver("expander", instance.matrix, {"seed": 4})
            assert _run_driver(driver, instance) == instance.ground_truth()

    def test_root_edges_swap_one_for_one(self, mixed_instance):
        graph, layout, _ = build_st_expander(2, mixed_instance.matrix)
        driver = DistanceDriver(graph, layout)
        edges = graph.edge_count
        assert driver.apply_pair(BitVector.ones(2), BitVector.unit(2, 2)) == 6
        assert graph.edge_count == edges


@pytest.mark.slow
class TestPowerLaw:
    def test_answers_with_host(self, mixed_instance):
        graph, layout, host = build_st_powerlaw(2, 2.5, 7, mixed_instance.matrix)
        assert layout.reduction_size == expected_node_count("powerlaw", 2)
        assert graph.node_count > layout.reduction_size
        degrees_before = sorted(graph.degrees())
        driver = DistanceDriver(graph, layout)
        assert _run_driver(driver, mixed_instance) == [1, 0]
        assert sorted(graph.degrees()) == degrees_before

    def test_unknown_variant(self):
        with pytest.raises(GadgetConstructionError):
            make_st_driver("zigzag", BitMatrix.ones(2), {})
