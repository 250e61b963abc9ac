"""Densest-subgraph reductions: gadgets, exact threshold and decisions."""

from fractions import Fraction

import pytest

from ReductionEngine.src.exceptions import GadgetConstructionError, PowerLawParameterError
from ReductionEngine.src.gadgets.densest_gadgets import (DensestDriver, DensityDecision,
                                                         apply_pair_dense, build_dense_const,
                                                         build_dense_expander, build_dense_powerlaw,
                                                         build_matrix_gadget, build_vector_gadget,
                                                         check_gadget_densities,
                                                         check_power_law_beta, decide_dense,
                                                         expected_node_count, gadget_sizes,
                                                         make_dense_driver, witness_audit)
from ReductionEngine.src.graph.densest import densest_subgraph
from ReductionEngine.src.graph.min_cut import global_min_cut
from ReductionEngine.src.oumv.generators import generate_instance
from ReductionEngine.src.oumv.instance import BitMatrix, BitVector


class TestGadgets:
    def test_sizes(self):
        assert gadget_sizes(2, 3) == (7, 7)
        assert gadget_sizes(4, 3) == (7, 16)
        assert gadget_sizes(8, 3) == (8, 64)

    @pytest.mark.parametrize("size", [7, 9, 16])
    def test_vector_gadget_is_regular_and_well_connected(self, size):
        fragment, strides = build_vector_gadget(size, 3, seed=1)
        assert strides[0] == 1 and len(strides) == 3
        assert set(fragment.degrees()) == {6}
        assert global_min_cut(fragment) >= 6

    def test_matrix_gadget_drops_the_designated_edge(self):
        fragment, _ = build_matrix_gadget(9, 3, seed=2)
        assert not fragment.has_edge(0, 1)
        assert fragment.edge_count == 3 * 9 - 1
        assert fragment.degree(0) == fragment.degree(1) == 5

    def test_invalid_parameters(self):
        with pytest.raises(GadgetConstructionError):
            build_vector_gadget(9, 2)
        with pytest.raises(GadgetConstructionError):
            build_vector_gadget(6, 3)

    def test_decision_threshold(self):
        decision = DensityDecision.for_sizes(3, 7, 7)
        assert decision.threshold == 3 + Fraction(1, 21)
        assert decision.decide(Fraction(64, 21)) == 1
        assert decision.decide(Fraction(63, 21)) == 0


class TestConst:
    def test_node_count_and_threshold(self):
        graph, layout = build_dense_const(2, BitMatrix.ones(2))
        assert graph.node_count == expected_node_count("const", 2, 3) == 56
        assert layout.threshold == 3 + Fraction(1, 21)
        assert layout.check_bijection()

    def test_gadget_densities_follow_the_bits(self):
        graph, layout = build_dense_const(2, BitMatrix.identity(2))
        apply_pair_dense(graph, layout, BitVector.unit(2, 1), BitVector.ones(2))
        densities = check_gadget_densities(graph, layout)
        assert densities["U1"] == 3
        assert densities["U2"] == Fraction(19, 7)
        assert densities["M1,1"] == Fraction(20, 7)
        assert densities["M1,2"] == Fraction(19, 7)
        assert densities["V2"] == 3

    def test_pair_updates_are_reversible(self, mixed_instance):
        graph, layout = build_dense_const(2, mixed_instance.matrix)
        before = graph.edge_set()
        (u1, v1), (u2, v2) = mixed_instance.pairs
        assert apply_pair_dense(graph, layout, u1, v1) == 4
        assert apply_pair_dense(graph, layout, u2, v2) == 4
        assert apply_pair_dense(graph, layout, BitVector.ones(2), BitVector.ones(2)) == 4
        assert graph.edge_set() == before

    def test_answers_on_generated_instances(self, mixed_instance):
        instances = [mixed_instance] + [generate_instance(2, "uniform", seed) for seed in range(3)]
        for instance in instances:
            driver = make_dense_driver("const", instance.matrix, {})
            for (u, v), truth in zip(instance.pairs, instance.truth):
                driver.apply_pair(u, v)
                assert driver.decide(driver.reference_answer()) == truth
                assert driver.decide_fast() == truth

    def test_witness_holds_a_full_matrix_gadget(self, ones_instance):
        graph, layout = build_dense_const(2, ones_instance.matrix)
        apply_pair_dense(graph, layout, *ones_instance.pairs[0])
        result = densest_subgraph(graph)
        assert result.density >= layout.threshold
        audit = witness_audit(result.nodes, layout)
        assert audit.ok
        assert audit.to_dict()["padding_nodes"] == 0

    def test_zero_answer_stays_below_threshold(self):
        graph, layout = build_dense_const(2, BitMatrix.zeros(2))
        apply_pair_dense(graph, layout, BitVector.ones(2), BitVector.ones(2))
        assert densest_subgraph(graph).density < layout.threshold
        assert decide_dense(graph, layout) == 0

    def test_summary_threshold_text(self):
        summary = DensestDriver(*build_dense_const(2, BitMatrix.ones(2))).summary()
        assert summary["threshold"] == "64/21"
        assert summary["expected_N"] == summary["N"] == 56


class TestPowerLawParameters:
    def test_beta_domain(self):
        with pytest.raises(PowerLawParameterError):
            check_power_law_beta(2.5)
        check_power_law_beta(3.0)

    def test_expander_degree_bound(self):
        with pytest.raises(GadgetConstructionError):
            build_dense_expander(2, BitMatrix.ones(2), d=6, inner_degree=5)

    def test_unknown_variant(self):
        with pytest.raises(GadgetConstructionError):
            make_dense_driver("sparse", BitMatrix.ones(2), {})


@pytest.mark.slow
class TestHeavyVariants:
    def test_expander_variant(self, mixed_instance):
        graph, layout, certificate = build_dense_expander(2, mixed_instance.matrix, d=6, seed=1)
        assert graph.node_count == expected_node_count("expander", 2, 6) == 208
        assert certificate.connected
        driver = DensestDriver(graph, layout)
        for (u, v), truth in zip(mixed_instance.pairs, mixed_instance.truth):
            driver.apply_pair(u, v)
            assert driver.decide_fast() == truth

    def test_powerlaw_variant_keeps_degrees(self, mixed_instance):
        graph, layout = build_dense_powerlaw(2, 3.0, 5, mixed_instance.matrix)
        assert layout.reduction_size == expected_node_count("powerlaw", 2, 3)
        degrees = graph.degrees()
        driver = DensestDriver(graph, layout)
        for (u, v), truth in zip(mixed_instance.pairs, mixed_instance.truth):
            driver.apply_pair(u, v)
            assert graph.degrees() == degrees
            assert driver.decide_fast() == truth
