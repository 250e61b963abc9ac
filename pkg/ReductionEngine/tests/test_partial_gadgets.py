"""Decremental rounds and their insertions-only replay."""

import pytest

from ReductionEngine.src.exceptions import GadgetConstructionError
from ReductionEngine.src.gadgets.partial_gadgets import (DecrementalDriver, advance_round_matching,
                                                         advance_round_st,
                                                         build_decremental_matching,
                                                         build_decremental_st, make_partial_driver,
                                                         partial_node_count, reverse_to_incremental,
                                                         run_decremental)
from ReductionEngine.src.graph.dynamic_graph import DELETE, INSERT
from ReductionEngine.src.oumv.generators import generate_instance
from ReductionEngine.src.oumv.instance import BitMatrix, BitVector


def _drive(driver, instance):
    bits = []
    for k in range(instance.n):
        index = driver.pair_index(k)
        u, v = instance.pairs[index]
        driver.apply_pair(u, v)
        bits.append((index, driver.decide(driver.reference_answer())))
        driver.finish_pair()
    return [bit for _, bit in sorted(bits)]


class TestDecrementalDistance:
    def test_node_count_and_thresholds(self):
        graph, _, state = build_decremental_st(2, BitMatrix.ones(2))
        assert graph.node_count == partial_node_count("st", 2) == 38
        assert state.thresholds == {1: 13, 2: 15}

    @pytest.mark.parametrize("seed", range(3))
    def test_rounds_decode_the_stream(self, seed, mixed_instance):
        instance = mixed_instance if seed == 0 else generate_instance(4, "uniform", seed)
        state, bits = run_decremental("st", instance)
        assert bits == instance.ground_truth()
        assert all(op.kind == DELETE for op in state.graph.update_log)
        assert len(state.query_marks) == instance.n

    def test_advance_round(self, mixed_instance):
        _, _, state = build_decremental_st(2, mixed_instance.matrix)
        results = [advance_round_st(state, u, v)[0] for u, v in mixed_instance.pairs]
        assert results == [1, 0]

    def test_round_must_be_swept(self, mixed_instance):
        driver = make_partial_driver("decremental", "st", mixed_instance, {})
        driver.apply_pair(*mixed_instance.pairs[0])
        with pytest.raises(GadgetConstructionError):
            driver.apply_pair(*mixed_instance.pairs[1])

    def test_no_round_after_the_last(self, ones_instance):
        _, _, state = build_decremental_st(2, ones_instance.matrix)
        for u, v in ones_instance.pairs:
            advance_round_st(state, u, v)
        with pytest.raises(GadgetConstructionError):
            advance_round_st(state, BitVector.ones(2), BitVector.ones(2))


class TestDecrementalMatching:
    def test_node_count_and_thresholds(self):
        graph, layout, state = build_decremental_matching(2, BitMatrix.ones(2))
        assert graph.node_count == partial_node_count("matching", 2) == 72
        assert state.thresholds == {1: 35, 2: 33}
        assert layout.notes

    @pytest.mark.parametrize("seed", range(3))
    def test_rounds_decode_the_stream(self, seed):
        instance = generate_instance(3, "uniform", seed)
        state, bits = run_decremental("matching", instance)
        assert bits == instance.ground_truth()
        assert all(op.kind == DELETE for op in state.graph.update_log)

    def test_advance_round(self, mixed_instance):
        _, _, state = build_decremental_matching(2, mixed_instance.matrix)
        assert [advance_round_matching(state, u, v)[0] for u, v in mixed_instance.pairs] == [1, 0]

    def test_driver(self, mixed_instance):
        driver = make_partial_driver("decremental", "matching", mixed_instance, {})
        assert isinstance(driver, DecrementalDriver)
        assert driver.expected_nodes == driver.graph.node_count
        assert _drive(driver, mixed_instance) == [1, 0]


class TestIncrementalReplay:
    @pytest.mark.parametrize("variant", ["st", "matching"])
    def test_replay_round_trips_to_the_build(self, variant, mixed_instance):
        replay = reverse_to_incremental(variant, mixed_instance)
        build = build_decremental_st if variant == "st" else build_decremental_matching
        built, _, _ = build(2, mixed_instance.matrix)
        assert replay.n == 2
        assert all(op.kind == INSERT for op in replay.operations())
        assert replay.rebuilt().same_edges(built)
        assert replay.reverse_back().same_edges(replay.start)

    @pytest.mark.parametrize("variant", ["st", "matching"])
    def test_driver_answers_in_reverse_order(self, variant, mixed_instance):
        driver = make_partial_driver("incremental", variant, mixed_instance, {})
        assert driver.pair_index(0) == 1
        assert _drive(driver, mixed_instance) == [1, 0]

    def test_longer_stream(self):
        instance = generate_instance(4, "uniform", 7)
        driver = make_partial_driver("incremental", "st", instance, {})
        assert _drive(driver, instance) == instance.ground_truth()

    def test_unknown_names(self, mixed_instance):
        with pytest.raises(GadgetConstructionError):
            make_partial_driver("decremental", "densest", mixed_instance, {})
        with pytest.raises(GadgetConstructionError):
            make_partial_driver("fully", "st", mixed_instance, {})
