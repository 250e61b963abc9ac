"""Expander generation, certification and overlays."""

import pytest

from ReductionEngine.src.exceptions import ExpanderGenerationError, GadgetConstructionError
from ReductionEngine.src.expanders.factory import (ExpanderSpec, build_expander, derive_seed,
                                                   effective_degree, overlay_expander)
from ReductionEngine.src.graph.dynamic_graph import DynamicGraph
from ReductionEngine.src.graph.expansion import edge_expansion_exact
from ReductionEngine.src.graph.traversal import is_bipartite


class TestBuildExpander:
    @pytest.mark.parametrize("nodes, degree", [(16, 4), (12, 3), (9, 4), (20, 6)])
    def test_regular_and_certified(self, nodes, degree):
        graph, certificate = build_expander(ExpanderSpec(nodes, degree, 0.1, seed=3))
        assert graph.node_count == nodes
        assert set(graph.degrees()) == {degree}
        graph.check_invariants()
        assert certificate.method == "exact"
        assert certificate.as_float() >= 0.1
        assert certificate.value == edge_expansion_exact(graph).value

    def test_large_graph_uses_spectral_bound(self):
        graph, certificate = build_expander(ExpanderSpec(40, 4, 0.1, seed=1))
        assert certificate.method == "spectral"
        assert certificate.connected and certificate.as_float() >= 0.1

    def test_seed_is_deterministic(self):
        first, _ = build_expander(ExpanderSpec(18, 4, 0.1, seed=9))
        second, _ = build_expander(ExpanderSpec(18, 4, 0.1, seed=9))
        assert first.same_edges(second)
        assert derive_seed(9, 2) == derive_seed(9, 2) != derive_seed(9, 3)

    def test_complete_graph_when_degree_is_saturated(self):
        graph, certificate = build_expander(ExpanderSpec(4, 3, 0.1))
        assert graph.edge_count == 6
        assert certificate.as_float() == 2.0

    @pytest.mark.parametrize("nodes, degree", [(10, 2), (5, 3), (4, 5)])
    def test_invalid_specs(self, nodes, degree):
        with pytest.raises(GadgetConstructionError):
            build_expander(ExpanderSpec(nodes, degree))

    def test_unreachable_expansion(self):
        with pytest.raises(ExpanderGenerationError):
            build_expander(ExpanderSpec(16, 3, 5.0, seed=0), max_attempts=3)


class TestOverlay:
    def test_effective_degree(self):
        assert effective_degree(1, 4) == 0
        assert effective_degree(3, 4) == 2
        assert effective_degree(4, 4) == 3
        assert effective_degree(5, 3) == 2
        assert effective_degree(8, 4) == 4

    def test_direct_overlay_reports_added_edges(self):
        graph = DynamicGraph(12)
        graph.insert_edge(0, 1)
        overlay = overlay_expander(graph, list(range(12)), ExpanderSpec(12, 4, 0.1, seed=2))
        assert overlay.degree == 4
        assert all(graph.has_edge(a, b) for a, b in overlay.edges)
        assert graph.edge_count == 1 + len(overlay.edges)
        assert not overlay.dummy_nodes

    def test_dummy_overlay_stays_bipartite(self):
        graph = DynamicGraph(10)
        targets = list(range(10))
        overlay = overlay_expander(graph, targets, ExpanderSpec(10, 4, 0.1, seed=4), dummy=True)
        assert len(overlay.dummy_nodes) == 20
        assert graph.node_count == 30
        assert all(graph.degree(x) == 2 for x in overlay.dummy_nodes)
        assert all(graph.degree(v) == 4 for v in targets)
        assert is_bipartite(graph)[0]

    def test_small_target_sets_fall_back(self):
        graph = DynamicGraph(3)
        overlay = overlay_expander(graph, [0, 1, 2], ExpanderSpec(3, 4))
        assert overlay.degree == 2
        assert graph.edge_count == 3
        assert overlay.notes

    def test_target_count_must_match(self):
        with pytest.raises(GadgetConstructionError):
            overlay_expander(DynamicGraph(4), [0, 1, 2], ExpanderSpec(4, 3))
