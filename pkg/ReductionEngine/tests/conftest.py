"""Shared fixtures for the reduction engine test suite."""

import networkx as nx
import pytest

from ReductionEngine.src.graph.dynamic_graph import DynamicGraph
from ReductionEngine.src.harness.config import HarnessConfig, load_config
from ReductionEngine.src.oumv.instance import BitMatrix, BitVector, OuMvInstance


def make_instance(rows, pairs):
    """Instance from 0/1 strings: ``rows`` of the matrix, ``pairs`` of (u, v)."""
    matrix = BitMatrix.from_rows([[int(ch) for ch in row] for row in rows])
    vectors = tuple((BitVector.from_bits([int(ch) for ch in u]),
                     BitVector.from_bits([int(ch) for ch in v])) for u, v in pairs)
    return OuMvInstance(matrix, vectors)


def from_networkx(graph: nx.Graph) -> DynamicGraph:
    """DynamicGraph copy of a networkx graph on nodes 0..N-1."""
    dynamic = DynamicGraph(graph.number_of_nodes())
    dynamic.add_edges((min(a, b), max(a, b)) for a, b in graph.edges())
    dynamic.clear_log()
    return dynamic


def to_networkx(graph: DynamicGraph) -> nx.Graph:
    result = nx.Graph()
    result.add_nodes_from(graph.nodes())
    result.add_edges_from(graph.edges())
    return result


@pytest.fixture
def config() -> HarnessConfig:
    return load_config()


@pytest.fixture
def mixed_instance():
    """n = 2 with answers 1, 0."""
    return make_instance(["10", "01"], [("10", "10"), ("10", "01")])


@pytest.fixture
def ones_instance():
    """n = 2, every answer 1."""
    return make_instance(["11", "11"], [("11", "11"), ("11", "11")])
