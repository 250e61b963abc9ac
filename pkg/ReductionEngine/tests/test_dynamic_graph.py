"""DynamicGraph updates, logging, listeners and the text formats."""

import pytest

from ReductionEngine.src.exceptions import GraphUpdateError
from ReductionEngine.src.graph.dynamic_graph import DELETE, INSERT, DynamicGraph, UpdateOp, replay
from ReductionEngine.src.graph.io import format_edge_list, parse_edge_list, read_edge_list, to_dot


@pytest.fixture
def path4():
    graph = DynamicGraph(4)
    graph.add_edges([(0, 1), (1, 2), (2, 3)])
    graph.clear_log()
    return graph


class TestUpdates:
    def test_insert_and_delete(self, path4):
        path4.insert_edge(3, 0)
        assert path4.has_edge(0, 3)
        assert path4.edge_count == 4
        path4.delete_edge(1, 2)
        assert not path4.has_edge(2, 1)
        assert path4.degrees() == [2, 1, 1, 2]
        path4.check_invariants()

    @pytest.mark.parametrize("a, b", [(1, 1), (0, 4), (-1, 2)])
    def test_invalid_pairs(self, path4, a, b):
        with pytest.raises(GraphUpdateError):
            path4.insert_edge(a, b)

    def test_duplicate_insert(self, path4):
        with pytest.raises(GraphUpdateError):
            path4.insert_edge(1, 0)

    def test_missing_delete(self, path4):
        with pytest.raises(GraphUpdateError):
            path4.delete_edge(0, 2)

    def test_failed_update_leaves_graph_alone(self, path4):
        with pytest.raises(GraphUpdateError):
            path4.insert_edge(0, 1)
        assert path4.edge_count == 3
        assert path4.update_log == []

    def test_edges_are_sorted_pairs(self, path4):
        path4.insert_edge(3, 0)
        assert path4.edges() == [(0, 1), (0, 3), (1, 2), (2, 3)]
        assert path4.edge_set() == set(path4.iter_edges())


class TestLog:
    def test_log_records_every_update(self, path4):
        path4.insert_edge(0, 2)
        path4.delete_edge(0, 1)
        assert [op.to_string() for op in path4.update_log] == ["+ 0 2", "- 0 1"]

    def test_rollback_restores_edges(self, path4):
        before = path4.copy()
        mark = path4.checkpoint()
        path4.insert_edge(0, 3)
        path4.delete_edge(1, 2)
        assert path4.rollback(mark) == 2
        assert path4.same_edges(before)
        assert len(path4.update_log) == 4

    def test_listeners_see_updates(self, path4):
        seen = []
        path4.add_listener(seen.append)
        path4.insert_edge(0, 2)
        path4.remove_listener(seen.append)
        path4.delete_edge(0, 2)
        assert seen == [UpdateOp(INSERT, 0, 2)]

    def test_copy_is_independent(self, path4):
        path4.insert_edge(0, 2)
        clone = path4.copy()
        assert clone.update_log == []
        assert path4.copy(keep_log=True).update_log == path4.update_log
        clone.delete_edge(0, 1)
        assert path4.has_edge(0, 1)

    def test_replay_rebuilds(self, path4):
        path4.insert_edge(0, 3)
        path4.delete_edge(1, 2)
        base = DynamicGraph(4)
        base.add_edges([(0, 1), (1, 2), (2, 3)])
        assert replay(path4.update_log, 4, base).same_edges(path4)

    def test_op_inverse(self):
        op = UpdateOp(DELETE, 2, 5)
        assert op.inverse() == UpdateOp(INSERT, 2, 5)
        assert op.inverse().inverse() == op
        with pytest.raises(ValueError):
            UpdateOp("toggle", 1, 2)


class TestEdgeListFormat:
    def test_format(self, path4):
        assert format_edge_list(path4) == "4 3\n0 1\n1 2\n2 3\n"

    def test_parse(self, path4):
        assert parse_edge_list("# a comment\n4 3\n0 1\n1 2\n2 3\n").same_edges(path4)

    def test_header_mismatch(self):
        with pytest.raises(ValueError):
            parse_edge_list("3 2\n0 1\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_edge_list(tmp_path / "none.txt")

    def test_dot_export(self, path4):
        text = to_dot(path4, labels={0: "s", 3: "t"}, ranks={0: 0, 1: 1, 2: 1, 3: 2},
                      groups={0: "A", 1: "B"}, highlight=[(1, 0)], name="demo")
        assert text.startswith("graph demo {")
        assert '0 [label="s", fillcolor=' in text
        assert "{ rank=same; 1 2 }" in text
        assert "0 -- 1 [color=red, penwidth=2];" in text
        assert "  2 -- 3;" in text
