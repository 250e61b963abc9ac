"""Configuration, adapters, the reduction loop, verification and reports."""

import json
from fractions import Fraction

import pytest

from ReductionEngine.src.exceptions import AdapterError, ConfigError, OracleMismatchError
from ReductionEngine.src.gadgets.base import DISTANCE, MATCHING_SIZE
from ReductionEngine.src.gadgets.matching_gadgets import expected_left_table
from ReductionEngine.src.graph.dynamic_graph import INSERT, DynamicGraph, UpdateOp
from ReductionEngine.src.harness.adapters import (FaultyAdapter, RecomputeAdapter,
                                                  RecomputeBFSAdapter, ScaledDistanceAdapter,
                                                  make_adapter)
from ReductionEngine.src.harness.bench import BENCH_COLUMNS, bench, fit_update_scaling
from ReductionEngine.src.harness.config import (HarnessConfig, load_config, parse_config_text,
                                                parse_value)
from ReductionEngine.src.harness.export import export_construction
from ReductionEngine.src.harness.reports import (VERIFY_COLUMNS, to_csv, to_json, verify_rows,
                                                 write_text)
from ReductionEngine.src.harness.runner import (Cell, adapter_for, build_driver, make_cells,
                                                prepare_instance, run_cell, run_cells,
                                                run_reduction)
from ReductionEngine.src.harness.verification import verify_construction
from ReductionEngine.src.oumv.generators import generate_instance


class TestConfig:
    def test_defaults_file_matches_dataclass(self, config):
        assert config == HarnessConfig()

    def test_parse_value(self):
        assert parse_value("3") == 3
        assert parse_value("0.25") == 0.25
        assert parse_value("3/4") == Fraction(3, 4)
        assert parse_value("yes") is True
        assert parse_value("None") is None
        assert parse_value("planted_one") == "planted_one"

    def test_parse_config_text(self):
        values = parse_config_text("# header\nmin-h0 = 0.2\n\ntrials=3  # three\n")
        assert values == {"min_h0": 0.2, "trials": 3}
        with pytest.raises(ConfigError):
            parse_config_text("trials 3\n")

    def test_precedence(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("trials = 4\ndelta = 1/2\nseed = 9\n")
        config = load_config(str(path), overrides={"seed": 2, "workers": None})
        assert config.trials == 4
        assert config.delta == 0.5
        assert config.seed == 2
        assert config.workers == 1

    def test_bad_values(self, config):
        with pytest.raises(ConfigError):
            config.override({"colour": "red"})
        with pytest.raises(ConfigError):
            config.override({"trials": "many"})
        with pytest.raises(ConfigError):
            config.override({"trials": 2.5})
        assert config.override({"trials": 2.0}).trials == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(str(tmp_path / "absent.cfg"))

    def test_gadget_options_pick_family_beta(self, config):
        assert config.gadget_options("densest", 1)["beta"] == config.densest_beta
        assert config.gadget_options("matching", 1)["beta"] == config.beta


class TestAdapters:
    @pytest.fixture
    def path3(self):
        graph = DynamicGraph(3)
        graph.add_edges([(0, 1), (1, 2)])
        return graph

    def test_recompute_follows_updates(self, path3):
        adapter = RecomputeAdapter()
        adapter.init(path3)
        assert adapter.query(DISTANCE, s=0, t=2) == 2
        adapter.apply(UpdateOp(INSERT, 0, 2))
        assert adapter.query(DISTANCE, s=0, t=2) == 1
        assert adapter.query(MATCHING_SIZE) == 1
        assert adapter.updates == 1 and adapter.queries == 3
        assert path3.edge_count == 2

    def test_unsupported_query(self, path3):
        adapter = RecomputeBFSAdapter()
        adapter.init(path3)
        with pytest.raises(AdapterError):
            adapter.query(MATCHING_SIZE)

    def test_update_errors_are_wrapped(self, path3):
        adapter = RecomputeAdapter()
        with pytest.raises(AdapterError):
            adapter.apply(UpdateOp(INSERT, 0, 2))
        adapter.init(path3)
        with pytest.raises(AdapterError):
            adapter.apply(UpdateOp(INSERT, 0, 1))

    def test_scaled_distances(self, path3, config):
        adapter = ScaledDistanceAdapter(1.5)
        adapter.init(path3)
        assert adapter.query(DISTANCE, s=0, t=2) == 3
        with pytest.raises(ValueError):
            ScaledDistanceAdapter(0.5)
        assert adapter_for(config, "scaled-bfs").factor == 1.5

    def test_registry(self):
        assert isinstance(make_adapter("recompute"), RecomputeAdapter)
        with pytest.raises(ValueError):
            make_adapter("oracle")


class TestRunner:
    def test_run_cell_passes(self, config):
        run = run_cell(Cell("st", "const", 2, 0), config)
        assert run.passed
        assert all(p.queries == 1 for p in run.pairs)
        assert [p.bit for p in run.pairs] == [p.oracle for p in run.pairs]

    @pytest.mark.parametrize("family, variant", [("matching", "const"), ("densest", "const"),
                                                 ("decremental", "st"), ("incremental", "matching"),
                                                 ("st", "approx")])
    def test_families_pass(self, config, family, variant):
        assert run_cell(Cell(family, variant, 2, 1), config).passed

    def test_scaled_adapter_with_approximate_decoding(self, config):
        scaled = config.override({"adapter": "scaled-bfs"})
        run = run_cell(Cell("st", "approx", 2, 3), scaled)
        assert run.passed

    def test_padding_for_trees(self):
        instance = generate_instance(3, "uniform", 0)
        assert prepare_instance("st", "const", instance).n == 4
        assert prepare_instance("matching", "const", instance) is instance

    def test_wrong_answers_fail_fast(self, config, ones_instance):
        driver = build_driver("st", "const", ones_instance, config.gadget_options("st", 0))
        adapter = FaultyAdapter(RecomputeAdapter(), perturb=lambda d: d + 1)
        with pytest.raises(OracleMismatchError) as caught:
            run_reduction(driver, ones_instance, adapter)
        repro = caught.value.repro()
        assert repro.startswith("2\n11\n11\n")
        assert "# updates" in repro
        assert "+ " in repro

    def test_adapter_failure_names_the_pair(self, config, mixed_instance):
        driver = build_driver("matching", "const", mixed_instance, config.gadget_options("matching", 0))
        adapter = FaultyAdapter(RecomputeAdapter(), fail_after=2)
        with pytest.raises(AdapterError, match="Pair 1"):
            run_reduction(driver, mixed_instance, adapter)

    def test_runs_are_deterministic(self, config):
        first = run_cell(Cell("matching", "varying", 4, 5), config)
        second = run_cell(Cell("matching", "varying", 4, 5), config)
        assert to_json(first.to_dict()) == to_json(second.to_dict())

    def test_make_cells(self):
        cells = make_cells("st", "const", [2, 4], 3, trials=2)
        assert [(c.n, c.seed) for c in cells] == [(2, 3), (2, 4), (4, 3), (4, 4)]
        with pytest.raises(ValueError):
            make_cells("st", "const", [2], 0, trials=0)
        with pytest.raises(ValueError):
            make_cells("flow", "const", [2], 0)

    @pytest.mark.slow
    def test_worker_pool_matches_serial(self, config):
        cells = make_cells("matching", "const", [2, 3], 0, trials=2)
        serial = [run.to_dict() for run in run_cells(cells, config, workers=1)]
        pooled = [run.to_dict() for run in run_cells(cells, config, workers=2)]
        assert serial == pooled


class TestVerification:
    @pytest.mark.parametrize("family, variant", [("matching", "const"), ("st", "const"),
                                                 ("densest", "const"), ("decremental", "st")])
    def test_small_constructions_verify(self, config, family, variant):
        report = verify_construction(family, variant, 2, config, seeds=[0, 1])
        assert report.passed, [item.to_dict() for item in report.failures()]
        names = {item.name for item in report.items}
        assert "node_count" in names and "oracle[seed=1]" in names

    def test_bounded_degree_checks(self, config):
        report = verify_construction("matching", "const", 3, config, trials=1)
        names = {item.name for item in report.items}
        assert {"max_degree[seed=0]", "bipartite[seed=0]", "update_budget[seed=0]"} <= names

    def test_densest_gadget_checks(self, config):
        report = verify_construction("densest", "const", 2, config, seeds=[0])
        items = {item.name: item for item in report.items}
        assert items["gadget_densities"].passed
        assert items["density_threshold"].value == 3 + Fraction(1, 21)

    @pytest.mark.slow
    def test_power_law_matching_tables(self, config):
        report = verify_construction("matching", "powerlaw", 2, config, seeds=[3])
        items = {item.name: item for item in report.items}
        assert items["left_degree_table"].passed
        assert items["left_degree_table"].expected == expected_left_table(2)
        assert items["query_histogram"].passed

    def test_verify_rows(self, config):
        report = verify_construction("st", "const", 2, config, seeds=[0])
        rows = verify_rows([report])
        assert len(rows) == len(report.items)
        text = to_csv(rows, VERIFY_COLUMNS)
        assert text.splitlines()[0] == ",".join(VERIFY_COLUMNS)


class TestBenchAndReports:
    def test_bench_rows(self, config):
        rows = bench("st", "const", [4, 2], config, seed=0)
        assert [row["n"] for row in rows] == [2, 4]
        assert all(row["mismatches"] == 0 for row in rows)
        assert set(BENCH_COLUMNS) <= set(rows[0])

    def test_scaling_fit(self):
        rows = [{"pairs": n, "padded_n": n, "total_updates": 3 * n ** 2 * n} for n in (2, 4, 8)]
        fit = fit_update_scaling(rows)
        assert fit.exponent == pytest.approx(2.0)
        assert fit.coefficient == pytest.approx(3.0)
        assert fit_update_scaling(rows[:1]) is None

    def test_json_is_sorted_and_exact(self):
        text = to_json({"b": Fraction(1, 3), "a": float("inf"), "c": [1.5]})
        assert json.loads(text) == {"a": "inf", "b": "1/3", "c": [1.5]}
        assert text.index('"a"') < text.index('"b"')

    def test_csv_formatting(self):
        text = to_csv([{"x": 0.1234567, "y": None, "z": Fraction(2, 4)}], ["z", "y", "x"], precision=3)
        assert text == "z,y,x\n1/2,,0.123\n"

    def test_write_text(self, tmp_path):
        path = write_text("hello\n", tmp_path / "nested" / "out.txt")
        assert path.read_text() == "hello\n"


class TestExport:
    def test_edge_list_and_map(self, config, mixed_instance):
        edges = export_construction("matching", "const", mixed_instance, "edges", config)
        assert edges.startswith("34 ")
        mapping = export_construction("matching", "const", mixed_instance, "map", config)
        assert mapping.splitlines()[0] == "L2[0] 0"
        assert len(mapping.splitlines()) == 34

    def test_dot_highlights_base_matching(self, config, mixed_instance):
        dot = export_construction("matching", "const", mixed_instance, "dot", config,
                                  apply_first_pair=True)
        assert dot.startswith("graph matching_const {")
        assert "color=red" in dot

    def test_unknown_format(self, config, mixed_instance):
        with pytest.raises(ValueError):
            export_construction("st", "const", mixed_instance, "svg", config)
