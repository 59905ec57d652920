#!/usr/bin/env python3
"""
Tests for the command-line interface and the scenario matrix
"""

import json
import logging

import pytest

from siot_sim.block1_cli import build_parser, main, matrix_cells, parse_case_list, scenario_table
from siot_sim.block1_cli.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_PARTIAL, resolve_config
from siot_sim.block1_cli.scenarios import cell_dirname
from siot_sim.block2_engine import BatchRunner
from siot_sim.config import ConfigError, MobilityMode, NetworkType, Strategy


class TestScenarioMatrix:

    def test_table_has_thirty_six_cases(self):
        rows = scenario_table()
        assert [row.case_id for row in rows] == list(range(1, 37))
        assert len(matrix_cells()) == 108

    def test_known_cases(self):
        rows = {row.case_id: row for row in scenario_table()}
        assert (rows[1].strategy, rows[1].population, rows[1].network) == (Strategy.COMPETITIVE, 100, NetworkType.MESH)
        assert (rows[8].population, rows[8].network, rows[8].beta) == (250, NetworkType.SMALL_WORLD, 0.2)
        assert rows[13].strategy is Strategy.COOPERATIVE
        assert rows[36].strategy is Strategy.COOPERATIVE_RESTRICTED
        assert rows[36].population == 500

    def test_case_selection(self):
        assert parse_case_list("5,17,29") == [5, 17, 29]
        assert parse_case_list("1-3, 2") == [1, 2, 3]
        assert len(matrix_cells([5, 17, 29])) == 9

    @pytest.mark.parametrize("text", ["0", "37", "a,b", ""])
    def test_bad_case_selection(self, text):
        with pytest.raises(ConfigError):
            parse_case_list(text)

    def test_cell_dirname(self):
        row = scenario_table()[4]
        assert cell_dirname(row, MobilityMode.STATIONARY) == "case05_stationary"

    def test_overrides_pin_beta_only_for_small_world(self):
        rows = scenario_table()
        assert "beta" not in rows[0].overrides(MobilityMode.RANDOM_WALK)
        assert rows[2].overrides(MobilityMode.RANDOM_WALK)["beta"] == 0.1

    def test_print_matrix(self, capsys):
        assert main(["matrix", "--print-matrix"]) == EXIT_OK
        output = capsys.readouterr().out.splitlines()
        assert len(output) == 37
        assert output[8].startswith("Case 8")
        assert "small world (beta = 0.2)" in output[8]


class TestResolveConfig:

    def test_flags_override_file(self, small_config_file):
        args = build_parser().parse_args([
            "run", "--config", str(small_config_file()), "--population", "12", "--network", "small-world",
        ])
        cfg = resolve_config(args)
        assert cfg.population == 12
        assert cfg.network is NetworkType.SMALL_WORLD
        assert cfg.minutes_per_day == 120

    def test_beta_ignored_warning(self, small_config_file, caplog):
        args = build_parser().parse_args([
            "run", "--config", str(small_config_file()), "--network", "mesh", "--beta", "0.3",
        ])
        with caplog.at_level(logging.WARNING):
            resolve_config(args)
        assert "beta ignored for mesh network" in caplog.text


class TestRunCommand:

    def _run(self, config_path, out_dir, *extra):
        return main(["run", "--config", str(config_path), "--runs", "2", "--workers", "1", "--out", str(out_dir), *extra])

    def test_writes_every_artefact(self, tmp_path, small_config_file):
        out = tmp_path / "out"
        assert self._run(small_config_file(), out) == EXIT_OK

        for name in ("runs/run_000.csv", "runs/run_001.csv", "batch.csv", "summary.json", "manifest.txt"):
            assert (out / name).exists(), name

        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
        assert summary["runs"] == 2
        assert [run["seed"] for run in summary["per_run"]] == [11, 12]
        assert len(summary["daily_mean"]) == 2

    def test_reruns_are_byte_identical(self, tmp_path, small_config_file):
        config_path = small_config_file()
        first, second = tmp_path / "first", tmp_path / "second"
        assert self._run(config_path, first) == EXIT_OK
        assert self._run(config_path, second) == EXIT_OK

        written = sorted(p.relative_to(first) for p in first.rglob("*") if p.is_file())
        assert written
        for relative in written:
            assert (first / relative).read_bytes() == (second / relative).read_bytes()

    def test_optional_dumps(self, tmp_path, small_config_file):
        out = tmp_path / "out"
        code = self._run(
            small_config_file(network="small_world", beta=1.0),
            out,
            "--snapshot-at", "60", "--dump-links", "--dump-social",
        )
        assert code == EXIT_OK
        assert (out / "snapshots" / "snapshot_run_000_iter_60.csv").exists()
        assert (out / "links" / "links_run_001.csv").read_text(encoding="utf-8").startswith("peer_a,peer_b")
        social = (out / "social" / "social_run_000.csv").read_text(encoding="utf-8").splitlines()
        assert len(social) == 1 + 20

    def test_trace_positions_single_run(self, tmp_path, small_config_file):
        out = tmp_path / "out"
        config_path = small_config_file(mobility="random_walk", horizon_days=1)
        code = main(["run", "--config", str(config_path), "--runs", "1", "--trace-positions", "--out", str(out)])
        assert code == EXIT_OK
        trace = (out / "trace_positions.csv").read_text(encoding="utf-8").splitlines()
        assert trace[0] == "iteration,peer_id,x,y"
        assert len(trace) == 1 + 120 * 20

    @pytest.mark.parametrize(
        "extra",
        [
            ["--runs", "0"],
            ["--beta", "2"],
            ["--runs", "2", "--trace-positions"],
            ["--snapshot-at", "100000"],
        ],
    )
    def test_configuration_errors(self, tmp_path, small_config_file, extra, capsys):
        code = main(["run", "--config", str(small_config_file()), "--out", str(tmp_path / "out"), *extra])
        assert code == EXIT_CONFIG
        assert capsys.readouterr().err

    def test_violations_are_listed(self, tmp_path, small_config_file, capsys):
        code = main(["run", "--config", str(small_config_file()), "--beta", "2", "--out", str(tmp_path)])
        assert code == EXIT_CONFIG
        assert "beta outside [0,1]" in capsys.readouterr().err

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as info:
            main(["run", "--populaton", "5"])
        assert info.value.code == 2

    def test_missing_config_file(self, tmp_path):
        code = main(["run", "--config", str(tmp_path / "missing.yaml"), "--out", str(tmp_path / "out")])
        assert code == EXIT_IO

    def test_integer_range_without_whole_number(self, tmp_path, small_config_file, capsys):
        ranges = {
            "up_time": [0, 20],
            "down_time": [90, 119],
            "idle_time": [3.2, 3.8],
            "consistency": [0.5, 1.0],
            "serv0perc": [0.1, 0.3],
        }
        config_path = small_config_file(peer_param_ranges=ranges)
        code = main(["run", "--config", str(config_path), "--runs", "1", "--out", str(tmp_path / "out")])
        assert code == EXIT_CONFIG
        assert "no whole number" in capsys.readouterr().err


class TestMatrixCommand:

    def test_single_case_writes_index(self, tmp_path, small_config_file):
        out = tmp_path / "matrix"
        config_path = small_config_file(horizon_days=1)
        code = main(["matrix", "--config", str(config_path), "--cases", "1", "--runs", "1", "--workers", "1", "--out", str(out)])
        assert code == EXIT_OK

        index = json.loads((out / "index.json").read_text(encoding="utf-8"))
        assert sorted(index["cells"]) == ["case01_profile_based", "case01_random_walk", "case01_stationary"]
        assert index["failures"] == {}
        for cell in index["cells"].values():
            assert cell["case_id"] == 1
            for key, value in cell["files"].items():
                for path in (value if isinstance(value, list) else [value]):
                    assert (out / path).exists(), path

    def test_bad_case_list(self, tmp_path):
        code = main(["matrix", "--cases", "99", "--out", str(tmp_path)])
        assert code == EXIT_CONFIG

    def test_unexpected_cell_error_does_not_stop_the_matrix(self, tmp_path, small_config_file, monkeypatch):
        original = BatchRunner.run_batch_async
        calls = []

        async def first_cell_breaks(self, cfg, n_runs, snapshot_at=None):
            calls.append(cfg.mobility)
            if len(calls) == 1:
                raise RuntimeError("process pool broke")
            return await original(self, cfg, n_runs, snapshot_at=snapshot_at)

        monkeypatch.setattr(BatchRunner, "run_batch_async", first_cell_breaks)
        out = tmp_path / "matrix"
        config_path = small_config_file(horizon_days=1)
        code = main(["matrix", "--config", str(config_path), "--cases", "1", "--runs", "1", "--workers", "1", "--out", str(out)])
        assert code == EXIT_PARTIAL

        index = json.loads((out / "index.json").read_text(encoding="utf-8"))
        assert len(calls) == 3
        assert len(index["cells"]) == 2
        assert list(index["failures"].values()) == ["process pool broke"]
