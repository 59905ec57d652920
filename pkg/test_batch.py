#!/usr/bin/env python3
"""
Tests for the batch runner: replicate seeding, ordering and lifecycle logging
"""

import json

import pandas as pd
import pytest

from siot_sim.block2_engine import BatchRunner, replicate_seeds, run, run_batch
from siot_sim.block5_logging import SystemLogger
from siot_sim.config import ConfigError


def _rows(result):
    return [row.to_dict() for row in result.daily]


def test_replicate_seeds_are_consecutive(config_factory):
    assert replicate_seeds(config_factory(seed=11), 3) == [11, 12, 13]
    assert replicate_seeds(config_factory(seed=2 ** 64 - 1), 2) == [2 ** 64 - 1, 0]


def test_single_replicate_equals_plain_run(small_config):
    batch = run_batch(small_config, 1)
    assert _rows(batch.runs[0]) == _rows(run(small_config))
    assert batch.aggregate["not_served_std"].eq(0.0).all()


def test_replicates_use_their_own_seeds(small_config):
    batch = run_batch(small_config, 3)
    assert [result.seed for result in batch.runs] == [11, 12, 13]
    assert _rows(batch.runs[1]) == _rows(run(small_config, 12))


def test_zero_runs_rejected(small_config):
    with pytest.raises(ConfigError):
        run_batch(small_config, 0)


def test_serial_and_parallel_agree(small_config):
    serial = run_batch(small_config, 4, workers=1)
    parallel = run_batch(small_config, 4, workers=2)

    assert [_rows(r) for r in serial.runs] == [_rows(r) for r in parallel.runs]
    pd.testing.assert_frame_equal(serial.aggregate, parallel.aggregate)


@pytest.mark.asyncio
async def test_runner_logs_lifecycle(tmp_path, small_config):
    system_logger = SystemLogger(tmp_path)
    runner = BatchRunner(workers=1, system_logger=system_logger)

    batch = await runner.run_batch_async(small_config, 2)
    assert len(batch.runs) == 2

    lines = (tmp_path / "operations.jsonl").read_text(encoding="utf-8").splitlines()
    events = [json.loads(line)["event"] for line in lines]
    assert events == ["batch_started", "run_started", "run_completed", "run_started", "run_completed", "batch_completed"]

    stats = await system_logger.get_run_stats()
    assert stats["runs_completed"] == 2
    assert stats["batches_completed"] == 1
    assert stats["errors"] == []


@pytest.mark.asyncio
async def test_logged_errors_are_reported(tmp_path):
    system_logger = SystemLogger(tmp_path)
    await system_logger.log_error("run", "disk full")
    await system_logger.log_cell_failed(3, "stationary", "boom")

    stats = await system_logger.get_run_stats()
    assert stats["cells_failed"] == 1
    assert [error["message"] for error in stats["errors"]] == ["disk full", "boom"]
