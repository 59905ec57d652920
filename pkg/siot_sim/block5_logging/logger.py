"""
Block 5: Run Logging and Monitoring
Records run, batch and scenario-cell lifecycle events for debugging and performance analysis
"""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Union

import structlog

from ..config import settings

# Configure structured logging
structlog.configure(
    processors=[
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
        structlog.processors.JSONRenderer()
    ],
    context_class=dict,
    logger_factory=structlog.stdlib.LoggerFactory(),
    cache_logger_on_first_use=True,
)

logger = logging.getLogger(__name__)


class SystemLogger:
    """Structured lifecycle log; never part of the result artefacts"""

    def __init__(self, log_dir: Optional[Union[str, Path]] = None):
        self.structured_logger = structlog.get_logger("siot_sim")

        self.log_dir = Path(log_dir or settings.log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)

        self.operations_log = self.log_dir / "operations.jsonl"
        self.errors_log = self.log_dir / "errors.jsonl"

    async def _write_local_log(self, log_file: Path, data: Dict[str, Any]):
        """Append one JSON record to a local log file"""
        try:
            with open(log_file, "a", encoding="utf-8") as f:
                f.write(json.dumps(data) + "\n")
        except OSError as e:
            logger.error(f"Failed to write local log: {e}")

    async def _record(self, event: str, **fields: Any):
        log_data = {"timestamp": datetime.now().isoformat(), "event": event, **fields}
        self.structured_logger.info(event, **fields)
        await self._write_local_log(self.operations_log, log_data)

    # Replicate logging

    async def log_run_started(self, seed: int, population: int, horizon_days: int):
        await self._record("run_started", seed=seed, population=population, horizon_days=horizon_days)

    async def log_run_completed(self, seed: int, total_not_served: int, duration_seconds: float):
        await self._record(
            "run_completed",
            seed=seed,
            total_not_served=total_not_served,
            duration_seconds=round(duration_seconds, 3),
        )

    # Batch logging

    async def log_batch_started(self, seed: int, runs: int, workers: int):
        await self._record("batch_started", seed=seed, runs=runs, workers=workers)

    async def log_batch_completed(self, seed: int, runs: int, duration_seconds: float):
        await self._record("batch_completed", seed=seed, runs=runs, duration_seconds=round(duration_seconds, 3))

    # Scenario matrix logging

    async def log_cell_completed(self, case_id: int, mobility: str, out_dir: str):
        await self._record("cell_completed", case_id=case_id, mobility=mobility, out_dir=out_dir)

    async def log_cell_failed(self, case_id: int, mobility: str, error_message: str):
        log_data = {
            "timestamp": datetime.now().isoformat(),
            "event": "cell_failed",
            "case_id": case_id,
            "mobility": mobility,
            "error_message": error_message,
        }
        self.structured_logger.warning("cell_failed", case_id=case_id, mobility=mobility, error_message=error_message)
        await self._write_local_log(self.operations_log, log_data)
        await self._write_local_log(self.errors_log, log_data)

    # Error logging

    async def log_error(self, operation: str, error_message: str):
        """Log errors with high priority"""
        log_data = {
            "timestamp": datetime.now().isoformat(),
            "event": "error",
            "operation": operation,
            "error_message": error_message,
            "severity": "high",
        }
        self.structured_logger.error("error_occurred", operation=operation, error_message=error_message)
        await self._write_local_log(self.errors_log, log_data)

    # Analytics

    async def get_run_stats(self) -> Dict[str, Any]:
        """Summarise the local logs: counts of runs, batches, cells and errors"""
        stats: Dict[str, Any] = {
            "runs_completed": 0,
            "batches_completed": 0,
            "cells_completed": 0,
            "cells_failed": 0,
            "total_run_seconds": 0.0,
            "errors": [],
        }

        if self.operations_log.exists():
            with open(self.operations_log, "r", encoding="utf-8") as f:
                for line in f:
                    try:
                        entry = json.loads(line)
                    except json.JSONDecodeError:
                        continue
                    event = entry.get("event")
                    if event == "run_completed":
                        stats["runs_completed"] += 1
                        stats["total_run_seconds"] += entry.get("duration_seconds", 0.0)
                    elif event == "batch_completed":
                        stats["batches_completed"] += 1
                    elif event == "cell_completed":
                        stats["cells_completed"] += 1
                    elif event == "cell_failed":
                        stats["cells_failed"] += 1

        if self.errors_log.exists():
            with open(self.errors_log, "r", encoding="utf-8") as f:
                for line in f:
                    try:
                        entry = json.loads(line)
                    except json.JSONDecodeError:
                        continue
                    stats["errors"].append({
                        "operation": entry.get("operation") or entry.get("event"),
                        "message": entry.get("error_message", "")[:100],
                    })

        return stats
