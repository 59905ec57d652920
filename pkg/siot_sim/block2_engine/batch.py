"""
Block 2: Batch Runner
Runs replicates concurrently and assembles them in replicate order
"""

import asyncio
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, List, Mapping, Optional, Union

import pandas as pd

from ..config import settings
from ..config.simulation_config import ConfigError, SimulationConfig, validate_config
from ..block5_logging.logger import SystemLogger
from ..block7_metrics.metrics import aggregate_batch
from .engine import RunResult, run
from .streams import SEED_MODULUS

logger = logging.getLogger(__name__)


@dataclass
class BatchResult:
    """Per-run results (replicate order) plus the per-day mean / std table"""
    runs: List[RunResult]
    aggregate: pd.DataFrame


def replicate_seeds(cfg: SimulationConfig, n_runs: int) -> List[int]:
    """Replicate i uses seed cfg.seed + i (mod 2**64)"""
    return [(cfg.seed + i) % SEED_MODULUS for i in range(n_runs)]


def _run_replicate(cfg: SimulationConfig, seed: int, snapshot_at: Optional[int]) -> RunResult:
    # Module-level so worker processes can unpickle it
    return run(cfg, seed, snapshot_at=snapshot_at)


class BatchRunner:
    """Orchestrates the replicates of one experiment"""

    def __init__(self, workers: Optional[int] = None, system_logger: Optional[SystemLogger] = None):
        self.workers = settings.effective_workers(workers)
        self.system_logger = system_logger

    async def _log(self, method: str, **fields: Any):
        if self.system_logger is not None:
            await getattr(self.system_logger, method)(**fields)

    async def _run_one(
        self,
        cfg: SimulationConfig,
        seed: int,
        snapshot_at: Optional[int],
        semaphore: asyncio.Semaphore,
        pool: Optional[ProcessPoolExecutor],
    ) -> RunResult:
        async with semaphore:
            await self._log("log_run_started", seed=seed, population=cfg.population, horizon_days=cfg.horizon_days)
            start = time.perf_counter()

            if pool is None:
                result = _run_replicate(cfg, seed, snapshot_at)
            else:
                loop = asyncio.get_running_loop()
                result = await loop.run_in_executor(pool, _run_replicate, cfg, seed, snapshot_at)

            await self._log(
                "log_run_completed",
                seed=seed,
                total_not_served=result.total_not_served,
                duration_seconds=time.perf_counter() - start,
            )
            return result

    async def run_batch_async(
        self,
        cfg: Union[SimulationConfig, Mapping[str, Any]],
        n_runs: int,
        snapshot_at: Optional[int] = None,
    ) -> BatchResult:
        """
        Run n_runs replicates and average them per day

        Serial and concurrent execution give identical results: every
        replicate depends only on (cfg, seed) and gather keeps input order.
        """
        if n_runs < 1:
            raise ConfigError(f"n_runs must be at least 1, got {n_runs}")

        cfg = validate_config(cfg)
        seeds = replicate_seeds(cfg, n_runs)
        workers = min(self.workers, n_runs)

        logger.info(f"Starting batch: {n_runs} runs, seed={cfg.seed}, workers={workers}")
        await self._log("log_batch_started", seed=cfg.seed, runs=n_runs, workers=workers)
        start = time.perf_counter()

        semaphore = asyncio.Semaphore(workers)
        if workers == 1:
            runs = [await self._run_one(cfg, seed, snapshot_at, semaphore, None) for seed in seeds]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                runs = list(await asyncio.gather(
                    *(self._run_one(cfg, seed, snapshot_at, semaphore, pool) for seed in seeds)
                ))

        aggregate = aggregate_batch(runs)

        duration = time.perf_counter() - start
        await self._log("log_batch_completed", seed=cfg.seed, runs=n_runs, duration_seconds=duration)
        logger.info(f"Batch finished in {duration:.1f}s")
        return BatchResult(runs=runs, aggregate=aggregate)

    def run_batch(
        self,
        cfg: Union[SimulationConfig, Mapping[str, Any]],
        n_runs: int,
        snapshot_at: Optional[int] = None,
    ) -> BatchResult:
        return asyncio.run(self.run_batch_async(cfg, n_runs, snapshot_at=snapshot_at))


def run_batch(
    cfg: Union[SimulationConfig, Mapping[str, Any]],
    n_runs: int,
    workers: Optional[int] = 1,
    snapshot_at: Optional[int] = None,
) -> BatchResult:
    """Run a batch without lifecycle logging; serial unless workers > 1"""
    return BatchRunner(workers=workers).run_batch(cfg, n_runs, snapshot_at=snapshot_at)
