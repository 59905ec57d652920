"""
Block 7: Reports
CSV / JSON / manifest writers for runs, batches and the scenario matrix
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple

import pandas as pd
from tenacity import retry, retry_if_exception_type, stop_after_attempt, wait_exponential

from .. import __version__
from ..config.simulation_config import SimulationConfig
from .metrics import DailyMetrics, daily_frame

logger = logging.getLogger(__name__)

ARTIFACT_VERSION = f"siot_sim/{__version__}"

# Transient filesystem errors are retried, anything else surfaces at once
_io_retry = retry(
    stop=stop_after_attempt(3),
    wait=wait_exponential(multiplier=0.1, min=0.1, max=1),
    retry=retry_if_exception_type(OSError),
    reraise=True,
)


def _prepare(path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


@_io_retry
def write_frame(path: Path, frame: pd.DataFrame) -> Path:
    path = _prepare(path)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def write_run_csv(path: Path, daily: Sequence[DailyMetrics]) -> Path:
    """day,not_served,requests_generated,scu_granted,services_completed,serves_activated,conflicts_resolved"""
    return write_frame(path, daily_frame(daily))


def write_batch_csv(path: Path, aggregate: pd.DataFrame) -> Path:
    return write_frame(path, aggregate)


@_io_retry
def write_json(path: Path, payload: Any) -> Path:
    path = _prepare(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def config_record(cfg: SimulationConfig) -> Dict[str, Any]:
    """JSON-ready effective configuration"""
    return cfg.model_dump(mode="json")


@_io_retry
def write_manifest(path: Path, cfg: SimulationConfig, runs: int) -> Path:
    """Audit record stored next to every CSV: version, seed, run count, effective config"""
    path = _prepare(path)
    lines = [
        f"artifact_version: {ARTIFACT_VERSION}",
        f"seed: {cfg.seed}",
        f"runs: {runs}",
        "config: " + json.dumps(config_record(cfg), sort_keys=True),
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")
    return path


def write_snapshot_csv(path: Path, rows: Iterable[Mapping[str, Any]]) -> Path:
    """Peer statuses and positions at one iteration"""
    frame = pd.DataFrame(list(rows), columns=["iteration", "peer_id", "status", "x", "y"])
    return write_frame(path, frame)


def write_positions_trace(path: Path, rows: Iterable[Mapping[str, Any]]) -> Path:
    frame = pd.DataFrame(list(rows), columns=["iteration", "peer_id", "x", "y"])
    return write_frame(path, frame)


def write_links_csv(path: Path, edges: Sequence[Tuple[int, int]]) -> Path:
    frame = pd.DataFrame(list(edges), columns=["peer_a", "peer_b"])
    return write_frame(path, frame)


def write_social_csv(path: Path, sizes: Sequence[Mapping[str, int]]) -> Path:
    """Per-peer social table sizes at the end of a run"""
    frame = pd.DataFrame(list(sizes), columns=["peer_id", "n_neighbors", "n_contacts", "n_friends"])
    return write_frame(path, frame)


def batch_summary(
    cfg: SimulationConfig,
    runs: Sequence[Any],
    aggregate: pd.DataFrame,
) -> Dict[str, Any]:
    """JSON summary of a batch: totals per run, daily means and status census"""
    per_run: List[Dict[str, Any]] = []
    for index, result in enumerate(runs):
        frame = daily_frame(result.daily)
        per_run.append({
            "run": index,
            "seed": result.seed,
            "totals": {column: int(frame[column].sum()) for column in frame.columns if column != "day"},
            "status_counts": [row.status_counts for row in result.daily],
        })

    return {
        "artifact_version": ARTIFACT_VERSION,
        "seed": cfg.seed,
        "runs": len(runs),
        "horizon_days": cfg.horizon_days,
        "config": config_record(cfg),
        "daily_mean": aggregate.to_dict(orient="records"),
        "per_run": per_run,
    }
