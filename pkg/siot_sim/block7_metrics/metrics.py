"""
Block 7: Metrics
Per-day event counters for one replicate and mean / spread across a batch
"""

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Iterable, List, Sequence, Tuple, Union

import pandas as pd

from ..config.simulation_config import InternalError, SimulationError
from ..block3_peers.peer import EventKind, Peer, PeerStatus

if TYPE_CHECKING:
    from ..block2_engine.engine import RunResult

logger = logging.getLogger(__name__)

METRIC_COLUMNS: Tuple[str, ...] = (
    "not_served",
    "requests_generated",
    "scu_granted",
    "services_completed",
    "serves_activated",
    "conflicts_resolved",
)

CSV_COLUMNS: Tuple[str, ...] = ("day",) + METRIC_COLUMNS

EVENT_COUNTERS: Dict[EventKind, str] = {
    EventKind.REQUEST_NOT_SERVED: "not_served",
    EventKind.SERVICE_ASSIGNED: "requests_generated",
    EventKind.SCU_GRANTED: "scu_granted",
    EventKind.SERVICE_COMPLETED: "services_completed",
    EventKind.SERVE_STARTED: "serves_activated",
    EventKind.CONFLICT_RESOLVED: "conflicts_resolved",
}


@dataclass
class DailyMetrics:
    """Event counts for one simulated day"""
    day: int
    not_served: int = 0
    requests_generated: int = 0
    scu_granted: int = 0
    services_completed: int = 0
    serves_activated: int = 0
    conflicts_resolved: int = 0
    # End-of-day census, keyed by status name
    status_counts: Dict[str, int] = field(default_factory=dict)

    def as_row(self) -> Dict[str, int]:
        return {column: getattr(self, column) for column in CSV_COLUMNS}

    def to_dict(self) -> Dict[str, object]:
        row: Dict[str, object] = dict(self.as_row())
        row["status_counts"] = dict(self.status_counts)
        return row


def status_census(peers: Iterable[Peer]) -> Dict[str, int]:
    """Number of peers per status, every status present"""
    counts = {status.name.lower(): 0 for status in PeerStatus}
    for peer in peers:
        counts[peer.status.name.lower()] += 1
    return counts


class MetricsAccumulator:
    """Dense per-day counters for one replicate"""

    def __init__(self, horizon_days: int):
        if horizon_days < 1:
            raise SimulationError(f"horizon_days must be positive, got {horizon_days}")
        self.horizon_days = horizon_days
        self.daily: List[DailyMetrics] = [DailyMetrics(day=day) for day in range(1, horizon_days + 1)]

    def _row(self, day: int) -> DailyMetrics:
        if not 1 <= day <= self.horizon_days:
            raise InternalError(f"day {day} outside horizon 1..{self.horizon_days}")
        return self.daily[day - 1]

    def record(self, day: int, event: Union[EventKind, str]) -> None:
        try:
            kind = EventKind(event)
        except ValueError:
            raise InternalError(f"unknown metric event {event!r}")

        counter = EVENT_COUNTERS.get(kind)
        if counter is None:
            raise InternalError(f"no counter for event {kind.value}")

        row = self._row(day)
        setattr(row, counter, getattr(row, counter) + 1)

    def record_many(self, day: int, events: Iterable[Union[EventKind, str]]) -> None:
        for event in events:
            self.record(day, event)

    def record_status_counts(self, day: int, peers: Iterable[Peer]) -> None:
        self._row(day).status_counts = status_census(peers)


def record_event(metrics: MetricsAccumulator, day: int, event: Union[EventKind, str]) -> MetricsAccumulator:
    """Increment the counter matching event on the given day"""
    metrics.record(day, event)
    return metrics


def daily_frame(daily: Sequence[DailyMetrics]) -> pd.DataFrame:
    """Per-run table with the fixed CSV column order"""
    return pd.DataFrame([row.as_row() for row in daily], columns=list(CSV_COLUMNS))


def aggregate_batch(results: Sequence["RunResult"]) -> pd.DataFrame:
    """
    Per-day mean and sample standard deviation of every counter

    A single run has std 0 by convention.

    Returns:
        Frame with columns day, <counter>_mean, <counter>_std
    """
    if not results:
        raise SimulationError("aggregate_batch needs at least one run")

    horizons = {len(result.daily) for result in results}
    if len(horizons) != 1:
        raise SimulationError(f"runs disagree on horizon_days: {sorted(horizons)}")

    frames = [daily_frame(result.daily).assign(run=index) for index, result in enumerate(results)]
    stacked = pd.concat(frames, ignore_index=True)
    grouped = stacked.groupby("day", sort=True)[list(METRIC_COLUMNS)]

    means = grouped.mean().add_suffix("_mean")
    stds = grouped.std(ddof=1).fillna(0.0).add_suffix("_std")

    ordered = []
    for column in METRIC_COLUMNS:
        ordered.extend([f"{column}_mean", f"{column}_std"])

    aggregate = pd.concat([means, stds], axis=1)[ordered].reset_index()
    logger.debug(f"Aggregated {len(results)} runs over {len(aggregate)} days")
    return aggregate


def warmup_contrast(
    daily: Sequence[DailyMetrics],
    early: Tuple[int, int] = (1, 7),
    late: Tuple[int, int] = (24, 30),
) -> Tuple[float, float]:
    """Mean daily not_served over two inclusive day windows"""
    frame = daily_frame(daily).set_index("day")["not_served"]

    def window_mean(bounds: Tuple[int, int]) -> float:
        window = frame.loc[bounds[0]:bounds[1]]
        if window.empty:
            raise SimulationError(f"day window {bounds} outside the run")
        return float(window.mean())

    return window_mean(early), window_mean(late)


def grand_mean_not_served(results: Sequence["RunResult"], first_day: int = 1, last_day: int = 0) -> float:
    """Mean daily not_served over a day window and across runs"""
    if not results:
        raise SimulationError("grand_mean_not_served needs at least one run")
    values = []
    for result in results:
        frame = daily_frame(result.daily)
        end = last_day or int(frame["day"].max())
        values.append(frame.loc[frame["day"].between(first_day, end), "not_served"].mean())
    return float(pd.Series(values).mean())
