"""Block 7: Metrics and reports"""

from .metrics import (
    CSV_COLUMNS,
    METRIC_COLUMNS,
    DailyMetrics,
    MetricsAccumulator,
    aggregate_batch,
    daily_frame,
    grand_mean_not_served,
    record_event,
    status_census,
    warmup_contrast,
)
from .reports import (
    ARTIFACT_VERSION,
    batch_summary,
    write_batch_csv,
    write_json,
    write_links_csv,
    write_manifest,
    write_positions_trace,
    write_run_csv,
    write_snapshot_csv,
    write_social_csv,
)

__all__ = [
    "CSV_COLUMNS",
    "METRIC_COLUMNS",
    "DailyMetrics",
    "MetricsAccumulator",
    "aggregate_batch",
    "daily_frame",
    "grand_mean_not_served",
    "record_event",
    "status_census",
    "warmup_contrast",
    "ARTIFACT_VERSION",
    "batch_summary",
    "write_batch_csv",
    "write_json",
    "write_links_csv",
    "write_manifest",
    "write_positions_trace",
    "write_run_csv",
    "write_snapshot_csv",
    "write_social_csv",
]
