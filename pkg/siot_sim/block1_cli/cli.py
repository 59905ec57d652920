"""
Block 1: Command-Line Interface
`run` executes one experiment as a batch of replicates; `matrix` sweeps the scenario table
"""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..config import settings
from ..config.simulation_config import (
    ConfigError,
    ConfigValidationError,
    MobilityMode,
    NetworkType,
    SimulationConfig,
    SimulationError,
    Strategy,
    build_config,
    load_config_file,
)
from ..block2_engine.batch import BatchResult, BatchRunner
from ..block2_engine.engine import run
from ..block2_engine.world import World
from ..block5_logging.logger import SystemLogger
from ..block7_metrics.metrics import aggregate_batch
from ..block7_metrics.reports import (
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
from .scenarios import cell_dirname, format_matrix, matrix_cells, parse_case_list

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2
EXIT_IO = 3

NETWORK_CHOICES = {
    "mesh": NetworkType.MESH,
    "regular": NetworkType.REGULAR,
    "small-world": NetworkType.SMALL_WORLD,
}
STRATEGY_CHOICES = {
    "competitive": Strategy.COMPETITIVE,
    "cooperative": Strategy.COOPERATIVE,
    "cooperative-restricted": Strategy.COOPERATIVE_RESTRICTED,
}
MOBILITY_CHOICES = {
    "stationary": MobilityMode.STATIONARY,
    "random": MobilityMode.RANDOM_WALK,
    "profile": MobilityMode.PROFILE_BASED,
}

# CLI flag dest -> SimulationConfig key
FLAG_KEYS = {
    "population": "population",
    "radius": "radius",
    "network": "network",
    "beta": "beta",
    "strategy": "strategy",
    "mobility": "mobility",
    "seed": "seed",
    "days": "horizon_days",
    "k": "k",
    "m": "m",
    "consolidate_frequency": "consolidate_frequency",
}

DEFAULT_RUNS = 100


def configure_logging() -> None:
    """Console plus file logging, as every entry point does"""
    log_dir = Path(settings.log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(),
            logging.FileHandler(log_dir / "siot_sim.log"),
        ]
    )


def _experiment_parser() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("experiment")
    group.add_argument("--config", type=Path, help="YAML config file (flags override it)")
    group.add_argument("--population", type=int, help="number of peers")
    group.add_argument("--radius", type=float, help="communication radius")
    group.add_argument("--network", choices=sorted(NETWORK_CHOICES), help="network type")
    group.add_argument("--beta", type=float, help="long-link probability (small-world only)")
    group.add_argument("--strategy", choices=sorted(STRATEGY_CHOICES), help="sharing strategy")
    group.add_argument("--mobility", choices=sorted(MOBILITY_CHOICES), help="mobility mode")
    group.add_argument("--seed", type=int, help="base seed; replicate i uses seed + i")
    group.add_argument("--days", type=int, help="horizon in days")
    group.add_argument("--k", type=float, help="contacts bound as a fraction of neighbours")
    group.add_argument("--m", type=float, help="friends bound as a fraction of contacts")
    group.add_argument("--consolidate-frequency", type=int, help="iterations between social consolidations")
    group.add_argument("--runs", type=int, default=DEFAULT_RUNS, help="replicates per experiment")
    group.add_argument("--workers", type=int, help="parallel replicates (default: all CPUs)")
    group.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _experiment_parser()
    parser = argparse.ArgumentParser(
        prog="siot_sim",
        description="Resource sharing among social IoT peers: competitive vs cooperative strategies",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", parents=[parent], help="run one experiment")
    run_parser.add_argument("--snapshot-at", type=int, help="dump statuses and positions at this iteration")
    run_parser.add_argument("--trace-positions", action="store_true", help="per-iteration positions (single run only)")
    run_parser.add_argument("--dump-links", action="store_true", help="write each run's long-link edge list")
    run_parser.add_argument("--dump-social", action="store_true", help="write each run's social table sizes")

    matrix_parser = commands.add_parser("matrix", parents=[parent], help="run the scenario matrix")
    matrix_parser.add_argument("--cases", help="comma-separated case ids, e.g. 5,17,29 (default: all)")
    matrix_parser.add_argument("--print-matrix", action="store_true", help="print the scenario table and exit")
    return parser


def experiment_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Config keys given on the command line"""
    overrides: Dict[str, Any] = {}
    for dest, key in FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is None:
            continue
        if dest == "network":
            value = NETWORK_CHOICES[value]
        elif dest == "strategy":
            value = STRATEGY_CHOICES[value]
        elif dest == "mobility":
            value = MOBILITY_CHOICES[value]
        overrides[key] = value
    return overrides


def resolve_config(args: argparse.Namespace, pinned: Optional[Dict[str, Any]] = None) -> SimulationConfig:
    """flag > config file > default; pinned keys (scenario cells) win over both"""
    file_values = load_config_file(args.config) if args.config else {}
    overrides = experiment_overrides(args)
    overrides.update(pinned or {})
    cfg = build_config(file_values, overrides)

    if args.beta is not None and cfg.network is not NetworkType.SMALL_WORLD:
        logger.warning(f"beta ignored for {cfg.network.value} network")
    return cfg


def _report_config_error(error: ConfigError) -> int:
    if isinstance(error, ConfigValidationError):
        print("Invalid configuration:", file=sys.stderr)
        for violation in error.violations:
            print(f"  - {violation}", file=sys.stderr)
    else:
        print(f"Invalid configuration: {error}", file=sys.stderr)
    return EXIT_CONFIG


def write_outputs(
    out_dir: Path,
    cfg: SimulationConfig,
    batch: BatchResult,
    *,
    snapshot_at: Optional[int] = None,
    dump_links: bool = False,
    dump_social: bool = False,
    trace_rows: Optional[List[Dict[str, Any]]] = None,
) -> Dict[str, Any]:
    """Write every artefact of one experiment; returns paths relative to out_dir"""
    out_dir = Path(out_dir)
    files: Dict[str, Any] = {"runs": []}

    def rel(path: Path) -> str:
        return path.relative_to(out_dir).as_posix()

    for index, result in enumerate(batch.runs):
        files["runs"].append(rel(write_run_csv(out_dir / "runs" / f"run_{index:03d}.csv", result.daily)))
        if snapshot_at is not None and result.snapshot is not None:
            path = write_snapshot_csv(out_dir / "snapshots" / f"snapshot_run_{index:03d}_iter_{snapshot_at}.csv", result.snapshot)
            files.setdefault("snapshots", []).append(rel(path))
        if dump_links:
            path = write_links_csv(out_dir / "links" / f"links_run_{index:03d}.csv", result.long_link_edges)
            files.setdefault("links", []).append(rel(path))
        if dump_social:
            path = write_social_csv(out_dir / "social" / f"social_run_{index:03d}.csv", result.final_social_sizes)
            files.setdefault("social", []).append(rel(path))

    if trace_rows is not None:
        files["trace"] = rel(write_positions_trace(out_dir / "trace_positions.csv", trace_rows))

    files["batch"] = rel(write_batch_csv(out_dir / "batch.csv", batch.aggregate))
    files["summary"] = rel(write_json(out_dir / "summary.json", batch_summary(cfg, batch.runs, batch.aggregate)))
    files["manifest"] = rel(write_manifest(out_dir / "manifest.txt", cfg, len(batch.runs)))
    return files


def _traced_batch(cfg: SimulationConfig, snapshot_at: Optional[int]) -> Tuple[BatchResult, List[Dict[str, Any]]]:
    rows: List[Dict[str, Any]] = []

    def collect(world: World) -> None:
        iteration = world.iteration - 1
        for peer_id in range(world.population):
            rows.append({
                "iteration": iteration,
                "peer_id": peer_id,
                "x": float(world.positions[peer_id, 0]),
                "y": float(world.positions[peer_id, 1]),
            })

    result = run(cfg, cfg.seed, snapshot_at=snapshot_at, on_step=collect)
    return BatchResult(runs=[result], aggregate=aggregate_batch([result])), rows


async def _execute_run(args: argparse.Namespace, system_logger: SystemLogger) -> int:
    if args.runs < 1:
        print(f"--runs must be at least 1, got {args.runs}", file=sys.stderr)
        return EXIT_CONFIG
    if args.trace_positions and args.runs != 1:
        print("--trace-positions needs --runs 1", file=sys.stderr)
        return EXIT_CONFIG

    try:
        cfg = resolve_config(args)
        if args.snapshot_at is not None and not 0 <= args.snapshot_at <= cfg.horizon_iterations:
            raise ConfigError(f"--snapshot-at {args.snapshot_at} outside 0..{cfg.horizon_iterations}")

        trace_rows = None
        if args.trace_positions:
            batch, trace_rows = _traced_batch(cfg, args.snapshot_at)
        else:
            runner = BatchRunner(workers=args.workers, system_logger=system_logger)
            batch = await runner.run_batch_async(cfg, args.runs, snapshot_at=args.snapshot_at)

        files = write_outputs(
            args.out,
            cfg,
            batch,
            snapshot_at=args.snapshot_at,
            dump_links=args.dump_links,
            dump_social=args.dump_social,
            trace_rows=trace_rows,
        )
    except ConfigError as e:
        await system_logger.log_error("run", str(e))
        return _report_config_error(e)
    except OSError as e:
        await system_logger.log_error("run", str(e))
        print(f"I/O failure: {e}", file=sys.stderr)
        return EXIT_IO

    total = sum(result.total_not_served for result in batch.runs)
    logger.info(f"Wrote {len(files['runs'])} run files to {args.out} (total not_served: {total})")
    return EXIT_OK


def cli_run(args: argparse.Namespace) -> int:
    """Run one experiment as a batch of replicates and write its artefacts"""
    return asyncio.run(_execute_run(args, SystemLogger()))


async def _execute_matrix(args: argparse.Namespace, system_logger: SystemLogger) -> int:
    if args.runs < 1:
        print(f"--runs must be at least 1, got {args.runs}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        cases = parse_case_list(args.cases) if args.cases else None
        # Fail early on a bad file or flag, before any cell runs
        resolve_config(args)
    except ConfigError as e:
        return _report_config_error(e)
    except OSError as e:
        print(f"I/O failure: {e}", file=sys.stderr)
        return EXIT_IO

    out_dir = Path(args.out)
    runner = BatchRunner(workers=args.workers, system_logger=system_logger)
    cells: Dict[str, Any] = {}
    failures: Dict[str, str] = {}

    for row, mobility in matrix_cells(cases):
        name = cell_dirname(row, mobility)
        cell_dir = out_dir / name
        try:
            cfg = resolve_config(args, pinned=row.overrides(mobility))
            batch = await runner.run_batch_async(cfg, args.runs)
            files = write_outputs(cell_dir, cfg, batch)
        except Exception as e:
            failures[name] = str(e)
            logger.error(f"Cell {name} failed: {e}", exc_info=not isinstance(e, (SimulationError, OSError)))
            await system_logger.log_cell_failed(row.case_id, mobility.value, str(e))
            continue

        cells[name] = {
            "case_id": row.case_id,
            "mobility": mobility.value,
            "dir": name,
            "files": _prefix_paths(files, name),
        }
        await system_logger.log_cell_completed(row.case_id, mobility.value, str(cell_dir))
        logger.info(f"Cell {name} done")

    try:
        write_json(out_dir / "index.json", {"cells": cells, "failures": failures})
    except OSError as e:
        print(f"I/O failure: {e}", file=sys.stderr)
        return EXIT_IO

    if failures:
        print(f"{len(failures)} of {len(cells) + len(failures)} cells failed; see index.json", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _prefix_paths(files: Dict[str, Any], prefix: str) -> Dict[str, Any]:
    prefixed: Dict[str, Any] = {}
    for key, value in files.items():
        if isinstance(value, list):
            prefixed[key] = [f"{prefix}/{item}" for item in value]
        else:
            prefixed[key] = f"{prefix}/{value}"
    return prefixed


def cli_matrix(args: argparse.Namespace) -> int:
    """Run (a subset of) the scenario matrix, one output directory per cell"""
    if args.print_matrix:
        print(format_matrix())
        return EXIT_OK
    return asyncio.run(_execute_matrix(args, SystemLogger()))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments and dispatch; returns the process exit status"""
    args = build_parser().parse_args(argv)
    configure_logging()

    if args.command == "run":
        return cli_run(args)
    return cli_matrix(args)
