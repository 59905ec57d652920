"""
Block 2: Simulation Engine
The per-iteration phase loop and single-replicate runs
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

from ..config.simulation_config import ConfigError, MobilityMode, SimulationConfig, SimulationError, validate_config
from ..block3_peers.peer import EventKind, PeerStatus
from ..block3_peers.state_machine import advance_peer, pair_mutual_searchers
from ..block4_space.mobility import advance_positions
from ..block6_social.social import consolidate_all, record_encounters
from ..block7_metrics.metrics import DailyMetrics, MetricsAccumulator
from .world import World, init_world

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    """Outcome of one replicate"""
    daily: List[DailyMetrics]
    final_social_sizes: List[Dict[str, int]]
    seed: int
    long_link_edges: List[Tuple[int, int]] = field(default_factory=list)
    snapshot: Optional[List[Dict[str, Any]]] = None

    @property
    def total_not_served(self) -> int:
        return sum(row.not_served for row in self.daily)


def step(world: World, metrics: Optional[MetricsAccumulator] = None) -> World:
    """
    Advance the world by one iteration

    Phases, in order: mobility, encounters, consolidation, cooperative
    pairing, peer updates, metric accumulation, iteration += 1.
    """
    cfg = world.cfg
    if world.iteration >= cfg.horizon_iterations:
        raise SimulationError(f"iteration {world.iteration} is past the horizon {cfg.horizon_iterations}")

    day = world.day

    if cfg.mobility is not MobilityMode.STATIONARY:
        advance_positions(world.positions, world.mobility_states, world.streams["mobility"], world.grid)
        world.refresh_proximity()

    # Encounters are spatial and include off peers
    for tables in world.social:
        record_encounters(tables.owner, world.radius_neighbors(tables.owner), tables)

    if world.iteration % cfg.consolidate_frequency == 0:
        consolidate_all(world.social, cfg.k, cfg.m, world.iteration, world.streams["social"])

    world.granted_this_tick.clear()
    world.touched_this_tick.clear()
    world.advanced_this_tick.clear()
    events: List[EventKind] = pair_mutual_searchers(world)

    for index in world.streams["order"].permutation(world.population):
        peer = world.peers[int(index)]
        if peer.id in world.touched_this_tick:
            continue
        events.extend(advance_peer(peer, world).events)
        world.advanced_this_tick.add(peer.id)

    if metrics is not None:
        metrics.record_many(day, events)
        if world.minute_of_day == cfg.minutes_per_day - 1:
            metrics.record_status_counts(day, world.peers)

    world.iteration += 1
    return world


def run(
    cfg: Union[SimulationConfig, Mapping[str, Any]],
    replicate_seed: Optional[int] = None,
    *,
    snapshot_at: Optional[int] = None,
    on_step: Optional[Callable[[World], None]] = None,
) -> RunResult:
    """
    Run one replicate for the full horizon

    Args:
        cfg: Experiment configuration
        replicate_seed: Seed of this replicate, defaults to cfg.seed
        snapshot_at: Iteration whose statuses and positions are captured
        on_step: Called with the world after every iteration

    Returns:
        RunResult with one DailyMetrics row per day
    """
    cfg = validate_config(cfg)
    if snapshot_at is not None and not 0 <= snapshot_at <= cfg.horizon_iterations:
        raise ConfigError(f"snapshot_at {snapshot_at} outside 0..{cfg.horizon_iterations}")

    world = init_world(cfg, seed=replicate_seed)
    metrics = MetricsAccumulator(cfg.horizon_days)
    snapshot = None

    for _ in range(cfg.horizon_iterations):
        if world.iteration == snapshot_at:
            snapshot = world.snapshot()
        step(world, metrics)
        if on_step is not None:
            on_step(world)

    if snapshot_at == world.iteration:
        snapshot = world.snapshot()

    online = sum(1 for peer in world.peers if peer.status is not PeerStatus.OFF)
    logger.debug(f"Run seed={world.cfg.seed} finished: {online} peers online at horizon")

    return RunResult(
        daily=metrics.daily,
        final_social_sizes=[{"peer_id": tables.owner, **tables.sizes()} for tables in world.social],
        seed=world.cfg.seed,
        long_link_edges=world.long_links.edges(),
        snapshot=snapshot,
    )
