"""
Block 2: World
Everything one replicate owns: peers, positions, mobility, social tables, long links and streams
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Set, Union

import numpy as np

from ..config.simulation_config import (
    REQUESTABLE_SERVICES,
    NetworkType,
    SimulationConfig,
    sample_peer_params,
    validate_config,
)
from ..block3_peers.peer import Peer
from ..block4_space.mobility import MobilityState, init_mobility
from ..block4_space.topology import Grid, LongLinkTable, Position, build_long_links, radius_neighbor_lists, wrap_array
from ..block6_social.social import SocialTables
from .streams import StreamRegistry

logger = logging.getLogger(__name__)


@dataclass
class World:
    """State of one replicate; all indexed collections have length = population"""
    cfg: SimulationConfig
    peers: List[Peer]
    positions: np.ndarray
    mobility_states: List[MobilityState]
    social: List[SocialTables]
    long_links: LongLinkTable
    streams: StreamRegistry
    grid: Grid
    iteration: int = 0
    # Per-tick bookkeeping, cleared at the start of each cooperative phase
    granted_this_tick: Set[int] = field(default_factory=set)
    touched_this_tick: Set[int] = field(default_factory=set)
    advanced_this_tick: Set[int] = field(default_factory=set)
    _radius_lists: List[List[int]] = field(default_factory=list, repr=False)

    @property
    def population(self) -> int:
        return len(self.peers)

    @property
    def minute_of_day(self) -> int:
        return self.iteration % self.cfg.minutes_per_day

    @property
    def day(self) -> int:
        """1-based day the current iteration belongs to"""
        return self.iteration // self.cfg.minutes_per_day + 1

    def refresh_proximity(self) -> None:
        """Recompute radius neighbourhoods from the current positions"""
        self._radius_lists = radius_neighbor_lists(self.positions, self.cfg.radius, self.grid)

    def radius_neighbors(self, peer_id: int) -> List[int]:
        return self._radius_lists[peer_id]

    def local_tier(self, peer_id: int) -> Sequence[int]:
        """First search tier: everyone on a mesh, radius neighbours otherwise"""
        if self.cfg.network is NetworkType.MESH:
            return range(self.population)
        return self._radius_lists[peer_id]

    def position_of(self, peer_id: int) -> Position:
        return Position(float(self.positions[peer_id, 0]), float(self.positions[peer_id, 1]))

    def snapshot(self) -> List[Dict[str, Any]]:
        """Status and position of every peer at the current iteration"""
        return [
            {
                "iteration": self.iteration,
                "peer_id": peer.id,
                "status": int(peer.status),
                "x": float(self.positions[peer.id, 0]),
                "y": float(self.positions[peer.id, 1]),
            }
            for peer in self.peers
        ]


def _draw_bootstrap(p_init: float, rng: np.random.Generator) -> List[Any]:
    draws = rng.random(len(REQUESTABLE_SERVICES))
    return [service for service, u in zip(REQUESTABLE_SERVICES, draws) if u < p_init]


def init_world(cfg: Union[SimulationConfig, Mapping[str, Any]], seed: Optional[int] = None) -> World:
    """
    Build a fresh world for one replicate

    Args:
        cfg: Experiment configuration (validated here)
        seed: Replicate seed, defaults to cfg.seed

    Returns:
        World at iteration 0 with every peer off
    """
    cfg = validate_config(cfg)
    if seed is not None:
        cfg = cfg.with_seed(seed)

    streams = StreamRegistry(cfg.seed)
    grid = Grid.from_config(cfg)
    n = cfg.population

    positions = streams["placement"].uniform(0.0, 1.0, size=(n, 2)) * np.array([grid.width, grid.height])
    wrap_array(positions, grid)

    peers = []
    for peer_id in range(n):
        params = sample_peer_params(cfg.peer_param_ranges, streams["params"])
        bootstrap = _draw_bootstrap(cfg.p_init_completed, streams["bootstrap"])
        peers.append(Peer(peer_id, params, bootstrap))

    mobility_states = [
        init_mobility(Position(float(positions[i, 0]), float(positions[i, 1])), cfg, streams["mobility"])
        for i in range(n)
    ]

    if cfg.network is NetworkType.SMALL_WORLD:
        long_links = build_long_links(range(n), cfg.beta, streams["long_links"])
    else:
        long_links = LongLinkTable()

    world = World(
        cfg=cfg,
        peers=peers,
        positions=positions,
        mobility_states=mobility_states,
        social=[SocialTables(owner=i) for i in range(n)],
        long_links=long_links,
        streams=streams,
        grid=grid,
    )
    world.refresh_proximity()

    logger.debug(
        f"World ready: {n} peers, network={cfg.network.value}, mobility={cfg.mobility.value}, "
        f"{len(long_links)} long links, seed={cfg.seed}"
    )
    return world
