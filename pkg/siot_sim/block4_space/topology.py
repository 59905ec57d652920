"""
Block 4: Topology
Torus geometry, radius neighbourhoods, small-world long links and provider search tiers
"""

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple

import numpy as np

from ..config.simulation_config import ConfigError, NetworkType, ServiceId, SimulationConfig
from ..block6_social.social import SocialTables, filter_providers_by_friends

if TYPE_CHECKING:
    from ..block2_engine.world import World
    from ..block3_peers.peer import Peer

logger = logging.getLogger(__name__)


class Position(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Grid:
    """Continuous wrapped world [0, width) x [0, height)"""
    width: float
    height: float

    @classmethod
    def from_config(cls, cfg: SimulationConfig) -> "Grid":
        return cls(width=float(cfg.grid_width), height=float(cfg.grid_height))


def _wrap_scalar(value: float, size: float) -> float:
    wrapped = value % size
    # value % size can round up to size for tiny negative inputs
    return 0.0 if wrapped >= size else wrapped


def wrap(x: float, y: float, grid: Grid) -> Position:
    """Wrap coordinates into the half-open grid range"""
    return Position(_wrap_scalar(x, grid.width), _wrap_scalar(y, grid.height))


def wrap_array(positions: np.ndarray, grid: Grid) -> np.ndarray:
    """Wrap an (N, 2) position array in place and return it"""
    sizes = np.array([grid.width, grid.height])
    np.mod(positions, sizes, out=positions)
    overflow = positions >= sizes
    if overflow.any():
        positions[overflow] = 0.0
    return positions


def torus_delta(a: Position, b: Position, grid: Grid) -> Tuple[float, float]:
    """Shortest signed displacement from a to b under wrap-around"""
    dx = b.x - a.x
    dy = b.y - a.y
    if abs(dx) > grid.width / 2:
        dx -= math.copysign(grid.width, dx)
    if abs(dy) > grid.height / 2:
        dy -= math.copysign(grid.height, dy)
    return dx, dy


def torus_distance(a: Position, b: Position, grid: Grid) -> float:
    """Euclidean distance under wrap-around"""
    dx = abs(a.x - b.x)
    dy = abs(a.y - b.y)
    dx = min(dx, grid.width - dx)
    dy = min(dy, grid.height - dy)
    return math.hypot(dx, dy)


def radius_adjacency(positions: np.ndarray, radius: float, grid: Grid) -> np.ndarray:
    """
    Boolean N x N matrix of peers within torus distance <= radius

    The diagonal is always False.
    """
    dx = np.abs(positions[:, 0, None] - positions[None, :, 0])
    np.minimum(dx, grid.width - dx, out=dx)
    dy = np.abs(positions[:, 1, None] - positions[None, :, 1])
    np.minimum(dy, grid.height - dy, out=dy)
    adjacency = dx * dx + dy * dy <= radius * radius
    np.fill_diagonal(adjacency, False)
    return adjacency


def radius_neighbor_lists(positions: np.ndarray, radius: float, grid: Grid) -> List[List[int]]:
    """Per-peer ascending id lists of peers within radius"""
    n = positions.shape[0]
    rows, cols = np.nonzero(radius_adjacency(positions, radius, grid))
    bounds = np.searchsorted(rows, np.arange(n + 1))
    return [cols[bounds[i]:bounds[i + 1]].tolist() for i in range(n)]


@dataclass(frozen=True)
class LongLinkTable:
    """Static symmetric long-distance links of a small-world network"""
    links: Mapping[int, FrozenSet[int]] = field(default_factory=dict)
    # peers that drew their own link (before symmetrisation)
    drawn_by: FrozenSet[int] = frozenset()

    def neighbors(self, peer_id: int) -> FrozenSet[int]:
        return self.links.get(peer_id, frozenset())

    def edges(self) -> List[Tuple[int, int]]:
        """Each undirected link once, as (low, high), sorted"""
        pairs = {(min(a, b), max(a, b)) for a, linked in self.links.items() for b in linked}
        return sorted(pairs)

    def __len__(self) -> int:
        return len(self.edges())


def build_long_links(peer_ids: Sequence[int], beta: float, rng: np.random.Generator) -> LongLinkTable:
    """
    Grant each peer, with probability beta, one link to a uniformly random other peer

    Links are symmetrised after drawing.
    """
    if not 0.0 <= beta <= 1.0:
        raise ConfigError(f"beta outside [0,1]: {beta}")
    ids = list(peer_ids)
    if beta > 0 and len(ids) < 2:
        raise ConfigError("long links need at least 2 peers")
    if beta == 0:
        return LongLinkTable()

    links: Dict[int, Set[int]] = {}
    drawn_by: Set[int] = set()
    for index, peer_id in enumerate(ids):
        if rng.random() >= beta:
            continue
        pick = int(rng.integers(0, len(ids) - 1))
        other = ids[pick if pick < index else pick + 1]
        links.setdefault(peer_id, set()).add(other)
        links.setdefault(other, set()).add(peer_id)
        drawn_by.add(peer_id)

    table = LongLinkTable(
        links={peer_id: frozenset(linked) for peer_id, linked in sorted(links.items())},
        drawn_by=frozenset(drawn_by),
    )
    logger.debug(f"Built {len(table)} long links over {len(ids)} peers (beta={beta})")
    return table


def neighbors_of(
    peer_id: int,
    positions: np.ndarray,
    cfg: SimulationConfig,
    long_links: LongLinkTable,
) -> Set[int]:
    """Communication neighbourhood of one peer under the configured network"""
    n = positions.shape[0]
    if cfg.network is NetworkType.MESH:
        return set(range(n)) - {peer_id}

    grid = Grid.from_config(cfg)
    dx = np.abs(positions[:, 0] - positions[peer_id, 0])
    np.minimum(dx, grid.width - dx, out=dx)
    dy = np.abs(positions[:, 1] - positions[peer_id, 1])
    np.minimum(dy, grid.height - dy, out=dy)
    within = np.nonzero(dx * dx + dy * dy <= cfg.radius * cfg.radius)[0]
    result = {int(i) for i in within if i != peer_id}

    if cfg.network is NetworkType.SMALL_WORLD:
        result |= set(long_links.neighbors(peer_id))
    result.discard(peer_id)
    return result


def _eligible(
    peer: "Peer",
    ids: Iterable[int],
    service: ServiceId,
    world: "World",
    friends_of: Optional[SocialTables],
) -> List[int]:
    found = []
    for other_id in ids:
        if other_id == peer.id:
            continue
        other = world.peers[other_id]
        if other.is_online and other.recent_services_completed[service]:
            found.append(other_id)
    if friends_of is not None:
        found = filter_providers_by_friends(found, friends_of)
    return found


def candidate_providers(
    peer: "Peer",
    service: ServiceId,
    world: "World",
    friends_of: Optional[SocialTables] = None,
    shuffle: bool = True,
) -> List[int]:
    """
    Possible service providers for a searching peer, locality first

    Args:
        peer: The searching peer
        service: Requested service (1-4)
        world: Current world snapshot
        friends_of: Social tables to restrict candidates to friends (restricted cooperation)
        shuffle: Randomise order within the returned tier

    Returns:
        Local-tier candidates if any exist, else long-link candidates (small world only)
    """
    service = ServiceId(service)
    tier = _eligible(peer, world.local_tier(peer.id), service, world, friends_of)

    if not tier and world.cfg.network is NetworkType.SMALL_WORLD:
        tier = _eligible(peer, sorted(world.long_links.neighbors(peer.id)), service, world, friends_of)

    if shuffle and len(tier) > 1:
        order = world.streams["state_machine"].permutation(len(tier))
        tier = [tier[i] for i in order]
    return tier
