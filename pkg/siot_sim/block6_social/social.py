"""
Block 6: Social Layer
Per-peer myneighbors / mycontacts / myfriends tables, grown by encounters and periodic consolidation
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence

import numpy as np

logger = logging.getLogger(__name__)

# Guards floor() against k * n landing a hair below an integer
_FLOOR_EPS = 1e-9


@dataclass
class SocialTables:
    """
    Relationship tables owned by one peer

    myneighbors maps peer id -> repeated encounter count;
    mycontacts and myfriends map peer id -> iteration the entry was added.
    """
    owner: int
    myneighbors: Dict[int, int] = field(default_factory=dict)
    mycontacts: Dict[int, int] = field(default_factory=dict)
    myfriends: Dict[int, int] = field(default_factory=dict)

    def sizes(self) -> Dict[str, int]:
        return {
            "n_neighbors": len(self.myneighbors),
            "n_contacts": len(self.mycontacts),
            "n_friends": len(self.myfriends),
        }

    def is_consistent(self) -> bool:
        """Subset chain holds and the owner appears nowhere"""
        friends = self.myfriends.keys()
        contacts = self.mycontacts.keys()
        neighbors = self.myneighbors.keys()
        return (
            friends <= contacts
            and contacts <= neighbors
            and self.owner not in neighbors
        )


def bounded_target(fraction: float, size: int) -> int:
    """floor(fraction * size), tolerant of float error"""
    return int(math.floor(fraction * size + _FLOOR_EPS))


def record_encounters(owner: int, current_neighbors: Iterable[int], tables: SocialTables) -> SocialTables:
    """Count one more encounter with every peer currently within radius"""
    for other in current_neighbors:
        if other == owner:
            continue
        tables.myneighbors[other] = tables.myneighbors.get(other, 0) + 1
    return tables


def _fill(
    target_table: Dict[int, int],
    pool_table: Dict[int, int],
    target_size: int,
    iteration: int,
    rng: np.random.Generator,
) -> int:
    need = target_size - len(target_table)
    if need <= 0:
        return 0

    pool = sorted(peer_id for peer_id in pool_table if peer_id not in target_table)
    if not pool:
        return 0

    picks = rng.choice(len(pool), size=min(need, len(pool)), replace=False)
    for index in picks:
        target_table[pool[int(index)]] = iteration
    return len(picks)


def consolidate_contacts(
    owner: int,
    tables: SocialTables,
    k: float,
    iteration: int,
    rng: np.random.Generator,
) -> SocialTables:
    """Promote random neighbours to contacts until floor(k * |myneighbors|) is reached"""
    added = _fill(tables.mycontacts, tables.myneighbors, bounded_target(k, len(tables.myneighbors)), iteration, rng)
    if added:
        logger.debug(f"Peer {owner}: {added} contacts added at iteration {iteration}")
    return tables


def consolidate_friends(
    owner: int,
    tables: SocialTables,
    m: float,
    iteration: int,
    rng: np.random.Generator,
) -> SocialTables:
    """Promote random contacts to friends until floor(m * |mycontacts|) is reached"""
    added = _fill(tables.myfriends, tables.mycontacts, bounded_target(m, len(tables.mycontacts)), iteration, rng)
    if added:
        logger.debug(f"Peer {owner}: {added} friends added at iteration {iteration}")
    return tables


def filter_providers_by_friends(candidates: Sequence[int], tables: SocialTables) -> List[int]:
    """Keep only candidates that are the owner's friends, in their original order"""
    return [peer_id for peer_id in candidates if peer_id in tables.myfriends]


def consolidate_all(
    social: Sequence[SocialTables],
    k: float,
    m: float,
    iteration: int,
    rng: np.random.Generator,
) -> None:
    """Contacts first, then friends, for every peer in id order"""
    for tables in social:
        consolidate_contacts(tables.owner, tables, k, iteration, rng)
        consolidate_friends(tables.owner, tables, m, iteration, rng)
