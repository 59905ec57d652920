"""Block 4: Space (topology and mobility)"""

from .topology import (
    Grid,
    LongLinkTable,
    Position,
    build_long_links,
    candidate_providers,
    neighbors_of,
    radius_adjacency,
    radius_neighbor_lists,
    torus_delta,
    torus_distance,
    wrap,
)
from .mobility import (
    HEADINGS,
    MobilityState,
    advance_positions,
    init_mobility,
    step_position,
)

__all__ = [
    "Grid",
    "LongLinkTable",
    "Position",
    "build_long_links",
    "candidate_providers",
    "neighbors_of",
    "radius_adjacency",
    "radius_neighbor_lists",
    "torus_delta",
    "torus_distance",
    "wrap",
    "HEADINGS",
    "MobilityState",
    "advance_positions",
    "init_mobility",
    "step_position",
]
