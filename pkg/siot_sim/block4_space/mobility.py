"""
Block 4: Mobility
Stationary, random-walk and profile-based movement on the torus
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..config.simulation_config import ConfigError, MobilityMode, SimulationConfig
from .topology import Grid, Position, torus_delta, wrap, wrap_array

logger = logging.getLogger(__name__)

_DIAGONAL = math.sqrt(0.5)

# Eight compass headings, each of unit length
HEADINGS = np.array([
    (1.0, 0.0),
    (_DIAGONAL, _DIAGONAL),
    (0.0, 1.0),
    (-_DIAGONAL, _DIAGONAL),
    (-1.0, 0.0),
    (-_DIAGONAL, -_DIAGONAL),
    (0.0, -1.0),
    (_DIAGONAL, -_DIAGONAL),
])


@dataclass
class MobilityState:
    """Movement state owned by one peer"""
    mode: MobilityMode
    waypoints: List[Position] = field(default_factory=list)
    current_target: int = 0
    dwell_remaining: int = 0
    step_length: float = 1.0
    dwell_iterations: int = 0


def init_mobility(start: Position, cfg: SimulationConfig, rng: np.random.Generator) -> MobilityState:
    """
    Create a peer's mobility state

    Profile-based peers get cfg.waypoint_count waypoints drawn uniformly
    from the disc of radius cfg.profile_radius around their start.
    """
    if cfg.profile_radius <= 0:
        raise ConfigError(f"profile_radius must be positive, got {cfg.profile_radius}")

    state = MobilityState(
        mode=cfg.mobility,
        step_length=cfg.step_length,
        dwell_iterations=cfg.dwell_iterations,
    )
    if cfg.mobility is not MobilityMode.PROFILE_BASED:
        return state

    grid = Grid.from_config(cfg)
    for _ in range(cfg.waypoint_count):
        distance = cfg.profile_radius * math.sqrt(rng.random())
        angle = 2.0 * math.pi * rng.random()
        state.waypoints.append(
            wrap(start.x + distance * math.cos(angle), start.y + distance * math.sin(angle), grid)
        )
    return state


def _advance_target(state: MobilityState) -> None:
    state.current_target = (state.current_target + 1) % len(state.waypoints)


def step_position(
    position: Position,
    state: MobilityState,
    rng: np.random.Generator,
    grid: Grid,
) -> Position:
    """Move one peer by one iteration"""
    if state.mode is MobilityMode.STATIONARY:
        return position

    if state.mode is MobilityMode.RANDOM_WALK:
        heading = HEADINGS[int(rng.integers(0, len(HEADINGS)))]
        return wrap(
            position.x + heading[0] * state.step_length,
            position.y + heading[1] * state.step_length,
            grid,
        )

    # Profile-based: dwell, then head for the current waypoint
    if state.dwell_remaining > 0:
        state.dwell_remaining -= 1
        if state.dwell_remaining == 0:
            _advance_target(state)
        return position

    target = state.waypoints[state.current_target]
    dx, dy = torus_delta(position, target, grid)
    distance = math.hypot(dx, dy)

    if distance <= state.step_length:
        state.dwell_remaining = state.dwell_iterations
        if state.dwell_remaining == 0:
            _advance_target(state)
        return target

    scale = state.step_length / distance
    return wrap(position.x + dx * scale, position.y + dy * scale, grid)


def advance_positions(
    positions: np.ndarray,
    states: List[MobilityState],
    rng: np.random.Generator,
    grid: Grid,
) -> np.ndarray:
    """
    Move every peer one iteration, in place

    All peers share one mode. Random-walk headings are drawn as one vector
    per iteration; profile-based peers are stepped individually.
    """
    if not states:
        return positions

    mode = states[0].mode
    if mode is MobilityMode.STATIONARY:
        return positions

    if mode is MobilityMode.RANDOM_WALK:
        headings = rng.integers(0, len(HEADINGS), size=len(states))
        step = np.array([state.step_length for state in states])[:, None]
        positions += HEADINGS[headings] * step
        return wrap_array(positions, grid)

    for index, state in enumerate(states):
        moved = step_position(Position(positions[index, 0], positions[index, 1]), state, rng, grid)
        positions[index, 0] = moved.x
        positions[index, 1] = moved.y
    return positions
