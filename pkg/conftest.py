"""
Shared pytest fixtures: small, fast configurations
"""

import sys
from pathlib import Path
from typing import Any, Callable, Dict

import numpy as np
import pytest
import yaml

# Ensure project root is on sys.path
project_root = Path(__file__).resolve().parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from siot_sim.block3_peers import PeerStatus
from siot_sim.block6_social import bounded_target
from siot_sim.config import SimulationConfig, scu_of, settings, validate_config

# Two-hour "days" keep runs short while every mechanism still fires
SMALL_CONFIG: Dict[str, Any] = {
    "population": 20,
    "grid_width": 30.0,
    "grid_height": 30.0,
    "radius": 5.0,
    "minutes_per_day": 120,
    "horizon_days": 2,
    "consolidate_frequency": 120,
    "profile_radius": 5.0,
    "dwell_iterations": 3,
    "catalog": {"scu": {0: 0, 1: 2, 2: 3, 3: 4, 4: 5}},
    "peer_param_ranges": {
        "up_time": [0, 20],
        "down_time": [90, 119],
        "idle_time": [3, 8],
        "consistency": [0.5, 1.0],
        "serv0perc": [0.1, 0.3],
    },
    "seed": 11,
}


def make_config(**overrides: Any) -> SimulationConfig:
    values = dict(SMALL_CONFIG)
    values.update(overrides)
    return validate_config(values)


@pytest.fixture
def config_factory() -> Callable[..., SimulationConfig]:
    return make_config


@pytest.fixture
def small_config() -> SimulationConfig:
    return make_config()


@pytest.fixture(autouse=True)
def isolated_log_dir(tmp_path, monkeypatch):
    """Keep lifecycle and file logs out of the working tree"""
    monkeypatch.setattr(settings, "log_dir", str(tmp_path / "logs"))


@pytest.fixture
def small_config_file(tmp_path) -> Callable[..., Path]:
    """Write SMALL_CONFIG (plus overrides) to a YAML file for CLI runs"""

    def write(**overrides: Any) -> Path:
        values = dict(SMALL_CONFIG)
        values.update(overrides)
        path = tmp_path / "experiment.yaml"
        path.write_text(yaml.safe_dump(values, sort_keys=True), encoding="utf-8")
        return path

    return write


class InvariantChecker:
    """
    Per-iteration whole-world checks, passed to run(..., on_step=...)

    Covers the peer state machine, the social table chain and bounds,
    and the per-iteration mobility displacement.
    """

    def __init__(self, cfg: SimulationConfig):
        self.cfg = cfg
        self.size = np.array([cfg.grid_width, cfg.grid_height])
        self.iterations = 0
        self._statuses: Dict[int, Any] = {}
        self._sizes: Dict[int, Dict[str, int]] = {}
        self._positions: Any = None

    def __call__(self, world) -> None:
        cfg = self.cfg
        assert (world.positions >= 0).all()
        assert (world.positions < self.size).all()
        if self._positions is not None:
            delta = np.abs(world.positions - self._positions)
            delta = np.minimum(delta, self.size - delta)
            assert (np.hypot(delta[:, 0], delta[:, 1]) <= cfg.step_length + 1e-9).all()
        self._positions = world.positions.copy()

        for peer in world.peers:
            assert peer.status in PeerStatus
            assert (peer.partner is not None) == (peer.status in (PeerStatus.REQUEST, PeerStatus.SERVE))
            if peer.current_service is not None:
                assert peer.units_completed <= scu_of(cfg.catalog, peer.current_service)
            if not cfg.strategy.is_cooperative:
                assert peer.status is not PeerStatus.SERVE
            if peer.id in self._statuses:
                last_status, last_dics = self._statuses[peer.id]
                if peer.status is not last_status:
                    assert peer.dics == 0, peer
                else:
                    assert peer.dics == last_dics + 1, peer
            self._statuses[peer.id] = (peer.status, peer.dics)

        for tables in world.social:
            assert tables.is_consistent()
            sizes = tables.sizes()
            assert sizes["n_contacts"] <= bounded_target(cfg.k, sizes["n_neighbors"])
            assert sizes["n_friends"] <= bounded_target(cfg.m, sizes["n_contacts"])
            previous = self._sizes.get(tables.owner)
            if previous is not None:
                assert all(sizes[key] >= previous[key] for key in sizes)
            self._sizes[tables.owner] = sizes
            assert all(added % cfg.consolidate_frequency == 0 for added in tables.mycontacts.values())

        self.iterations += 1


@pytest.fixture
def invariant_checker() -> Callable[[SimulationConfig], InvariantChecker]:
    return InvariantChecker
