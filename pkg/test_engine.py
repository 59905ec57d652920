#!/usr/bin/env python3
"""
Tests for world construction, the phase loop and whole-run invariants
"""

import numpy as np
import pytest

from siot_sim.block2_engine import STREAM_NAMES, StreamRegistry, init_world, run, step
from siot_sim.block3_peers import PeerStatus
from siot_sim.config import (
    ConfigError,
    MobilityMode,
    NetworkType,
    SimulationError,
    Strategy,
)

FULL_DAY_RANGES = {
    "up_time": [0, 0],
    "down_time": [119, 119],
    "idle_time": [3, 8],
    "consistency": [0.5, 1.0],
    "serv0perc": [0.1, 0.3],
}


class TestStreams:

    def test_streams_are_independent_and_reproducible(self):
        first = StreamRegistry(7)
        second = StreamRegistry(7)
        first["mobility"].random(1000)
        assert first["placement"].random() == second["placement"].random()
        assert set(first) == set(STREAM_NAMES)

    def test_unknown_stream(self):
        with pytest.raises(KeyError):
            StreamRegistry(0)["weather"]


class TestInitWorld:

    def test_shapes_and_initial_state(self, small_config):
        world = init_world(small_config)
        n = small_config.population
        assert world.population == n
        assert world.positions.shape == (n, 2)
        assert len(world.mobility_states) == len(world.social) == n
        assert all(peer.status is PeerStatus.OFF for peer in world.peers)
        assert (world.positions >= 0).all() and (world.positions < 30).all()
        assert world.iteration == 0

    def test_regular_network_has_no_long_links(self, config_factory):
        world = init_world(config_factory(network=NetworkType.REGULAR, beta=1.0))
        assert len(world.long_links) == 0

    def test_small_world_full_beta_links_everyone(self, config_factory):
        world = init_world(config_factory(network=NetworkType.SMALL_WORLD, beta=1.0))
        assert all(world.long_links.neighbors(i) for i in range(world.population))

    def test_same_seed_same_world(self, small_config):
        first = init_world(small_config)
        second = init_world(small_config)
        assert np.array_equal(first.positions, second.positions)
        assert [p.params for p in first.peers] == [p.params for p in second.peers]

    def test_replicate_seed_overrides_config_seed(self, small_config):
        world = init_world(small_config, seed=99)
        assert world.cfg.seed == 99
        assert not np.array_equal(world.positions, init_world(small_config).positions)

    def test_mobility_mode_leaves_other_streams_alone(self, config_factory):
        still = init_world(config_factory(mobility=MobilityMode.STATIONARY))
        moving = init_world(config_factory(mobility=MobilityMode.PROFILE_BASED))
        assert np.array_equal(still.positions, moving.positions)
        assert [p.params for p in still.peers] == [p.params for p in moving.peers]
        assert [p.bootstrap_services for p in still.peers] == [p.bootstrap_services for p in moving.peers]

    def test_bootstrap_probability_extremes(self, config_factory):
        none = init_world(config_factory(p_init_completed=0.0))
        assert not any(any(p.recent_services_completed.values()) for p in none.peers)
        every = init_world(config_factory(p_init_completed=1.0))
        assert all(all(p.recent_services_completed.values()) for p in every.peers)


class TestStep:

    def test_clock_arithmetic(self, small_config):
        world = init_world(small_config)
        world.iteration = 119
        assert (world.day, world.minute_of_day) == (1, 119)
        world.iteration = 120
        assert (world.day, world.minute_of_day) == (2, 0)

    def test_stationary_step_keeps_positions(self, small_config):
        world = init_world(small_config)
        before = world.positions.copy()
        step(world)
        assert world.iteration == 1
        assert np.array_equal(world.positions, before)

    def test_first_step_wakes_peers_due_at_minute_zero(self, config_factory):
        world = init_world(config_factory(peer_param_ranges=FULL_DAY_RANGES))
        step(world)
        assert all(peer.status is PeerStatus.IDLE for peer in world.peers)

    def test_step_past_horizon_fails(self, small_config):
        world = init_world(small_config)
        world.iteration = small_config.horizon_iterations
        with pytest.raises(SimulationError):
            step(world)

    def test_encounters_accumulate(self, small_config):
        world = init_world(small_config)
        for _ in range(5):
            step(world)
        for tables in world.social:
            for other in world.radius_neighbors(tables.owner):
                assert tables.myneighbors[other] == 5


class TestRun:

    def test_one_row_per_day(self, small_config):
        result = run(small_config)
        assert [row.day for row in result.daily] == [1, 2]
        for row in result.daily:
            assert sum(row.status_counts.values()) == small_config.population

    def test_same_seed_same_result(self, small_config):
        first = run(small_config)
        second = run(small_config)
        assert [row.to_dict() for row in first.daily] == [row.to_dict() for row in second.daily]
        assert first.final_social_sizes == second.final_social_sizes

    def test_different_seeds_differ(self, small_config):
        first = run(small_config, 1)
        second = run(small_config, 2)
        assert [r.as_row() for r in first.daily] != [r.as_row() for r in second.daily]

    def test_snapshot_before_and_at_horizon(self, small_config):
        start = run(small_config, snapshot_at=0)
        assert [row["status"] for row in start.snapshot] == [0] * small_config.population
        assert {row["iteration"] for row in start.snapshot} == {0}

        end = run(small_config, snapshot_at=small_config.horizon_iterations)
        assert {row["iteration"] for row in end.snapshot} == {small_config.horizon_iterations}

    def test_snapshot_outside_horizon(self, small_config):
        with pytest.raises(ConfigError):
            run(small_config, snapshot_at=small_config.horizon_iterations + 1)

    def test_full_availability_mesh_is_always_served(self, config_factory):
        cfg = config_factory(
            network=NetworkType.MESH,
            strategy=Strategy.COMPETITIVE,
            p_init_completed=1.0,
            peer_param_ranges=FULL_DAY_RANGES,
            horizon_days=1,
        )
        result = run(cfg)
        assert result.total_not_served == 0
        assert sum(row.requests_generated for row in result.daily) > 0

    def test_competitive_keeps_completing_services_every_day(self, config_factory):
        cfg = config_factory(network=NetworkType.MESH, strategy=Strategy.COMPETITIVE, p_init_completed=0.5, horizon_days=4)
        result = run(cfg)
        assert all(row.services_completed > 0 for row in result.daily)

    def test_idle_and_searching_peers_go_off_after_down_time(self, config_factory):
        cfg = config_factory(strategy=Strategy.COMPETITIVE, horizon_days=3)
        checked = []

        def check(world):
            if world.minute_of_day != 0:
                return
            # Only peers that entered idle or search during the last minute may still hold them
            for peer in world.peers:
                if peer.status in (PeerStatus.IDLE, PeerStatus.SEARCH):
                    assert peer.dics == 0, peer
            checked.append(world.day)

        run(cfg, on_step=check)
        assert checked == [2, 3, 4]


@pytest.mark.parametrize(
    "strategy, network, mobility",
    [
        (Strategy.COMPETITIVE, NetworkType.SMALL_WORLD, MobilityMode.RANDOM_WALK),
        (Strategy.COOPERATIVE, NetworkType.REGULAR, MobilityMode.STATIONARY),
        (Strategy.COOPERATIVE, NetworkType.MESH, MobilityMode.PROFILE_BASED),
        (Strategy.COOPERATIVE_RESTRICTED, NetworkType.SMALL_WORLD, MobilityMode.RANDOM_WALK),
    ],
)
def test_invariants_hold_every_iteration(config_factory, invariant_checker, strategy, network, mobility):
    cfg = config_factory(strategy=strategy, network=network, mobility=mobility, beta=0.2, p_init_completed=0.5)
    check = invariant_checker(cfg)
    run(cfg, on_step=check)
    assert check.iterations == cfg.horizon_iterations
