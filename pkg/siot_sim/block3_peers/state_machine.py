"""
Block 3: Peer State Machine
Competitive lifecycle plus the cooperative extension (conflict resolution and the serve state)
"""

import logging
from typing import TYPE_CHECKING, List, Optional, Set, Tuple

import numpy as np

from ..config.simulation_config import REQUESTABLE_SERVICES, ServiceCatalog, ServiceId, Strategy, scu_of
from ..block4_space.topology import candidate_providers
from ..block6_social.social import SocialTables
from .peer import EventKind, Peer, PeerStatus, TransitionOutcome

if TYPE_CHECKING:
    from ..block2_engine.world import World

logger = logging.getLogger(__name__)

_PROVIDING = (PeerStatus.IDLE, PeerStatus.SERVE)


def _stay(peer: Peer, *events: EventKind) -> TransitionOutcome:
    peer.tick()
    return TransitionOutcome(peer.status, list(events))


def _move(peer: Peer, status: PeerStatus, *events: EventKind) -> TransitionOutcome:
    peer.set_status(status)
    return TransitionOutcome(status, list(events))


def step_off(peer: Peer, current_time_minute: int) -> TransitionOutcome:
    """Wake up when the minute of day reaches up_time"""
    if current_time_minute == peer.params.up_time:
        peer.wake_up()
        return TransitionOutcome(peer.status)
    return _stay(peer)


def step_off_duty(peer: Peer) -> TransitionOutcome:
    """Close the on-window: go off, keeping any units already earned"""
    peer.partner = None
    return _move(peer, PeerStatus.OFF)


def step_idle(peer: Peer, current_time_minute: Optional[int] = None) -> TransitionOutcome:
    """Count down idle_remaining; past down_time the peer goes off instead"""
    if current_time_minute is not None and not peer.in_on_window(current_time_minute):
        peer.idle_remaining = 0
        return step_off_duty(peer)
    peer.idle_remaining -= 1
    if peer.idle_remaining <= 0:
        peer.idle_remaining = 0
        return _move(peer, PeerStatus.ASSIGN)
    return _stay(peer)


def assign_service(peer: Peer, rng: np.random.Generator) -> TransitionOutcome:
    """Pick a uniformly random requestable service and start searching for it"""
    peer.current_service = REQUESTABLE_SERVICES[int(rng.integers(0, len(REQUESTABLE_SERVICES)))]
    peer.units_completed = 0
    peer.partner = None
    return _move(peer, PeerStatus.SEARCH, EventKind.SERVICE_ASSIGNED)


def step_proceed(peer: Peer, current_time_minute: int) -> TransitionOutcome:
    """Reset service progress, then go idle inside the on-window or off outside it"""
    peer.reset_progress()
    if peer.in_on_window(current_time_minute):
        peer.idle_remaining = peer.params.idle_time
        return _move(peer, PeerStatus.IDLE)
    return _move(peer, PeerStatus.OFF)


def step_request(
    peer: Peer,
    partner: Optional[Peer],
    rng: np.random.Generator,
    catalog: ServiceCatalog,
    *,
    allow_serving: bool = False,
    granted: Optional[Set[int]] = None,
) -> TransitionOutcome:
    """
    Ask the partner for one SCU of the current service

    Args:
        peer: Requesting peer
        partner: Its chosen provider; None counts as no reply
        rng: Stream for the consistency draw
        catalog: Service catalog for the SCU target
        allow_serving: Partners in serve may reply (cooperative strategies)
        granted: Providers that already granted an SCU this iteration; updated on reply

    Returns:
        Outcome with scu_granted / service_completed events
    """
    replied = False
    if partner is not None and (granted is None or partner.id not in granted):
        available = partner.status is PeerStatus.IDLE or (allow_serving and partner.status is PeerStatus.SERVE)
        if available:
            replied = bool(rng.random() < partner.params.consistency)

    if not replied:
        # Units earned so far are kept for the next provider
        peer.partner = None
        return _move(peer, PeerStatus.SEARCH)

    if granted is not None:
        granted.add(partner.id)
    peer.units_completed += 1

    service = peer.current_service
    if service is not None and peer.units_completed >= scu_of(catalog, service):
        peer.mark_completed(service)
        return _move(peer, PeerStatus.PROCEED, EventKind.SCU_GRANTED, EventKind.SERVICE_COMPLETED)
    return _stay(peer, EventKind.SCU_GRANTED)


def search_competitive(peer: Peer, world: "World") -> TransitionOutcome:
    candidates = candidate_providers(peer, peer.current_service, world)
    if not candidates:
        return _stay(peer, EventKind.REQUEST_NOT_SERVED)

    peer.partner = candidates[0]
    return _move(peer, PeerStatus.REQUEST)


def resolve_conflict(a: Peer, b: Peer) -> Tuple[int, int]:
    """
    Break a mutual search: the peer with greater DICS serves, the other requests

    Equal DICS goes to the lower id as server.
    """
    if a.dics > b.dics or (a.dics == b.dics and a.id < b.id):
        server, requester = a, b
    else:
        server, requester = b, a

    # The server drops its own pending service while serving
    server.current_service = ServiceId.SERV0
    server.units_completed = 0
    server.partner = requester.id
    server.serve_remaining = server.serve_window()
    server.set_status(PeerStatus.SERVE)

    requester.partner = server.id
    requester.set_status(PeerStatus.REQUEST)

    logger.debug(f"Conflict resolved: peer {server.id} serves peer {requester.id} for {server.serve_remaining} iterations")
    return server.id, requester.id


def step_serve(peer: Peer) -> TransitionOutcome:
    """Count down the serve window, then return to idle"""
    if peer.serve_remaining > 0:
        peer.serve_remaining -= 1
        if peer.serve_remaining > 0:
            return _stay(peer)

    peer.reset_progress()
    peer.idle_remaining = peer.params.idle_time
    return _move(peer, PeerStatus.IDLE)


def friends_filter(peer: Peer, world: "World") -> Optional[SocialTables]:
    """Social tables limiting whom the peer may ask, or None when unrestricted"""
    if world.cfg.strategy is Strategy.COOPERATIVE_RESTRICTED:
        return world.social[peer.id]
    return None


def _has_ready_provider(candidates: List[int], world: "World") -> bool:
    return any(world.peers[c].status in _PROVIDING for c in candidates)


def _mutually_searching(peer: Peer, other: Peer, world: "World") -> bool:
    """other searches for something peer can give it, and neither has a ready provider"""
    if other.status is not PeerStatus.SEARCH or other.current_service is None:
        return False
    if other.id in world.touched_this_tick or other.id in world.advanced_this_tick:
        return False
    if not other.in_on_window(world.minute_of_day):
        return False
    reverse = candidate_providers(other, other.current_service, world, friends_filter(other, world), shuffle=False)
    return peer.id in reverse and not _has_ready_provider(reverse, world)


def _resolve_pair(peer: Peer, other: Peer, world: "World") -> None:
    resolve_conflict(peer, other)
    world.touched_this_tick.update((peer.id, other.id))


def search_cooperative(peer: Peer, world: "World") -> TransitionOutcome:
    """
    Cooperative search: ask a ready provider, else settle a mutual search, else keep searching
    """
    candidates = candidate_providers(peer, peer.current_service, world, friends_filter(peer, world))

    for candidate in candidates:
        if world.peers[candidate].status in _PROVIDING:
            peer.partner = candidate
            return _move(peer, PeerStatus.REQUEST)

    for candidate in candidates:
        other = world.peers[candidate]
        if _mutually_searching(peer, other, world):
            _resolve_pair(peer, other, world)
            return TransitionOutcome(peer.status, [EventKind.CONFLICT_RESOLVED, EventKind.SERVE_STARTED])

    return _stay(peer, EventKind.REQUEST_NOT_SERVED)


def pair_mutual_searchers(world: "World") -> List[EventKind]:
    """
    Match mutually searching peers greedily, in a randomized order

    A peer is only paired when none of its candidates is idle or serving.
    Paired peers are marked as touched and skip their own update this tick.
    """
    if not world.cfg.strategy.is_cooperative:
        return []

    events: List[EventKind] = []
    order = world.streams["order"].permutation(len(world.peers))
    for index in order:
        peer = world.peers[int(index)]
        if peer.status is not PeerStatus.SEARCH or peer.current_service is None:
            continue
        if peer.id in world.touched_this_tick or not peer.in_on_window(world.minute_of_day):
            continue

        tier = candidate_providers(peer, peer.current_service, world, friends_filter(peer, world), shuffle=False)
        if _has_ready_provider(tier, world):
            continue

        for candidate in tier:
            other = world.peers[candidate]
            if _mutually_searching(peer, other, world):
                _resolve_pair(peer, other, world)
                events.extend((EventKind.CONFLICT_RESOLVED, EventKind.SERVE_STARTED))
                break
    return events


def advance_peer(peer: Peer, world: "World") -> TransitionOutcome:
    """Run one iteration of the state machine for one peer, chaining transit statuses"""
    minute = world.minute_of_day
    rng = world.streams["state_machine"]
    cooperative = world.cfg.strategy.is_cooperative

    if peer.status is PeerStatus.OFF:
        return step_off(peer, minute)

    if peer.status is PeerStatus.IDLE:
        outcome = step_idle(peer, minute)
        if outcome.new_status is PeerStatus.ASSIGN:
            outcome = outcome.then(assign_service(peer, rng))
        return outcome

    if peer.status is PeerStatus.ASSIGN:
        return assign_service(peer, rng)

    if peer.status is PeerStatus.SEARCH:
        if not peer.in_on_window(minute):
            return step_off_duty(peer)
        return search_cooperative(peer, world) if cooperative else search_competitive(peer, world)

    if peer.status is PeerStatus.REQUEST:
        partner = None
        if peer.partner is not None and 0 <= peer.partner < len(world.peers):
            partner = world.peers[peer.partner]
        outcome = step_request(
            peer,
            partner,
            rng,
            world.cfg.catalog,
            allow_serving=cooperative,
            granted=world.granted_this_tick,
        )
        if outcome.new_status is PeerStatus.PROCEED:
            outcome = outcome.then(step_proceed(peer, minute))
        return outcome

    if peer.status is PeerStatus.PROCEED:
        return step_proceed(peer, minute)

    return step_serve(peer)
