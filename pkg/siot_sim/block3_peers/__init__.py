"""Block 3: Peers and their state machine"""

from .peer import EventKind, Peer, PeerStatus, TransitionOutcome
from .state_machine import (
    advance_peer,
    assign_service,
    pair_mutual_searchers,
    resolve_conflict,
    search_competitive,
    search_cooperative,
    step_idle,
    step_off,
    step_off_duty,
    step_proceed,
    step_request,
    step_serve,
)

__all__ = [
    "EventKind",
    "Peer",
    "PeerStatus",
    "TransitionOutcome",
    "advance_peer",
    "assign_service",
    "pair_mutual_searchers",
    "resolve_conflict",
    "search_competitive",
    "search_cooperative",
    "step_idle",
    "step_off",
    "step_off_duty",
    "step_proceed",
    "step_request",
    "step_serve",
]
