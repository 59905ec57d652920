"""
Block 3: Peers
Peer record, lifecycle statuses and the events a transition can emit
"""

import logging
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Any, Dict, FrozenSet, Iterable, List, Optional

from ..config.simulation_config import REQUESTABLE_SERVICES, PeerParams, ServiceId

logger = logging.getLogger(__name__)


class PeerStatus(IntEnum):
    """Peer lifecycle status"""
    OFF = 0
    IDLE = 1
    ASSIGN = 2
    SEARCH = 3
    REQUEST = 4
    PROCEED = 5
    SERVE = 6


class EventKind(str, Enum):
    """Countable things that happen during a transition"""
    SERVICE_ASSIGNED = "service_assigned"
    REQUEST_NOT_SERVED = "request_not_served"
    SCU_GRANTED = "scu_granted"
    SERVICE_COMPLETED = "service_completed"
    SERVE_STARTED = "serve_started"
    CONFLICT_RESOLVED = "conflict_resolved"


@dataclass
class TransitionOutcome:
    new_status: PeerStatus
    events: List[EventKind] = field(default_factory=list)

    def then(self, other: "TransitionOutcome") -> "TransitionOutcome":
        """Chain a same-tick follow-up transition"""
        return TransitionOutcome(new_status=other.new_status, events=self.events + other.events)


def _service_table() -> Dict[ServiceId, bool]:
    return {service: False for service in REQUESTABLE_SERVICES}


class Peer:
    """One autonomous agent that both requests and provides services"""

    def __init__(self, peer_id: int, params: PeerParams, bootstrap_services: Iterable[ServiceId] = ()):
        self.id = peer_id
        self.params = params
        self.status = PeerStatus.OFF
        self.dics = 0
        self.current_service: Optional[ServiceId] = None
        self.units_completed = 0
        self.services_completed = _service_table()
        self.recent_services_completed = _service_table()
        # Built-in capabilities, re-marked after every daily clear
        self.bootstrap_services: FrozenSet[ServiceId] = frozenset(ServiceId(s) for s in bootstrap_services)
        self.partner: Optional[int] = None
        self.serve_remaining = 0
        self.idle_remaining = 0

        for service in self.bootstrap_services:
            self.services_completed[service] = True
            self.recent_services_completed[service] = True

    @property
    def is_online(self) -> bool:
        return self.status is not PeerStatus.OFF

    def set_status(self, status: PeerStatus) -> None:
        """Enter a status; DICS restarts on every change"""
        self.status = status
        self.dics = 0

    def tick(self) -> None:
        """One more iteration spent in the current status"""
        self.dics += 1

    def wake_up(self) -> None:
        """Daily off -> idle: forget earned recent completions, keep built-in ones"""
        for service in self.recent_services_completed:
            self.recent_services_completed[service] = service in self.bootstrap_services
        self.idle_remaining = self.params.idle_time
        self.set_status(PeerStatus.IDLE)

    def mark_completed(self, service: ServiceId) -> None:
        self.services_completed[service] = True
        self.recent_services_completed[service] = True

    def reset_progress(self) -> None:
        """Drop the current service, its progress and any partner"""
        self.current_service = None
        self.units_completed = 0
        self.partner = None
        self.serve_remaining = 0

    def in_on_window(self, minute_of_day: int) -> bool:
        """Whether minute_of_day falls inside [up_time, down_time), wrapping past midnight"""
        up, down = self.params.up_time, self.params.down_time
        if up < down:
            return up <= minute_of_day < down
        return minute_of_day >= up or minute_of_day < down

    def serve_window(self) -> int:
        """Serve duration: serv0perc x idle_time, rounded half-up"""
        return int(self.params.serv0perc * self.params.idle_time + 0.5)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "status": int(self.status),
            "dics": self.dics,
            "current_service": None if self.current_service is None else int(self.current_service),
            "units_completed": self.units_completed,
            "partner": self.partner,
            "serve_remaining": self.serve_remaining,
            "idle_remaining": self.idle_remaining,
            "services_completed": [int(s) for s, done in self.services_completed.items() if done],
            "recent_services_completed": [int(s) for s, done in self.recent_services_completed.items() if done],
        }

    def __repr__(self) -> str:
        return f"Peer(id={self.id}, status={self.status.name}, dics={self.dics})"
