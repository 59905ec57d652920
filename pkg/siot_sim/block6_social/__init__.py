"""Block 6: Social Layer"""

from .social import (
    SocialTables,
    bounded_target,
    consolidate_all,
    consolidate_contacts,
    consolidate_friends,
    filter_providers_by_friends,
    record_encounters,
)

__all__ = [
    "SocialTables",
    "bounded_target",
    "consolidate_all",
    "consolidate_contacts",
    "consolidate_friends",
    "filter_providers_by_friends",
    "record_encounters",
]
