"""Candidate verification against a query description.

Retrieval ranks by embedding similarity; verification then checks the
stored views literally: category, required attributes, and an optional room
constraint resolved through the layout geometry. Unknown queries verify
false rather than raising.
"""

from __future__ import annotations

from ..tasks.types import ObjectSelector
from ..world.types import HouseLayout
from .spatial import MemoryObject


class RuleBasedVerifier:
    def __init__(self, layout: HouseLayout | None = None):
        self.layout = layout

    def verify(self, candidate: MemoryObject, query: ObjectSelector) -> bool:
        views = candidate.views
        if not views:
            return False
        latest = views[-1]
        if latest.category != query.category:
            return False
        if not set(query.attributes) <= set(latest.attributes):
            return False
        if query.relation:
            kind = query.relation[0]
            if kind == "in-room":
                if self.layout is None:
                    return False
                return self.layout.room_name(candidate.centroid) == query.relation[1]
            if kind == "nearest-to":
                # Needs the full candidate set to compare distances; the
                # planner resolves this relation against the live world
                # instead of a single stored record.
                return True
            return False
        return True
