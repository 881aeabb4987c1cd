"""Structural invariant checks over a WorldState.

Returns violation records instead of raising so callers can report all
problems at once. An empty list means every invariant holds.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .types import WorldState


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


def validate_world(state: WorldState) -> list[Violation]:
    out: list[Violation] = []
    seen_cells: dict = {}
    for oid in sorted(state.objects):
        obj = state.objects[oid]
        for cell in obj.footprint:
            if cell in seen_cells:
                out.append(Violation("OverlapViolation", f"{oid} and {seen_cells[cell]} share cell {cell}"))
            else:
                seen_cells[cell] = oid
            if state.layout.is_wall(cell):
                out.append(Violation("FootprintInWall", f"{oid} footprint covers wall cell {cell}"))

        parent = obj.states.parent_receptacle
        if parent is not None and parent not in state.objects:
            out.append(Violation("DanglingReference", f"{oid} references missing receptacle {parent}"))
        chain = state.ancestors(oid)
        if chain and state.objects[chain[-1]].states.parent_receptacle is not None:
            out.append(Violation("ContainmentCycle", f"{oid} is inside a containment loop"))

        for affordance, field_name in (
            ("openable", "open"),
            ("toggleable", "toggled_on"),
            ("sliceable", "sliced"),
            ("cookable", "cooked"),
        ):
            value = getattr(obj.states, field_name)
            if value is not None and not obj.has(affordance):
                out.append(Violation("StateAffordanceMismatch", f"{oid} has {field_name} without {affordance}"))
        if obj.states.filled_with is not None and not obj.has("fillable"):
            out.append(Violation("StateAffordanceMismatch", f"{oid} filled without fillable"))

        if obj.cell is None and state.agent.held_object != oid:
            out.append(Violation("OrphanObject", f"{oid} has no cell and is not held"))

    if not state.walkable(state.agent.pose.cell):
        out.append(Violation("AgentCellBlocked", f"agent at {state.agent.pose.cell}"))

    held = state.agent.held_object
    if held is not None and held not in state.objects:
        out.append(Violation("DanglingReference", f"held object {held} missing"))

    out.extend(_connectivity(state))
    return out


def _connectivity(state: WorldState) -> list[Violation]:
    """Every room must be reachable from the agent over walkable cells."""
    start = state.agent.pose.cell
    if not state.walkable(start):
        return []
    seen = {start}
    reached_rooms = {state.layout.room_of(start)}
    queue = deque([start])
    while queue:
        gx, gz = queue.popleft()
        for nxt in ((gx + 1, gz), (gx - 1, gz), (gx, gz + 1), (gx, gz - 1)):
            if nxt not in seen and state.walkable(nxt):
                seen.add(nxt)
                reached_rooms.add(state.layout.room_of(nxt))
                queue.append(nxt)
    missing = [r.name for i, r in enumerate(state.layout.rooms) if i not in reached_rooms]
    if missing:
        return [Violation("DisconnectedRooms", f"unreachable rooms: {missing}")]
    return []
