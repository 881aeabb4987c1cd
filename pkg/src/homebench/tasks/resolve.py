"""Selector resolution and checklist evaluation against a world state.

Checklist semantics are existential: an item is satisfied when at least one
object matching its selector meets the condition. Selector attribute
matching is against intrinsic object attributes (colors and the like), not
observable state words.
"""

from __future__ import annotations

from ..grid import cell_distance
from ..world.types import WorldState
from .types import ChecklistItem, Condition, ObjectSelector


class UnknownCategoryError(KeyError):
    pass


def resolve_selector(state: WorldState, s: ObjectSelector, strict: bool = False) -> list[str]:
    """Object ids matching category, all attributes, and the relation, sorted."""
    if strict and s.category not in state.category_index:
        raise UnknownCategoryError(s.category)
    pool = [
        oid
        for oid in state.category_index.get(s.category, [])
        if s.attributes <= state.objects[oid].attributes
    ]
    if not s.relation or not pool:
        return pool

    kind = s.relation[0]
    if kind == "in-room":
        room = s.relation[1]
        return [oid for oid in pool if state.layout.room_name(state.effective_cell(oid)) == room]
    if kind == "nearest-to":
        anchor_sel = ObjectSelector(category=s.relation[1])
        anchors = resolve_selector(state, anchor_sel)
        if not anchors:
            return []

        def nearest_anchor(oid: str) -> float:
            cell = state.effective_cell(oid)
            return min(cell_distance(cell, state.effective_cell(a)) for a in anchors)

        best = min(pool, key=lambda oid: (nearest_anchor(oid), oid))
        return [best]
    raise ValueError(f"unknown relation kind {kind!r}")


def _condition_holds(state: WorldState, oid: str, cond: Condition) -> bool:
    obj = state.objects[oid]
    kind = cond.kind
    if kind == "in_receptacle":
        parent = obj.states.parent_receptacle
        if parent is None:
            return False
        if isinstance(cond.target, ObjectSelector):
            return parent in resolve_selector(state, cond.target)
        return parent == cond.target
    if kind == "in_room":
        return state.layout.room_name(state.effective_cell(oid)) == cond.target
    if kind == "open":
        return obj.states.open == cond.target
    if kind == "toggled_on":
        return obj.states.toggled_on == cond.target
    if kind == "sliced":
        return obj.states.sliced is True
    if kind == "cooked":
        return obj.states.cooked is True
    if kind == "filled_with":
        return obj.states.filled_with == cond.target
    raise ValueError(kind)


def evaluate_item(state: WorldState, item: ChecklistItem) -> bool:
    return any(_condition_holds(state, oid, item.condition) for oid in resolve_selector(state, item.selector))


def satisfied_flags(state: WorldState, checklist: list[ChecklistItem]) -> list[bool]:
    return [evaluate_item(state, item) for item in checklist]
