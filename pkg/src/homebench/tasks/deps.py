"""Ordering constraints between checklist items.

Rule-based temporal/causal/object-level dependencies, derived from the
initial world state. Used both when compiling an episode's witness plan and
when scripted reasoners assemble their goal graphs, so a single definition
keeps the two consistent.
"""

from __future__ import annotations

from ..world.types import COOK_APPLIANCES, FILL_APPLIANCES, SLICER_CATEGORIES, WorldState
from .resolve import resolve_selector
from .types import ChecklistItem, ObjectSelector


def _subjects(state: WorldState, item: ChecklistItem) -> set[str]:
    return set(resolve_selector(state, item.selector))


def _receptacle_targets(state: WorldState, item: ChecklistItem) -> set[str]:
    if item.condition.kind != "in_receptacle":
        return set()
    target = item.condition.target
    if isinstance(target, ObjectSelector):
        return set(resolve_selector(state, target))
    return {target} if isinstance(target, str) else set()


def infer_dependencies(state: WorldState, checklist: list[ChecklistItem]) -> set[tuple[int, int]]:
    """Edges (i, j) meaning item i must be completed before item j."""
    edges: set[tuple[int, int]] = set()
    subjects = [_subjects(state, item) for item in checklist]
    rec_targets = [_receptacle_targets(state, item) for item in checklist]
    containers = [
        {a for oid in subj for a in state.ancestors(oid)} for subj in subjects
    ]
    cooked_subjects: set[str] = set()
    for item, subj in zip(checklist, subjects):
        if item.condition.kind == "cooked":
            cooked_subjects |= subj

    for j, item_j in enumerate(checklist):
        kind_j = item_j.condition.kind
        for i, item_i in enumerate(checklist):
            if i == j:
                continue
            kind_i = item_i.condition.kind

            # Door-state goals run after anything that must reach inside or
            # place into the same receptacle.
            if kind_j == "open" and subjects[j] & (rec_targets[i] | containers[i]):
                edges.add((i, j))

            # Cooking may use an openable appliance (microwave); its final
            # door state waits for the cooking to finish, and also for any
            # later relocation of a cooked object (which reaches back into
            # the appliance).
            if kind_j == "open":
                cats = {state.objects[oid].category for oid in subjects[j]}
                if cats & set(COOK_APPLIANCES):
                    if kind_i == "cooked":
                        edges.add((i, j))
                    if kind_i in ("in_receptacle", "in_room") and subjects[i] & cooked_subjects:
                        edges.add((i, j))

            # Permanent transformations happen before the object is moved to
            # its final resting place.
            if (
                kind_i in ("sliced", "cooked", "filled_with")
                and kind_j in ("in_receptacle", "in_room")
                and subjects[i] & subjects[j]
            ):
                edges.add((i, j))

            # Cooking/filling powers an appliance on; a final off-state goal
            # for that appliance family waits until afterwards.
            if kind_j == "toggled_on" and item_j.condition.target is False:
                cats = {state.objects[oid].category for oid in subjects[j]}
                if kind_i == "cooked" and cats & set(COOK_APPLIANCES):
                    edges.add((i, j))
                if kind_i == "filled_with" and cats & set(FILL_APPLIANCES):
                    edges.add((i, j))

            # Slicing borrows the knife, so it precedes any goal that files
            # the knife away.
            if kind_i == "sliced" and kind_j in ("in_receptacle", "in_room"):
                cats = {state.objects[oid].category for oid in subjects[j]}
                if cats & set(SLICER_CATEGORIES):
                    edges.add((i, j))

    return edges


def infer_dependencies_symbolic(checklist: list[ChecklistItem]) -> set[tuple[int, int]]:
    """World-free approximation of infer_dependencies: relates items through
    selector category/attribute identity instead of resolved object sets.
    Used by reasoners that only see the instruction text."""
    edges: set[tuple[int, int]] = set()

    def same_subject(a: ChecklistItem, b: ChecklistItem) -> bool:
        return a.selector.category == b.selector.category and a.selector.attributes == b.selector.attributes

    for j, item_j in enumerate(checklist):
        kind_j = item_j.condition.kind
        for i, item_i in enumerate(checklist):
            if i == j:
                continue
            kind_i = item_i.condition.kind
            if (
                kind_i in ("sliced", "cooked", "filled_with")
                and kind_j in ("in_receptacle", "in_room")
                and same_subject(item_i, item_j)
            ):
                edges.add((i, j))
            if kind_j == "open":
                target = item_i.condition.target
                if (
                    kind_i == "in_receptacle"
                    and isinstance(target, ObjectSelector)
                    and target.category == item_j.selector.category
                ):
                    edges.add((i, j))
                if kind_i == "cooked" and item_j.selector.category in COOK_APPLIANCES:
                    edges.add((i, j))
            if kind_i == "sliced" and kind_j in ("in_receptacle", "in_room") and item_j.selector.category in SLICER_CATEGORIES:
                edges.add((i, j))
    return edges


def topological_order(count: int, edges: set[tuple[int, int]]) -> list[int]:
    """Stable topological order (lowest original index first among ready)."""
    import heapq

    incoming = {i: 0 for i in range(count)}
    outgoing: dict[int, list[int]] = {i: [] for i in range(count)}
    for i, j in edges:
        incoming[j] += 1
        outgoing[i].append(j)
    ready = [i for i in range(count) if incoming[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        i = heapq.heappop(ready)
        order.append(i)
        for j in outgoing[i]:
            incoming[j] -= 1
            if incoming[j] == 0:
                heapq.heappush(ready, j)
    if len(order) != count:
        raise ValueError("dependency cycle")
    return order
