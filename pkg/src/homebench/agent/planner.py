"""Goal scheduling, refinement, and grounding.

checked_decompose / refine_goal wrap the reasoner with structural
validation (one repair retry, then error). next_goal picks among ready
goals by proximity to the agent. ground_subgoals lowers a refined goal to
executor subgoals: fully bound goals become navigate+manipulate sequences,
unresolved references become Search subgoals seeded from the receptacle
prior table; searches are executed first and the goal is re-refined once
memory knows the missing objects.
"""

from __future__ import annotations

import math

from ..grid import cell_distance
from ..memory.episodic import EpisodicMemory
from ..memory.spatial import EmptyMemoryError, SpatialMemory
from ..tasks.types import ChecklistItem, ObjectSelector
from .goals import Binding, Goal, GoalDag, RefinedGoal, SubGoal
from .priors import likely_receptacles
from .reasoner import Reasoner

FLAT_SURFACES = ("countertop", "dining_table", "coffee_table", "tv_stand", "desk", "bed", "nightstand", "sofa")
ANY_SURFACE = "any-flat-surface"


class MalformedPlanError(RuntimeError):
    pass


class DeadlockedDagError(RuntimeError):
    pass


def checked_decompose(reasoner: Reasoner, instruction: str, scene_summary: dict) -> GoalDag:
    """Reasoner decomposition with validation and one repair attempt."""
    if not instruction:
        raise MalformedPlanError("empty instruction")
    for attempt in range(2):
        dag = reasoner.decompose(instruction, scene_summary)
        problems = dag.validate()
        if not problems:
            return dag
    raise MalformedPlanError(f"reasoner produced an invalid goal graph: {problems}")


def refine_goal(goal: Goal, episodic: EpisodicMemory, spatial: SpatialMemory, reasoner: Reasoner) -> RefinedGoal:
    for attempt in range(2):
        rg = reasoner.refine(goal, episodic, spatial)
        problems = rg.validate()
        if not problems:
            return rg
    raise MalformedPlanError(f"reasoner produced an invalid refinement: {problems}")


# -- scheduling ---------------------------------------------------------------


def goal_location(goal: Goal, spatial: SpatialMemory) -> tuple[int, int] | None:
    """Best-known cell for a goal's first target: freshest memory sighting,
    else the reasoner's room hint."""
    for selector in goal.target_selectors:
        entry = locate_selector(selector, spatial)
        if entry is not None:
            return entry.centroid
    if goal.hints.get("cell"):
        return tuple(goal.hints["cell"])
    if goal.room_hint:
        return tuple(goal.room_hint[1])
    return None


def next_goal(dag: GoalDag, agent_cell: tuple[int, int], spatial: SpatialMemory) -> Goal | None:
    """Nearest ready goal (all prerequisites resolved); ties break on id.
    Unlocated goals sort last."""
    ready = dag.ready_goals()
    if not ready:
        if dag.remaining():
            raise DeadlockedDagError(f"{dag.remaining()} goals remain but none are ready")
        return None
    scored = []
    for gid in ready:
        loc = goal_location(dag.nodes[gid], spatial)
        dist = cell_distance(agent_cell, loc) if loc is not None else math.inf
        scored.append((dist, gid))
    scored.sort()
    return dag.nodes[scored[0][1]]


# -- memory lookup -------------------------------------------------------------


def view_matches(view, selector: ObjectSelector) -> bool:
    if selector.category == "__id__":
        return view.world_id in selector.attributes
    if selector.category == ANY_SURFACE:
        if view.category not in FLAT_SURFACES:
            return False
    elif view.category != selector.category:
        return False
    return set(selector.attributes) <= set(view.attributes)


def locate_selector(selector: ObjectSelector, spatial: SpatialMemory, layout=None):
    """Freshest memory entry matching a selector, or None.

    Retrieval ranks by embedding similarity first; a literal check over the
    stored views confirms the match, and a full scan backstops vocabulary
    gaps. Room relations need layout geometry and are skipped without it.
    """
    label = " ".join(sorted(selector.attributes) + [selector.category.replace("_", " ")])

    def confirm(entry) -> bool:
        if not view_matches(entry.views[-1], selector):
            return False
        if selector.relation and selector.relation[0] == "in-room":
            if layout is None:
                return True
            return layout.room_name(entry.centroid) == selector.relation[1]
        return True

    try:
        ranked = spatial.retrieve(label, k=8)
    except EmptyMemoryError:
        return None
    candidates = [entry for _, entry in ranked if confirm(entry)]
    if not candidates:
        candidates = [e for e in spatial.objects.values() if confirm(e)]
    if not candidates:
        return None
    return max(candidates, key=lambda e: (e.last_seen_step, e.mem_id))


# -- refinement default ---------------------------------------------------------


def goal_slots(goal: Goal) -> dict[str, ObjectSelector]:
    """Which object references a goal needs bound, by slot name."""
    if not goal.desired_conditions:
        return {}
    item = goal.desired_conditions[0]
    kind = item.condition.kind
    slots: dict[str, ObjectSelector] = {"subject": item.selector}
    if kind == "in_receptacle":
        target = item.condition.target
        slots["receptacle"] = target if isinstance(target, ObjectSelector) else ObjectSelector(category="__id__", attributes=frozenset({target}))
    elif kind == "in_room":
        slots["receptacle"] = ObjectSelector(category=ANY_SURFACE, relation=("in-room", item.condition.target))
    elif kind == "sliced":
        slots["tool"] = ObjectSelector(category="knife")
    elif kind == "cooked":
        slots["appliance"] = ObjectSelector(category="stove")
    elif kind == "filled_with":
        slots["appliance"] = ObjectSelector(category="sink")
    return slots


def default_refine(goal: Goal, episodic: EpisodicMemory, spatial: SpatialMemory, layout=None) -> RefinedGoal:
    """Shared refinement: bind each slot from privileged hints, else from
    spatial memory; the rest become residual searches. If the hand is
    occupied and the goal starts by picking something else up, prepend a
    put-down, as episodic experience prescribes."""
    if not goal.desired_conditions:
        return RefinedGoal(goal.goal_id, goal.description, {}, [], [])

    slots = goal_slots(goal)
    bound: dict[str, Binding] = {}
    residual: list[ObjectSelector] = []
    notes: list[str] = []

    for slot, selector in slots.items():
        hint_id = goal.hints.get(slot)
        hint_cell = goal.hints.get(f"{slot}_cell")
        hint_container = goal.hints.get(f"{slot}_container")
        if hint_id is not None:
            # A privileged reasoner already allocated this exact object;
            # memory only refreshes its location. Re-resolving by selector
            # here could collide with another goal's allocation.
            entries = spatial.entries_for_world_id(hint_id)
            if entries:
                entry = entries[0]
                bound[slot] = Binding(
                    "memory",
                    mem_id=entry.mem_id,
                    world_id=hint_id,
                    cell=entry.centroid,
                    container=entry.views[-1].containing_receptacle,
                )
            else:
                bound[slot] = Binding(
                    "world",
                    world_id=hint_id,
                    cell=tuple(hint_cell) if hint_cell else None,
                    container=hint_container,
                )
            notes.append(f"{slot}={hint_id}")
            continue
        entry = locate_selector(selector, spatial, layout) if selector.category != "__id__" else None
        if entry is None and selector.category == "__id__":
            entry = _entry_for_id(next(iter(selector.attributes)), spatial)
        if entry is not None:
            bound[slot] = Binding(
                "memory",
                mem_id=entry.mem_id,
                world_id=entry.views[-1].world_id,
                cell=entry.centroid,
                container=entry.views[-1].containing_receptacle,
            )
            notes.append(f"{slot}={entry.label}@{entry.centroid}")
        else:
            residual.append(selector)
            notes.append(f"{slot}=?")

    pre_steps: list[SubGoal] = []
    kind = goal.desired_conditions[0].condition.kind
    needs_hand = kind in ("in_receptacle", "in_room", "cooked", "filled_with", "sliced")
    held = episodic.held_object
    if needs_hand and held is not None:
        wanted = bound.get("tool" if kind == "sliced" else "subject")
        if wanted is None or wanted.world_id != held:
            pre_steps.append(SubGoal("PlaceIn", {"object": held, "receptacle": "@nearest-surface"}))
            notes.append(f"put down {held} first")

    text = f"{goal.description} [{'; '.join(notes)}]" if notes else goal.description
    return RefinedGoal(goal.goal_id, text, bound, residual, pre_steps)


def _entry_for_id(world_id: str, spatial: SpatialMemory):
    entries = spatial.entries_for_world_id(world_id)
    return entries[0] if entries else None


# -- grounding ------------------------------------------------------------------


def ground_subgoals(rg: RefinedGoal, spatial: SpatialMemory, goal: Goal) -> list[SubGoal]:
    """Lower a refined goal to subgoals. Unresolved references yield Search
    subgoals (hints from the prior table); bound goals become direct
    navigate+manipulate sequences."""
    if not goal.desired_conditions:
        cell = goal.hints.get("cell")
        return [SubGoal("NavigateTo", {"cell": tuple(cell)})] if cell else []

    if rg.residual_searches:
        searches = []
        for selector in rg.residual_searches:
            params = {"selector": selector, "hints": likely_receptacles(selector.category)}
            if selector.relation and selector.relation[0] == "in-room":
                params["room"] = selector.relation[1]
            elif goal.room_hint:
                params["room"] = goal.room_hint[0]
            searches.append(SubGoal("Search", params))
        return list(rg.pre_steps) + searches

    item = goal.desired_conditions[0]
    kind = item.condition.kind
    steps: list[SubGoal | None] = list(rg.pre_steps)
    subject = rg.bound_objects.get("subject")

    def nav(binding: Binding) -> SubGoal | None:
        params: dict = {}
        if binding.cell is not None:
            params["cell"] = binding.cell
        if binding.mem_id is not None:
            params["mem_id"] = binding.mem_id
        return SubGoal("NavigateTo", params) if params else None

    if kind in ("in_receptacle", "in_room"):
        receptacle = rg.bound_objects["receptacle"]
        steps += [
            nav(subject),
            SubGoal("PickUp", {"object": subject.world_id, "cell": subject.cell, "container": subject.container}),
            nav(receptacle),
            SubGoal("PlaceIn", {"object": subject.world_id, "receptacle": receptacle.world_id, "cell": receptacle.cell}),
        ]
    elif kind == "open":
        steps += [
            nav(subject),
            SubGoal("Open" if item.condition.target else "Close", {"object": subject.world_id, "cell": subject.cell}),
        ]
    elif kind == "toggled_on":
        steps += [
            nav(subject),
            SubGoal("Toggle", {"object": subject.world_id, "on": bool(item.condition.target), "cell": subject.cell}),
        ]
    elif kind == "sliced":
        tool = rg.bound_objects["tool"]
        steps += [
            nav(tool),
            SubGoal("PickUp", {"object": tool.world_id, "cell": tool.cell, "container": tool.container}),
            nav(subject),
            SubGoal("Slice", {"object": subject.world_id, "cell": subject.cell, "container": subject.container}),
        ]
    elif kind == "cooked":
        appliance = rg.bound_objects["appliance"]
        steps += [
            nav(subject),
            SubGoal("PickUp", {"object": subject.world_id, "cell": subject.cell, "container": subject.container}),
            nav(appliance),
            SubGoal("CookOn", {"object": subject.world_id, "appliance": appliance.world_id, "cell": appliance.cell}),
        ]
    elif kind == "filled_with":
        appliance = rg.bound_objects["appliance"]
        steps += [
            nav(subject),
            SubGoal("PickUp", {"object": subject.world_id, "cell": subject.cell, "container": subject.container}),
            nav(appliance),
            SubGoal("FillFrom", {"object": subject.world_id, "sink": appliance.world_id, "cell": appliance.cell}),
        ]
    else:
        raise MalformedPlanError(f"cannot ground condition kind {kind!r}")
    return [sg for sg in steps if sg is not None]
