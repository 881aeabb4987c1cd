"""Action semantics and exact step accounting.

Movement displaces the agent one 0.05 m quantum along the cardinal axis
nearest to the effective movement direction, which keeps positions on the
lattice for every 30-degree heading. A nav step ticks each time 0.25 m of
cumulative movement completes and on every rotation or tilt; each successful
object interaction is one manip step. Failed actions leave the world
unchanged except for the total-action counter.
"""

from __future__ import annotations

from ..config import SimConfig
from .observe import visibility
from .types import (
    Action,
    ActionResult,
    COOK_APPLIANCES,
    ErrorCode,
    FILL_APPLIANCES,
    MANIPULATION_ACTIONS,
    MOVE_ACTIONS,
    MOVE_OFFSETS,
    ROTATE_ACTIONS,
    SLICER_CATEGORIES,
    TILT_ACTIONS,
    WorldState,
    failure,
    success,
)
from ..grid import snap_cardinal

_DEFAULT_SIM = SimConfig()


def step_cost(prev: WorldState, a: Action, result: ActionResult, sim: SimConfig = _DEFAULT_SIM) -> tuple[int, int]:
    """(navIncrement, manipIncrement) for an action applied to `prev`.

    Pure: reads only prev.accumulated_quanta. A successful move contributes
    one quantum; the nav step fires when the running total reaches a full
    0.25 m.
    """
    if not result.ok or a.name == "Stop":
        return (0, 0)
    if a.name in MOVE_ACTIONS:
        return ((prev.accumulated_quanta + 1) // sim.quanta_per_nav_step, 0)
    if a.name in ROTATE_ACTIONS or a.name in TILT_ACTIONS:
        return (1, 0)
    return (0, 1)


def apply_action(state: WorldState, a: Action, sim: SimConfig = _DEFAULT_SIM) -> tuple[WorldState, ActionResult]:
    agent = state.agent
    if agent.total_actions >= sim.action_cap:
        return state, failure(ErrorCode.EPISODE_CAP_EXCEEDED, f"action budget of {sim.action_cap} exhausted")

    agent.total_actions += 1
    result = _execute(state, a, sim)

    nav, manip = step_cost(state, a, result, sim)
    if result.ok and a.name in MOVE_ACTIONS:
        state.accumulated_quanta = (state.accumulated_quanta + 1) % sim.quanta_per_nav_step
    agent.nav_steps += nav
    agent.manip_steps += manip
    return state, result


def _execute(state: WorldState, a: Action, sim: SimConfig) -> ActionResult:
    name = a.name
    if name == "Stop":
        return success()
    if name in MOVE_ACTIONS:
        return _move(state, MOVE_OFFSETS[name])
    if name in ROTATE_ACTIONS:
        state.agent.pose = state.agent.pose.rotated(30 if name == "RotateRight" else -30)
        return success()
    if name in TILT_ACTIONS:
        delta = 30 if name == "LookUp" else -30
        pitch = state.agent.pose.pitch + delta
        if not sim.pitch_min <= pitch <= sim.pitch_max:
            return failure(ErrorCode.COLLISION, "pitch limit reached")
        state.agent.pose = state.agent.pose.tilted(delta)
        return success()
    return _manipulate(state, a, sim)


def _move(state: WorldState, offset: int) -> ActionResult:
    pose = state.agent.pose
    dgx, dgz = snap_cardinal(pose.heading + offset)
    target = (pose.gx + dgx, pose.gz + dgz)
    if not state.walkable(target):
        return failure(ErrorCode.COLLISION, f"cell {target} blocked")
    state.agent.pose = pose.moved(dgx, dgz)
    return success()


def _check_perception(state: WorldState, oid: str, sim: SimConfig) -> ActionResult | None:
    """Shared closed-container / visibility / reach gate for manipulation."""
    if state.inside_closed(oid):
        return failure(ErrorCode.CLOSED_RECEPTACLE, f"{oid} is inside a closed receptacle")
    if not visibility(state, oid, sim):
        return failure(ErrorCode.NOT_VISIBLE, f"{oid} not visible")
    if state.distance_to(oid) > sim.reach_distance + 1e-12:
        return failure(ErrorCode.NOT_REACHABLE, f"{oid} beyond reach")
    return None


def _manipulate(state: WorldState, a: Action, sim: SimConfig) -> ActionResult:
    oid = a.target
    if oid not in state.objects:
        return failure(ErrorCode.INVALID_TARGET, f"unknown object {oid}")
    handler = {
        "Pick": _pick,
        "Place": _place,
        "Open": _open,
        "Close": _close,
        "ToggleOn": _toggle_on,
        "ToggleOff": _toggle_off,
        "Slice": _slice,
    }[a.name]
    result = handler(state, oid, sim)
    if result.ok:
        _propagate_derived(state)
    return result


def _pick(state: WorldState, oid: str, sim: SimConfig) -> ActionResult:
    if state.agent.held_object is not None:
        return failure(ErrorCode.HAND_FULL, f"already holding {state.agent.held_object}")
    obj = state.objects[oid]
    if not obj.has("pickupable"):
        return failure(ErrorCode.INVALID_TARGET, f"{obj.category} is not pickupable")
    gate = _check_perception(state, oid, sim)
    if gate:
        return gate
    parent = obj.states.parent_receptacle
    if parent is not None:
        state.contents[parent].remove(oid)
    obj.states.parent_receptacle = None
    obj.cell = None
    state.agent.held_object = oid
    return success()


def _place(state: WorldState, rid: str, sim: SimConfig) -> ActionResult:
    held = state.agent.held_object
    if held is None:
        return failure(ErrorCode.HAND_EMPTY, "nothing held")
    rec = state.objects[rid]
    if rid == held or not rec.is_surface:
        return failure(ErrorCode.INVALID_TARGET, f"{rec.category} cannot receive objects")
    if rec.states.open is False:
        return failure(ErrorCode.CLOSED_RECEPTACLE, f"{rid} is closed")
    gate = _check_perception(state, rid, sim)
    if gate:
        return gate
    if held in state.ancestors(rid) or held == rid:
        return failure(ErrorCode.INVALID_TARGET, "placement would create a containment cycle")
    slot = state.free_slot(rid)
    if slot is None:
        return failure(ErrorCode.INVALID_TARGET, f"{rid} has no free space")
    obj = state.objects[held]
    obj.states.parent_receptacle = rid
    obj.cell = slot
    state.contents[rid].append(held)
    state.agent.held_object = None
    return success()


def _open(state: WorldState, oid: str, sim: SimConfig) -> ActionResult:
    obj = state.objects[oid]
    if not obj.has("openable"):
        return failure(ErrorCode.INVALID_TARGET, f"{obj.category} is not openable")
    if obj.states.open:
        return failure(ErrorCode.INVALID_TARGET, f"{oid} already open")
    gate = _check_perception(state, oid, sim)
    if gate:
        return gate
    obj.states.open = True
    return success()


def _close(state: WorldState, oid: str, sim: SimConfig) -> ActionResult:
    obj = state.objects[oid]
    if not obj.has("openable"):
        return failure(ErrorCode.INVALID_TARGET, f"{obj.category} is not openable")
    if obj.states.open is False:
        return failure(ErrorCode.INVALID_TARGET, f"{oid} already closed")
    gate = _check_perception(state, oid, sim)
    if gate:
        return gate
    obj.states.open = False
    return success()


def _toggle(state: WorldState, oid: str, sim: SimConfig, on: bool) -> ActionResult:
    obj = state.objects[oid]
    if not obj.has("toggleable"):
        return failure(ErrorCode.INVALID_TARGET, f"{obj.category} is not toggleable")
    if obj.states.toggled_on == on:
        return failure(ErrorCode.INVALID_TARGET, f"{oid} already {'on' if on else 'off'}")
    gate = _check_perception(state, oid, sim)
    if gate:
        return gate
    obj.states.toggled_on = on
    return success()


def _toggle_on(state, oid, sim):
    return _toggle(state, oid, sim, True)


def _toggle_off(state, oid, sim):
    return _toggle(state, oid, sim, False)


def _slice(state: WorldState, oid: str, sim: SimConfig) -> ActionResult:
    obj = state.objects[oid]
    # A held target has no supporting surface; this outranks the knife check.
    if oid == state.agent.held_object:
        return failure(ErrorCode.INVALID_TARGET, f"{oid} must rest on a surface to be sliced")
    if not obj.has("sliceable"):
        return failure(ErrorCode.INVALID_TARGET, f"{obj.category} is not sliceable")
    if obj.states.sliced:
        return failure(ErrorCode.INVALID_TARGET, f"{oid} already sliced")
    gate = _check_perception(state, oid, sim)
    if gate:
        return gate
    held = state.agent.held_object
    if held is None or state.objects[held].category not in SLICER_CATEGORIES:
        return failure(ErrorCode.NO_KNIFE, "slicing requires a held knife")
    obj.states.sliced = True
    return success()


def _propagate_derived(state: WorldState) -> None:
    """Cook and fill are driven by placement on powered appliances."""
    for oid in state._cookable_ids:
        obj = state.objects[oid]
        if obj.states.cooked:
            continue
        parent = obj.states.parent_receptacle
        if parent is None:
            continue
        appliance = state.objects[parent]
        if appliance.category in COOK_APPLIANCES and appliance.states.toggled_on:
            obj.states.cooked = True
    for oid in state._fillable_ids:
        obj = state.objects[oid]
        if obj.states.filled_with:
            continue
        parent = obj.states.parent_receptacle
        if parent is None:
            continue
        appliance = state.objects[parent]
        if appliance.category in FILL_APPLIANCES and appliance.states.toggled_on:
            obj.states.filled_with = "water"
