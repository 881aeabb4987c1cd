"""Visibility predicate and symbolic observation rendering.

An object is visible when it is in the agent's room, within the view
distance, inside the horizontal facing cone, and not shut inside a closed
receptacle. Room membership stands in for wall occlusion: rooms are
rectangular, so anything in another room is behind a wall (sight through an
open doorway is not modeled). The held object is never visible; it is
tracked through agent status instead.
"""

from __future__ import annotations

import math

from ..config import SimConfig
from ..grid import CELL, heading_vector
from .types import Cell, Observation, VisibleRecord, WorldState

_DEFAULT_SIM = SimConfig()


class UnknownObjectError(KeyError):
    pass


def state_words(obj) -> list[str]:
    """Observable state descriptors, exposed alongside intrinsic attributes."""
    words = []
    s = obj.states
    if s.open is not None:
        words.append("open" if s.open else "closed")
    if s.toggled_on is not None:
        words.append("on" if s.toggled_on else "off")
    if s.sliced:
        words.append("sliced")
    if s.cooked:
        words.append("cooked")
    if s.filled_with:
        words.append(f"filled-with-{s.filled_with}")
    return words


def _in_cone(agent_pose, target: Cell, half_angle_deg: float) -> bool:
    dx = target[0] - agent_pose.gx
    dz = target[1] - agent_pose.gz
    if dx == 0 and dz == 0:
        return True
    hx, hz = heading_vector(agent_pose.heading)
    dot = dx * hx + dz * hz
    norm = math.hypot(dx, dz)
    cos_angle = dot / norm
    return cos_angle >= math.cos(math.radians(half_angle_deg)) - 1e-12


def visibility(state: WorldState, target: str, sim: SimConfig = _DEFAULT_SIM) -> bool:
    """True iff `target` passes every clause of the visibility predicate."""
    if target not in state.objects:
        raise UnknownObjectError(target)
    if target == state.agent.held_object:
        return False
    if state.inside_closed(target):
        return False
    cell = state.effective_cell(target)
    agent_cell = state.agent.pose.cell
    if state.layout.room_of(cell) != state.layout.room_of(agent_cell):
        return False
    dist = math.hypot(cell[0] - agent_cell[0], cell[1] - agent_cell[1]) * CELL
    if dist > sim.view_distance + 1e-12:
        return False
    return _in_cone(state.agent.pose, cell, sim.fov_degrees / 2)


def _mask_area(obj, dist: float) -> float:
    return max(1.0, obj.size / max(dist, CELL) ** 2)


def local_occupancy(state: WorldState, radius: int) -> dict:
    pose = state.agent.pose
    x0, z0 = pose.gx - radius, pose.gz - radius
    side = 2 * radius + 1
    rows = []
    for gz in range(z0, z0 + side):
        rows.append("".join("0" if state.walkable((gx, gz)) else "1" for gx in range(x0, x0 + side)))
    return {"x0": x0, "z0": z0, "w": side, "h": side, "rows": rows}


def render_observation(state: WorldState, sim: SimConfig = _DEFAULT_SIM) -> Observation:
    pose = state.agent.pose
    records = []
    for oid in sorted(state.objects):
        if not visibility(state, oid, sim):
            continue
        obj = state.objects[oid]
        cell = state.effective_cell(oid)
        dist = math.hypot(cell[0] - pose.gx, cell[1] - pose.gz) * CELL
        records.append(
            VisibleRecord(
                id=oid,
                category=obj.category,
                attributes=tuple(sorted(obj.attributes) + state_words(obj)),
                distance=dist,
                mask_area=_mask_area(obj, dist),
                cell=cell,
                containing_receptacle=obj.states.parent_receptacle,
            )
        )
    return Observation(
        agent_pose=pose,
        visible=tuple(records),
        occupancy_fn=lambda: local_occupancy(state, sim.occupancy_patch_radius),
    )
