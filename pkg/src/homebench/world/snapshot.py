"""Versioned JSON snapshots for layouts and world states.

Snapshots are byte-stable: dictionaries are emitted through canonical_json
(sorted keys) and all lattice coordinates serialize as exact meters.
Schema versions: layout/1, world/1.
"""

from __future__ import annotations

from ..grid import Pose
from ..jsonutil import SchemaError, expect
from .types import (
    AgentState,
    Doorway,
    HouseLayout,
    ObjectInstance,
    ObjectStateSet,
    Room,
    WorldState,
)

LAYOUT_SCHEMA = "layout/1"
WORLD_SCHEMA = "world/1"


def _object_to_dict(obj: ObjectInstance) -> dict:
    footprint = None
    if obj.footprint:
        xs = [c[0] for c in obj.footprint]
        zs = [c[1] for c in obj.footprint]
        footprint = [min(xs), min(zs), max(xs), max(zs)]
    return {
        "id": obj.id,
        "category": obj.category,
        "attributes": sorted(obj.attributes),
        "cell": list(obj.cell) if obj.cell is not None else None,
        "footprint": footprint,
        "size": obj.size,
        "affordances": sorted(obj.affordances),
        "states": obj.states.to_dict(),
    }


def _object_from_dict(d: dict, path: str) -> ObjectInstance:
    oid = expect(d, "id", str, path)
    fp = d.get("footprint")
    cells = frozenset()
    if fp is not None:
        x0, z0, x1, z1 = fp
        cells = frozenset((gx, gz) for gx in range(x0, x1 + 1) for gz in range(z0, z1 + 1))
    cell = d.get("cell")
    return ObjectInstance(
        id=oid,
        category=expect(d, "category", str, path),
        attributes=frozenset(expect(d, "attributes", list, path)),
        cell=tuple(cell) if cell is not None else None,
        footprint=cells,
        size=expect(d, "size", int, path),
        affordances=frozenset(expect(d, "affordances", list, path)),
        states=ObjectStateSet.from_dict(expect(d, "states", dict, path)),
    )


def layout_to_dict(layout: HouseLayout) -> dict:
    return {
        "schema": LAYOUT_SCHEMA,
        "id": layout.layout_id,
        "bounds": list(layout.bounds),
        "rooms": [
            {"name": r.name, "rect": [r.x0, r.z0, r.x1, r.z1]} for r in layout.rooms
        ],
        "doorways": [
            {"between": list(d.rooms), "cells": [list(c) for c in d.cells]} for d in layout.doorways
        ],
        "objects": [_object_to_dict(o) for o in layout.objects],
        "agentStart": layout.agent_start.to_dict(),
    }


def layout_from_dict(doc: dict) -> HouseLayout:
    if expect(doc, "schema", str, "layout") != LAYOUT_SCHEMA:
        raise SchemaError("layout.schema", f"unsupported schema {doc['schema']!r}")
    rooms = []
    for i, r in enumerate(expect(doc, "rooms", list, "layout")):
        x0, z0, x1, z1 = expect(r, "rect", list, f"layout.rooms[{i}]")
        rooms.append(Room(expect(r, "name", str, f"layout.rooms[{i}]"), x0, z0, x1, z1))
    doorways = []
    for i, d in enumerate(expect(doc, "doorways", list, "layout")):
        doorways.append(
            Doorway(
                rooms=tuple(expect(d, "between", list, f"layout.doorways[{i}]")),
                cells=tuple(tuple(c) for c in expect(d, "cells", list, f"layout.doorways[{i}]")),
            )
        )
    objects = [
        _object_from_dict(o, f"layout.objects[{i}]")
        for i, o in enumerate(expect(doc, "objects", list, "layout"))
    ]
    return HouseLayout(
        bounds=tuple(expect(doc, "bounds", list, "layout")),
        rooms=rooms,
        doorways=doorways,
        objects=objects,
        agent_start=Pose.from_dict(expect(doc, "agentStart", dict, "layout")),
        layout_id=expect(doc, "id", str, "layout"),
    )


def build_world(layout: HouseLayout) -> WorldState:
    """Fresh WorldState from a layout's initial object list.

    Objects are cloned shallowly: every field except `states` and `cell` is
    immutable and safely shared with the layout.
    """
    import dataclasses

    objects = {
        o.id: dataclasses.replace(o, states=dataclasses.replace(o.states))
        for o in layout.objects
    }
    return WorldState(layout, objects, AgentState(pose=layout.agent_start))


def world_to_dict(state: WorldState) -> dict:
    return {
        "schema": WORLD_SCHEMA,
        "layout": layout_to_dict(state.layout),
        "objects": [_object_to_dict(state.objects[oid]) for oid in sorted(state.objects)],
        "agent": state.agent.to_dict(),
        "accumulatedQuanta": state.accumulated_quanta,
    }


def world_from_dict(doc: dict) -> WorldState:
    layout = layout_from_dict(expect(doc, "layout", dict, "world"))
    objects = {}
    for i, od in enumerate(expect(doc, "objects", list, "world")):
        obj = _object_from_dict(od, f"world.objects[{i}]")
        objects[obj.id] = obj
    ad = expect(doc, "agent", dict, "world")
    agent = AgentState(
        pose=Pose.from_dict(expect(ad, "pose", dict, "world.agent")),
        held_object=ad.get("heldObject"),
        nav_steps=expect(ad, "navSteps", int, "world.agent"),
        manip_steps=expect(ad, "manipSteps", int, "world.agent"),
        total_actions=expect(ad, "totalActions", int, "world.agent"),
    )
    state = WorldState(layout, objects, agent)
    state.accumulated_quanta = expect(doc, "accumulatedQuanta", int, "world")
    return state
