"""Seeded procedural house generation.

Houses are grids of equal square rooms separated by one-cell walls with
doorway openings. Furniture hugs walls so room centers stay walkable, small
objects start inside receptacle slots, and the walkable graph is verified
connected before a layout is returned.
"""

from __future__ import annotations

import random

from ..grid import Pose
from ..world.types import Doorway, HouseLayout, ObjectInstance, ObjectStateSet, Room
from . import catalog

DOOR_WIDTH = 16  # cells (0.8 m)
DOOR_CLEAR = 6   # interior cells kept free in front of each doorway


class _Union:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def join(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _room_grid(count: int) -> tuple[int, int]:
    return {2: (1, 2), 3: (1, 3), 4: (2, 2)}[count]


def _pick_room_names(rng: random.Random, count: int) -> list[str]:
    names = ["kitchen", "living_room"]
    extras = ["bedroom", "study"]
    rng.shuffle(extras)
    names.extend(extras[: count - 2])
    rng.shuffle(names)
    return names


def generate_layout(seed: int) -> HouseLayout:
    """Seeded house; retries internally until furniture placement succeeds."""
    last = None
    for attempt in range(30):
        try:
            return _generate_layout_once(seed, attempt)
        except _PlacementFailure as exc:
            last = exc
    raise RuntimeError(f"layout generation failed for seed {seed}: {last}")


class _PlacementFailure(RuntimeError):
    pass


def _generate_layout_once(seed: int, attempt: int) -> HouseLayout:
    rng = random.Random(f"layout:{seed}:{attempt}")
    room_count = rng.choice((2, 3, 3, 4))
    side = rng.choice((56, 64, 72))  # interior cells per room edge
    rows, cols = _room_grid(room_count)
    names = _pick_room_names(rng, room_count)

    rooms: list[Room] = []
    for r in range(rows):
        for c in range(cols):
            x0 = c * (side + 1) + 1
            z0 = r * (side + 1) + 1
            rooms.append(Room(names[r * cols + c], x0, z0, x0 + side - 1, z0 + side - 1))
    bounds = (cols * (side + 1), rows * (side + 1))

    doorways = _doorways(rng, rooms, rows, cols, side)
    objects, counters = [], {}

    def new_id(category: str) -> str:
        counters[category] = counters.get(category, 0) + 1
        return f"{category}_{counters[category]}"

    occupied: set[tuple[int, int]] = set()
    clear_zones = _door_clear_cells(doorways)
    receptacles_by_room: dict[int, list[ObjectInstance]] = {}

    for idx, room in enumerate(rooms):
        spec = catalog.ROOM_FURNITURE[room.name]
        required = sorted(spec["required"], key=lambda c: -catalog.FURNITURE[c][0])
        optional = [c for c in spec["optional"] if rng.random() < 0.6]
        placed_here = []
        for category in required + optional:
            obj = _place_furniture(rng, new_id(category), category, room, occupied, clear_zones)
            if obj is None:
                if category in spec["required"]:
                    raise _PlacementFailure(f"could not place required {category} in {room.name}")
                continue
            objects.append(obj)
            if obj.is_surface:
                placed_here.append(obj)
        receptacles_by_room[idx] = placed_here

        for category in catalog.ROOM_MOUNTED[room.name]:
            base_cat, size, affordances = catalog.MOUNTED[category]
            base = next((o for o in placed_here if o.category == base_cat), None)
            if base is None:
                continue
            objects.append(_mounted_object(new_id(category), category, size, affordances, base, objects))

    _populate_smalls(rng, rooms, receptacles_by_room, objects, new_id)
    _randomize_initial_states(rng, objects)

    start_room = rooms[0]
    cx, cz = start_room.center
    agent_start = Pose(cx, cz, rng.choice((0, 90, 180, 270)), 0)

    layout = HouseLayout(bounds, rooms, doorways, objects, agent_start, layout_id=f"house-{seed}")
    return layout


def _doorways(rng, rooms, rows, cols, side) -> list[Doorway]:
    adjacencies = []
    for r in range(rows):
        for c in range(cols - 1):
            adjacencies.append((r * cols + c, r * cols + c + 1, "v"))
    for r in range(rows - 1):
        for c in range(cols):
            adjacencies.append((r * cols + c, (r + 1) * cols + c, "h"))
    rng.shuffle(adjacencies)
    uf = _Union(len(rooms))
    chosen = [adj for adj in adjacencies if uf.join(adj[0], adj[1])]
    chosen += [adj for adj in adjacencies if adj not in chosen and rng.random() < 0.3]

    doorways = []
    for a, b, orient in chosen:
        ra, rb = rooms[a], rooms[b]
        if orient == "v":
            wall_x = ra.x1 + 1
            lo = max(ra.z0, rb.z0) + 4
            hi = min(ra.z1, rb.z1) - 4 - DOOR_WIDTH
            z = rng.randint(lo, max(lo, hi))
            cells = tuple((wall_x, z + i) for i in range(DOOR_WIDTH))
        else:
            wall_z = ra.z1 + 1
            lo = max(ra.x0, rb.x0) + 4
            hi = min(ra.x1, rb.x1) - 4 - DOOR_WIDTH
            x = rng.randint(lo, max(lo, hi))
            cells = tuple((x + i, wall_z) for i in range(DOOR_WIDTH))
        doorways.append(Doorway(rooms=(a, b), cells=cells))
    return doorways


def _door_clear_cells(doorways) -> set[tuple[int, int]]:
    clear = set()
    for door in doorways:
        for gx, gz in door.cells:
            for dx in range(-4, 5):
                for dz in range(-DOOR_CLEAR, DOOR_CLEAR + 1):
                    clear.add((gx + dx, gz + dz))
    return clear


def _place_furniture(rng, oid, category, room, occupied, clear_zones) -> ObjectInstance | None:
    w, d, affordances = catalog.FURNITURE[category]
    for _ in range(60):
        wall = rng.randrange(4)
        if wall in (0, 2):  # north (+z) or south wall: width along x
            x0 = rng.randint(room.x0, room.x1 - w + 1)
            z0 = room.z1 - d + 1 if wall == 0 else room.z0
            rect = (x0, z0, x0 + w - 1, z0 + d - 1)
        else:  # east or west wall: width along z
            z0 = rng.randint(room.z0, room.z1 - w + 1)
            x0 = room.x1 - d + 1 if wall == 1 else room.x0
            rect = (x0, z0, x0 + d - 1, z0 + w - 1)
        cells = {(gx, gz) for gx in range(rect[0], rect[2] + 1) for gz in range(rect[1], rect[3] + 1)}
        grown = {(gx + dx, gz + dz) for gx, gz in cells for dx in (-2, -1, 0, 1, 2) for dz in (-2, -1, 0, 1, 2)}
        if grown & occupied or cells & clear_zones:
            continue
        occupied.update(cells)
        center = ((rect[0] + rect[2]) // 2, (rect[1] + rect[3]) // 2)
        return ObjectInstance(
            id=oid,
            category=category,
            cell=center,
            footprint=frozenset(cells),
            size=len(cells),
            affordances=frozenset(affordances),
            states=_initial_states(affordances),
        )
    return None


def _initial_states(affordances) -> ObjectStateSet:
    s = ObjectStateSet()
    if "openable" in affordances:
        s.open = False
    if "toggleable" in affordances:
        s.toggled_on = False
    return s


def _mounted_object(oid, category, size, affordances, base, objects) -> ObjectInstance:
    cell = _free_slot_static(base, objects)
    s = _initial_states(affordances)
    s.parent_receptacle = base.id
    return ObjectInstance(
        id=oid, category=category, cell=cell, footprint=frozenset(),
        size=size, affordances=frozenset(affordances), states=s,
    )


def _free_slot_static(receptacle, objects) -> tuple[int, int]:
    used = {o.cell for o in objects if o.states.parent_receptacle == receptacle.id}
    cells = sorted(receptacle.footprint)
    for cell in cells[::2] if len(cells) > 2 else cells:
        if cell not in used:
            return cell
    raise RuntimeError(f"{receptacle.id} overfull")


def _populate_smalls(rng, rooms, receptacles_by_room, objects, new_id):
    colored_done = 0
    for idx, room in enumerate(rooms):
        receptacles = receptacles_by_room[idx]
        if not receptacles:
            continue
        wanted = list(catalog.GUARANTEED[room.name])
        pool = catalog.ROOM_SMALLS[room.name]
        wanted += [rng.choice(pool) for _ in range(rng.randint(3, 6))]
        # Two same-category, different-color duplicates per house for
        # disambiguation-style goals.
        if colored_done < 2:
            dup = "mug" if room.name == "kitchen" else "book"
            if dup in pool or dup in wanted:
                wanted += [dup, dup]
                colored_done += 1
        used_colors: dict[str, list[str]] = {}
        for category in wanted:
            size, affordances, colorable = catalog.SMALLS[category]
            attrs = frozenset()
            if colorable:
                taken = used_colors.setdefault(category, [])
                options = [c for c in catalog.COLORS if c not in taken] or list(catalog.COLORS)
                color = rng.choice(options)
                taken.append(color)
                attrs = frozenset({color})
            rec = rng.choice(receptacles)
            try:
                cell = _free_slot_static(rec, objects)
            except RuntimeError:
                continue
            s = ObjectStateSet(parent_receptacle=rec.id)
            if "sliceable" in affordances:
                s.sliced = False
            if "cookable" in affordances:
                s.cooked = False
            if "fillable" in affordances:
                s.filled_with = None
            if "openable" in affordances:
                s.open = False
            if "toggleable" in affordances:
                s.toggled_on = False
            objects.append(
                ObjectInstance(
                    id=new_id(category), category=category, attributes=attrs, cell=cell,
                    footprint=frozenset(), size=size, affordances=frozenset(affordances), states=s,
                )
            )


def _randomize_initial_states(rng, objects):
    for obj in objects:
        if obj.has("openable") and obj.category != "microwave" and rng.random() < 0.25:
            obj.states.open = True
        if obj.category in ("tv", "desk_lamp", "floor_lamp") and rng.random() < 0.2:
            obj.states.toggled_on = True
