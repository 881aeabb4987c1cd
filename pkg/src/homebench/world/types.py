"""Scene representation: rooms, objects, agent, actions.

The world is a 0.05 m lattice. Furniture is solid and static; small objects
always sit in or on a receptacle (at a distinct "slot" cell inside its
footprint) or in the agent's hand. Walkability therefore never changes
during an episode, which keeps navigation planning exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..grid import Pose, cell_distance

Cell = tuple[int, int]


class ErrorCode(str, Enum):
    COLLISION = "Collision"
    NOT_VISIBLE = "NotVisible"
    NOT_REACHABLE = "NotReachable"
    HAND_FULL = "HandFull"
    HAND_EMPTY = "HandEmpty"
    NO_KNIFE = "NoKnife"
    CLOSED_RECEPTACLE = "ClosedReceptacle"
    INVALID_TARGET = "InvalidTarget"
    EPISODE_CAP_EXCEEDED = "EpisodeCapExceeded"


MOVE_ACTIONS = ("MoveAhead", "MoveBack", "MoveLeft", "MoveRight")
ROTATE_ACTIONS = ("RotateRight", "RotateLeft")
TILT_ACTIONS = ("LookUp", "LookDown")
NAVIGATION_ACTIONS = MOVE_ACTIONS + ROTATE_ACTIONS + TILT_ACTIONS
MANIPULATION_ACTIONS = ("Pick", "Place", "Open", "Close", "ToggleOn", "ToggleOff", "Slice")
ALL_ACTIONS = NAVIGATION_ACTIONS + MANIPULATION_ACTIONS + ("Stop",)

# Effective movement direction relative to the agent's heading.
MOVE_OFFSETS = {"MoveAhead": 0, "MoveRight": 90, "MoveBack": 180, "MoveLeft": 270}

AFFORDANCES = (
    "openable",
    "toggleable",
    "sliceable",
    "cookable",
    "fillable",
    "pickupable",
    "receptacle",
    "flat-surface",
)

# Receptacle categories that trigger derived state changes on their contents.
COOK_APPLIANCES = ("stove", "microwave")
FILL_APPLIANCES = ("sink",)
SLICER_CATEGORIES = ("knife",)


@dataclass(frozen=True)
class Action:
    name: str
    target: str | None = None

    def __post_init__(self):
        if self.name not in ALL_ACTIONS:
            raise ValueError(f"unknown action {self.name!r}")
        if self.name in MANIPULATION_ACTIONS and not self.target:
            raise ValueError(f"{self.name} requires a target object id")
        if self.name not in MANIPULATION_ACTIONS and self.target is not None:
            raise ValueError(f"{self.name} takes no target")

    def to_wire(self) -> list:
        return [self.name] if self.target is None else [self.name, self.target]

    @classmethod
    def from_wire(cls, wire: list) -> "Action":
        if not isinstance(wire, list) or not 1 <= len(wire) <= 2:
            raise ValueError(f"malformed action: {wire!r}")
        return cls(wire[0], wire[1] if len(wire) == 2 else None)


STOP = Action("Stop")


@dataclass(frozen=True)
class ActionResult:
    ok: bool
    error: ErrorCode | None = None
    message: str = ""

    def __post_init__(self):
        assert self.ok == (self.error is None)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "error": self.error.value if self.error else None, "message": self.message}


def success() -> ActionResult:
    return ActionResult(True)


def failure(code: ErrorCode, message: str = "") -> ActionResult:
    return ActionResult(False, code, message)


@dataclass
class ObjectStateSet:
    """The six monitored state families. A field is None when the object
    lacks the matching affordance."""

    open: bool | None = None
    toggled_on: bool | None = None
    sliced: bool | None = None
    cooked: bool | None = None
    filled_with: str | None = None
    parent_receptacle: str | None = None

    def to_dict(self) -> dict:
        return {
            "open": self.open,
            "toggledOn": self.toggled_on,
            "sliced": self.sliced,
            "cooked": self.cooked,
            "filledWith": self.filled_with,
            "parentReceptacle": self.parent_receptacle,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ObjectStateSet":
        return cls(
            open=d.get("open"),
            toggled_on=d.get("toggledOn"),
            sliced=d.get("sliced"),
            cooked=d.get("cooked"),
            filled_with=d.get("filledWith"),
            parent_receptacle=d.get("parentReceptacle"),
        )


@dataclass
class ObjectInstance:
    id: str
    category: str
    attributes: frozenset[str] = frozenset()
    cell: Cell | None = None             # None while held by the agent
    footprint: frozenset[Cell] = frozenset()  # solid cells; empty for small objects
    size: int = 1                        # intrinsic apparent-size proxy, in cells
    affordances: frozenset[str] = frozenset()
    states: ObjectStateSet = field(default_factory=ObjectStateSet)

    def has(self, affordance: str) -> bool:
        return affordance in self.affordances

    @property
    def is_surface(self) -> bool:
        return self.has("receptacle") or self.has("flat-surface")


@dataclass
class AgentState:
    pose: Pose
    held_object: str | None = None
    nav_steps: int = 0
    manip_steps: int = 0
    total_actions: int = 0

    def to_dict(self) -> dict:
        return {
            "pose": self.pose.to_dict(),
            "heldObject": self.held_object,
            "navSteps": self.nav_steps,
            "manipSteps": self.manip_steps,
            "totalActions": self.total_actions,
        }


@dataclass(frozen=True)
class Room:
    name: str
    x0: int
    z0: int
    x1: int  # inclusive interior bounds, lattice cells
    z1: int

    def contains(self, cell: Cell) -> bool:
        return self.x0 <= cell[0] <= self.x1 and self.z0 <= cell[1] <= self.z1

    @property
    def center(self) -> Cell:
        return ((self.x0 + self.x1) // 2, (self.z0 + self.z1) // 2)


@dataclass(frozen=True)
class Doorway:
    rooms: tuple[int, int]        # indices of the two rooms it connects
    cells: tuple[Cell, ...]       # walkable cells carved out of the wall


class HouseLayout:
    """Static geometry: room rectangles, walls, doorways, initial objects.

    Walls are every in-bounds cell not inside a room interior and not part of
    a doorway. Doorway cells are assigned to the lower-indexed room they
    connect so that every walkable cell has exactly one room.
    """

    def __init__(
        self,
        bounds: Cell,
        rooms: list[Room],
        doorways: list[Doorway],
        objects: list[ObjectInstance],
        agent_start: Pose,
        layout_id: str = "layout",
    ):
        self.bounds = bounds
        self.rooms = rooms
        self.doorways = doorways
        self.objects = objects
        self.agent_start = agent_start
        self.layout_id = layout_id
        self._room_index: dict[Cell, int] = {}
        for i, room in enumerate(rooms):
            for gx in range(room.x0, room.x1 + 1):
                for gz in range(room.z0, room.z1 + 1):
                    self._room_index[(gx, gz)] = i
        for door in doorways:
            owner = min(door.rooms)
            for cell in door.cells:
                self._room_index[cell] = owner

    def room_of(self, cell: Cell) -> int | None:
        return self._room_index.get(cell)

    def room_name(self, cell: Cell) -> str | None:
        idx = self.room_of(cell)
        return self.rooms[idx].name if idx is not None else None

    def room_by_name(self, name: str) -> Room | None:
        for room in self.rooms:
            if room.name == name:
                return room
        return None

    def is_wall(self, cell: Cell) -> bool:
        gx, gz = cell
        if not (0 <= gx <= self.bounds[0] and 0 <= gz <= self.bounds[1]):
            return True
        return cell not in self._room_index


class WorldState:
    """Full mutable scene. Mutation happens only through apply_action."""

    def __init__(self, layout: HouseLayout, objects: dict[str, ObjectInstance], agent: AgentState):
        self.layout = layout
        self.objects = objects
        self.agent = agent
        self.accumulated_quanta = 0  # movement quanta since the last nav-step tick

        # Static walkable grid: furniture never moves.
        self._blocked: set[Cell] = set()
        for obj in objects.values():
            self._blocked.update(obj.footprint)

        self.category_index: dict[str, list[str]] = {}
        for oid in sorted(objects):
            self.category_index.setdefault(objects[oid].category, []).append(oid)

        # Receptacle slot bookkeeping: contents occupy distinct cells.
        self.contents: dict[str, list[str]] = {oid: [] for oid in objects}
        for oid in sorted(objects):
            parent = objects[oid].states.parent_receptacle
            if parent is not None:
                self.contents[parent].append(oid)

        self._cookable_ids = [oid for oid in sorted(objects) if objects[oid].has("cookable")]
        self._fillable_ids = [oid for oid in sorted(objects) if objects[oid].has("fillable")]

    # -- geometry ---------------------------------------------------------

    def walkable(self, cell: Cell) -> bool:
        return not self.layout.is_wall(cell) and cell not in self._blocked

    def walkable_cells(self) -> frozenset[Cell]:
        """All walkable cells; cached, valid for the whole episode because
        furniture never moves."""
        if not hasattr(self, "_walkable_cache"):
            self._walkable_cache = frozenset(
                cell for cell in self.layout._room_index if cell not in self._blocked
            )
        return self._walkable_cache

    def blocked_cells(self) -> frozenset[Cell]:
        return frozenset(self._blocked)

    def effective_cell(self, oid: str) -> Cell:
        """Where an object physically is: its own cell, or the agent's when held."""
        obj = self.objects[oid]
        if obj.cell is None:
            return self.agent.pose.cell
        return obj.cell

    def slot_cells(self, receptacle_id: str) -> list[Cell]:
        """Deterministic candidate cells for contents of a receptacle."""
        rec = self.objects[receptacle_id]
        cells = sorted(rec.footprint) if rec.footprint else [rec.cell]
        return cells[::2] if len(cells) > 2 else cells

    def free_slot(self, receptacle_id: str) -> Cell | None:
        used = {self.objects[cid].cell for cid in self.contents[receptacle_id]}
        for cell in self.slot_cells(receptacle_id):
            if cell not in used:
                return cell
        return None

    def distance_to(self, oid: str) -> float:
        return cell_distance(self.agent.pose.cell, self.effective_cell(oid))

    def ancestors(self, oid: str) -> list[str]:
        """Chain of containing receptacles, innermost first. Dangling ids
        terminate the chain; validate_world reports them separately."""
        chain = []
        cur = self.objects[oid].states.parent_receptacle
        while cur is not None and cur in self.objects and cur not in chain:
            chain.append(cur)
            cur = self.objects[cur].states.parent_receptacle
        return chain

    def inside_closed(self, oid: str) -> bool:
        return any(self.objects[a].states.open is False for a in self.ancestors(oid))


@dataclass(frozen=True)
class VisibleRecord:
    id: str
    category: str
    attributes: tuple[str, ...]   # intrinsic attributes plus observable state words
    distance: float
    mask_area: float
    cell: Cell
    containing_receptacle: str | None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "category": self.category,
            "attributes": list(self.attributes),
            "distance": round(self.distance, 4),
            "maskArea": round(self.mask_area, 4),
            "cell": list(self.cell),
            "containingReceptacle": self.containing_receptacle,
        }


class Observation:
    """Agent pose, visible object records, and an occupancy patch around the
    agent. The patch is computed lazily: it is only materialized when the
    observation crosses a serialization boundary."""

    def __init__(self, agent_pose: Pose, visible: tuple[VisibleRecord, ...], occupancy_fn):
        self.agent_pose = agent_pose
        self.visible = visible
        self._occupancy_fn = occupancy_fn
        self._occupancy: dict | None = None

    @property
    def local_occupancy(self) -> dict:
        if self._occupancy is None:
            self._occupancy = self._occupancy_fn()
        return self._occupancy

    def to_dict(self) -> dict:
        return {
            "pose": self.agent_pose.to_dict(),
            "visible": [v.to_dict() for v in self.visible],
            "localOccupancy": self.local_occupancy,
        }
