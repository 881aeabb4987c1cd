import hypothesis
import pytest

from homebench.grid import Pose
from homebench.world.types import (
    AgentState,
    Doorway,
    HouseLayout,
    ObjectInstance,
    ObjectStateSet,
    Room,
    WorldState,
)

hypothesis.settings.register_profile("ci", max_examples=40, deadline=None)
hypothesis.settings.load_profile("ci")


def rect_cells(x0, z0, x1, z1):
    return frozenset((gx, gz) for gx in range(x0, x1 + 1) for gz in range(z0, z1 + 1))


def make_object(
    oid,
    category,
    cell=None,
    rect=None,
    attributes=(),
    affordances=(),
    parent=None,
    size=1,
    **states,
):
    s = ObjectStateSet(parent_receptacle=parent)
    if "openable" in affordances:
        s.open = states.get("open", False)
    if "toggleable" in affordances:
        s.toggled_on = states.get("toggled_on", False)
    if "sliceable" in affordances:
        s.sliced = states.get("sliced", False)
    if "cookable" in affordances:
        s.cooked = states.get("cooked", False)
    if "fillable" in affordances:
        s.filled_with = states.get("filled_with")
    footprint = rect_cells(*rect) if rect else frozenset()
    if cell is None and rect:
        cell = ((rect[0] + rect[2]) // 2, (rect[1] + rect[3]) // 2)
    return ObjectInstance(
        id=oid,
        category=category,
        attributes=frozenset(attributes),
        cell=cell,
        footprint=footprint,
        size=len(footprint) or size,
        affordances=frozenset(affordances),
        states=s,
    )


def single_room_layout(objects, side=50, agent=(10, 10, 0)):
    room = Room("kitchen", 1, 1, side, side)
    return HouseLayout(
        bounds=(side + 1, side + 1),
        rooms=[room],
        doorways=[],
        objects=objects,
        agent_start=Pose(agent[0], agent[1], agent[2], 0),
        layout_id="test-room",
    )


def two_room_layout(objects, side=40, agent=(10, 10, 0)):
    rooms = [Room("kitchen", 1, 1, side, side), Room("bedroom", side + 2, 1, 2 * side + 1, side)]
    door_cells = tuple((side + 1, z) for z in range(side // 2 - 4, side // 2 + 4))
    return HouseLayout(
        bounds=(2 * side + 2, side + 1),
        rooms=rooms,
        doorways=[Doorway(rooms=(0, 1), cells=door_cells)],
        objects=objects,
        agent_start=Pose(agent[0], agent[1], agent[2], 0),
        layout_id="test-two-rooms",
    )


def build(layout):
    from homebench.world.snapshot import build_world

    return build_world(layout)


@pytest.fixture
def kitchen_world():
    """One room: a countertop holding a red mug and a knife, a closed drawer
    holding a fork, a stove, a sink, and a lamp."""
    objects = [
        make_object("counter_1", "countertop", rect=(20, 44, 39, 49), affordances=("receptacle", "flat-surface")),
        make_object("mug_1", "mug", cell=(22, 46), attributes=("red",), affordances=("pickupable", "fillable"), parent="counter_1"),
        make_object("knife_1", "knife", cell=(26, 46), affordances=("pickupable",), parent="counter_1"),
        make_object("bread_1", "bread", cell=(30, 46), affordances=("pickupable", "sliceable"), parent="counter_1", size=2),
        make_object("drawer_1", "drawer", rect=(2, 20, 9, 27), affordances=("receptacle", "openable")),
        make_object("fork_1", "fork", cell=(4, 22), affordances=("pickupable",), parent="drawer_1"),
        make_object("stove_1", "stove", rect=(44, 20, 49, 29), affordances=("receptacle", "toggleable")),
        make_object("sink_1", "sink", rect=(44, 34, 49, 41), affordances=("receptacle", "toggleable")),
        make_object("potato_1", "potato", cell=(34, 46), affordances=("pickupable", "sliceable", "cookable"), parent="counter_1"),
        make_object("lamp_1", "floor_lamp", rect=(2, 46, 5, 49), affordances=("toggleable",)),
    ]
    return build(single_room_layout(objects))


@pytest.fixture
def generated_world():
    from homebench.tasks.layoutgen import generate_layout

    return build(generate_layout(3))
