from .types import (
    Action,
    ActionResult,
    AgentState,
    Doorway,
    ErrorCode,
    HouseLayout,
    ObjectInstance,
    ObjectStateSet,
    Observation,
    Room,
    VisibleRecord,
    WorldState,
    MANIPULATION_ACTIONS,
    MOVE_ACTIONS,
    NAVIGATION_ACTIONS,
    ROTATE_ACTIONS,
    TILT_ACTIONS,
)
from .actions import apply_action, step_cost
from .observe import UnknownObjectError, render_observation, visibility
from .validate import validate_world
from .snapshot import build_world, layout_from_dict, layout_to_dict, world_from_dict, world_to_dict

__all__ = [
    "Action",
    "ActionResult",
    "AgentState",
    "Doorway",
    "ErrorCode",
    "HouseLayout",
    "ObjectInstance",
    "ObjectStateSet",
    "Observation",
    "Room",
    "VisibleRecord",
    "WorldState",
    "MANIPULATION_ACTIONS",
    "MOVE_ACTIONS",
    "NAVIGATION_ACTIONS",
    "ROTATE_ACTIONS",
    "TILT_ACTIONS",
    "apply_action",
    "step_cost",
    "UnknownObjectError",
    "render_observation",
    "visibility",
    "validate_world",
    "build_world",
    "layout_from_dict",
    "layout_to_dict",
    "world_from_dict",
    "world_to_dict",
]
