"""Planning data structures: goals, the goal graph, refinements, subgoals.

The goal graph is a DAG whose edges point prerequisite -> dependent.
Refinement binds a goal's abstract object references to concrete memory
entries, world ids with location hints, or residual searches; grounding
then lowers the refined goal to executor subgoals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..tasks.types import ChecklistItem, ObjectSelector
from ..world.types import Cell


@dataclass
class Goal:
    goal_id: str
    description: str
    target_selectors: list[ObjectSelector]
    desired_conditions: list[ChecklistItem]
    room_hint: tuple[str, Cell] | None = None  # (room name, representative cell)
    hints: dict = field(default_factory=dict)  # concrete ids from privileged reasoners

    def __post_init__(self):
        if not self.description:
            raise ValueError("goal description must be non-empty")


class GoalDag:
    def __init__(self, nodes: dict[str, Goal] | None = None, edges: set[tuple[str, str]] | None = None):
        self.nodes: dict[str, Goal] = nodes or {}
        self.edges: set[tuple[str, str]] = edges or set()
        self.completed: set[str] = set()
        self.failed: set[str] = set()

    def add(self, goal: Goal) -> None:
        self.nodes[goal.goal_id] = goal

    def add_edge(self, prerequisite: str, dependent: str) -> None:
        self.edges.add((prerequisite, dependent))

    def validate(self) -> list[str]:
        problems = []
        for a, b in sorted(self.edges):
            for gid in (a, b):
                if gid not in self.nodes:
                    problems.append(f"edge references unknown goal {gid!r}")
        if not (self.completed <= set(self.nodes)):
            problems.append("completed set references unknown goals")
        if self._has_cycle():
            problems.append("dependency cycle")
        return problems

    def _has_cycle(self) -> bool:
        incoming = {gid: 0 for gid in self.nodes}
        for a, b in self.edges:
            if b in incoming:
                incoming[b] += 1
        ready = [gid for gid, deg in incoming.items() if deg == 0]
        seen = 0
        while ready:
            gid = ready.pop()
            seen += 1
            for a, b in self.edges:
                if a == gid and b in incoming:
                    incoming[b] -= 1
                    if incoming[b] == 0:
                        ready.append(b)
        return seen != len(self.nodes)

    def resolved(self) -> set[str]:
        """Goals that no longer block dependents (done or skipped-as-failed)."""
        return self.completed | self.failed

    def ready_goals(self) -> list[str]:
        resolved = self.resolved()
        out = []
        for gid in sorted(self.nodes):
            if gid in resolved:
                continue
            if all(a in resolved for a, b in self.edges if b == gid):
                out.append(gid)
        return out

    def remaining(self) -> int:
        return len(self.nodes) - len(self.resolved())


@dataclass(frozen=True)
class Binding:
    kind: str                     # "memory" | "world" | "search"
    mem_id: str | None = None
    world_id: str | None = None
    cell: Cell | None = None
    container: str | None = None  # enclosing receptacle, when known


@dataclass
class RefinedGoal:
    goal_id: str
    refined_text: str
    bound_objects: dict[str, Binding]
    residual_searches: list[ObjectSelector]
    pre_steps: list["SubGoal"] = field(default_factory=list)

    def validate(self) -> list[str]:
        problems = []
        if not self.refined_text:
            problems.append("refined text empty")
        for slot, binding in self.bound_objects.items():
            if binding.kind == "memory" and binding.mem_id is None:
                problems.append(f"{slot}: memory binding without mem_id")
            if binding.kind == "world" and binding.world_id is None:
                problems.append(f"{slot}: world binding without world_id")
            if binding.kind == "search":
                problems.append(f"{slot}: unresolved binding must move to residual searches")
        return problems


SUBGOAL_PARAMS = {
    "NavigateTo": ({"cell"}, {"mem_id"}),
    "Search": ({"selector"}, {"hints", "room"}),
    "PickUp": ({"object"}, {"cell", "container"}),
    "PlaceIn": ({"object", "receptacle"}, {"cell"}),
    "Open": ({"object"}, {"cell"}),
    "Close": ({"object"}, {"cell"}),
    "Toggle": ({"object", "on"}, {"cell"}),
    "Slice": ({"object"}, {"cell", "container"}),
    "FillFrom": ({"object", "sink"}, {"cell"}),
    "CookOn": ({"object", "appliance"}, {"cell"}),
}


@dataclass(frozen=True)
class SubGoal:
    kind: str
    params: dict

    def __post_init__(self):
        if self.kind not in SUBGOAL_PARAMS:
            raise ValueError(f"unknown subgoal kind {self.kind!r}")
        required, optional = SUBGOAL_PARAMS[self.kind]
        keys = set(self.params)
        if self.kind == "NavigateTo":
            if not (keys & {"cell", "mem_id"}):
                raise ValueError("NavigateTo needs cell or mem_id")
        elif not required <= keys:
            raise ValueError(f"{self.kind} missing params {required - keys}")
        unknown = keys - required - optional - {"cell", "mem_id"}
        if unknown:
            raise ValueError(f"{self.kind} has unknown params {unknown}")

    def describe(self) -> str:
        core = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()) if k != "selector")
        return f"{self.kind}({core})"


@dataclass(frozen=True)
class CriticDirective:
    kind: str            # "pass" | "refine" | "replan"
    text: str = ""

    def __post_init__(self):
        if self.kind not in ("pass", "refine", "replan"):
            raise ValueError(f"unknown directive {self.kind!r}")


PASS = CriticDirective("pass")
