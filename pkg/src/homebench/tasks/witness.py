"""Ground-truth plan compilation for generated episodes.

The witness executor drives a private world copy with full knowledge of the
scene, recording every primitive action it applies. A finished witness is
the episode's satisfiability proof: replaying it through the simulator must
satisfy the whole checklist.
"""

from __future__ import annotations

from ..config import SimConfig
from ..grid import nearest_heading
from ..pathfind import Router, stand_candidates
from ..world.actions import apply_action
from ..world.types import Action, Cell, WorldState
from .resolve import evaluate_item

_SIM = SimConfig()


class WitnessError(RuntimeError):
    pass


def rotation_actions(current: int, target: int) -> list[Action]:
    delta = (target - current) % 360
    if delta <= 180:
        return [Action("RotateRight")] * (delta // 30)
    return [Action("RotateLeft")] * ((360 - delta) // 30)


class WitnessExecutor:
    """Applies and records primitive actions against a scratch world."""

    def __init__(self, world: WorldState, sim: SimConfig = _SIM):
        self.world = world
        self.sim = sim
        self.actions: list[Action] = []
        self.router = Router(world.walkable_cells(), world.layout)

    def do(self, action: Action) -> None:
        _, result = apply_action(self.world, action, self.sim)
        if not result.ok:
            raise WitnessError(f"{action.name}({action.target or ''}) failed: {result.error}: {result.message}")
        self.actions.append(action)

    # -- movement ----------------------------------------------------------

    def goto(self, target: Cell) -> None:
        """Walk within reach of `target` and face it."""
        agent = self.world.agent.pose
        reach_cells = (self.sim.reach_distance / self.sim.cell_size) * 0.8
        candidates = stand_candidates(self.world.walkable_cells(), self.world.layout.room_of, target, reach_cells)
        if not candidates:
            raise WitnessError(f"no stand cell near {target}")
        if agent.cell in candidates:
            path = [agent.cell]
        else:
            path = None
            by_agent = sorted(candidates, key=lambda c: (abs(c[0] - agent.gx) + abs(c[1] - agent.gz), c))
            for cand in by_agent[:8]:
                path = self.router.path(agent.cell, cand)
                if path:
                    break
            if path is None:
                raise WitnessError(f"unreachable: {target}")
        self._walk(path)
        self._face(target)

    def _walk(self, path: list[Cell]) -> None:
        for nxt in path[1:]:
            pose = self.world.agent.pose
            dx, dz = nxt[0] - pose.gx, nxt[1] - pose.gz
            heading = nearest_heading(dx, dz)
            for rot in rotation_actions(pose.heading, heading):
                self.do(rot)
            self.do(Action("MoveAhead"))

    def _face(self, target: Cell) -> None:
        pose = self.world.agent.pose
        dx, dz = target[0] - pose.gx, target[1] - pose.gz
        if dx == 0 and dz == 0:
            return
        for rot in rotation_actions(pose.heading, nearest_heading(dx, dz)):
            self.do(rot)

    # -- object handling ----------------------------------------------------

    def open_if_closed(self, rid: str) -> None:
        if self.world.objects[rid].states.open is False:
            self.goto(self.world.effective_cell(rid))
            self.do(Action("Open", rid))

    def fetch(self, oid: str) -> None:
        if self.world.agent.held_object == oid:
            return
        if self.world.agent.held_object is not None:
            self.stash_held()
        for ancestor in reversed(self.world.ancestors(oid)):
            self.open_if_closed(ancestor)
        self.goto(self.world.effective_cell(oid))
        self.do(Action("Pick", oid))

    def stash_held(self) -> None:
        """Park the held object on the nearest safe surface."""
        held = self.world.agent.held_object
        if held is None:
            return
        from ..world.types import COOK_APPLIANCES, FILL_APPLIANCES

        agent = self.world.agent.pose.cell
        options = []
        for oid in sorted(self.world.objects):
            obj = self.world.objects[oid]
            if oid == held or not obj.has("flat-surface"):
                continue
            if obj.category in COOK_APPLIANCES + FILL_APPLIANCES:
                continue
            if self.world.free_slot(oid) is None:
                continue
            cell = obj.cell
            options.append((abs(cell[0] - agent[0]) + abs(cell[1] - agent[1]), oid))
        if not options:
            raise WitnessError("nowhere to stash held object")
        _, rid = min(options)
        self.goto(self.world.effective_cell(rid))
        self.do(Action("Place", rid))

    def put(self, oid: str, rid: str) -> None:
        self.fetch(oid)
        self.open_if_closed(rid)
        self.goto(self.world.effective_cell(rid))
        self.do(Action("Place", rid))

    def toggle(self, oid: str, on: bool) -> None:
        if self.world.objects[oid].states.toggled_on == on:
            return
        self.goto(self.world.effective_cell(oid))
        self.do(Action("ToggleOn" if on else "ToggleOff", oid))


def compile_witness(world: WorldState, plan: list[tuple], sim: SimConfig = _SIM) -> list[Action]:
    """Execute `plan` entries (item, hints) in order; return the action list.

    Hints name the concrete object ids the item's selector was built around.
    """
    ex = WitnessExecutor(world, sim)
    for item, hints in plan:
        if evaluate_item(world, item):
            continue
        kind = item.condition.kind
        if kind == "in_receptacle":
            ex.put(hints["object"], hints["receptacle"])
        elif kind == "in_room":
            ex.put(hints["object"], hints["receptacle"])
        elif kind == "open":
            rid = hints["object"]
            ex.goto(world.effective_cell(rid))
            ex.do(Action("Open" if item.condition.target else "Close", rid))
        elif kind == "toggled_on":
            ex.toggle(hints["object"], bool(item.condition.target))
        elif kind == "sliced":
            ex.fetch(hints["knife"])
            target = hints["object"]
            for ancestor in reversed(world.ancestors(target)):
                ex.open_if_closed(ancestor)
            ex.goto(world.effective_cell(target))
            ex.do(Action("Slice", target))
            ex.stash_held()
        elif kind == "cooked":
            ex.put(hints["object"], hints["appliance"])
            ex.toggle(hints["appliance"], True)
        elif kind == "filled_with":
            ex.put(hints["object"], hints["appliance"])
            ex.toggle(hints["appliance"], True)
        else:
            raise WitnessError(f"unhandled condition {kind}")
        if not evaluate_item(world, item):
            raise WitnessError(f"plan step left item unsatisfied: {item.to_dict()}")
    ex.do(Action("Stop"))
    return ex.actions
