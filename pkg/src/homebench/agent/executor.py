"""Skill library and subgoal execution with supervised self-recovery.

Every primitive outcome passes through the critic. Local corrections
(reorient, step closer, stow the held object, open the container, put the
target down on a surface, fetch the knife) are applied in place under a
bounded budget; when the critic escalates, the subgoal aborts with a replan
request and control returns to the planner.
"""

from __future__ import annotations

import logging
import math

from ..config import Config
from ..grid import cell_distance, nearest_heading
from ..pathfind import stand_candidates
from ..tasks.types import ObjectSelector
from ..world.types import Action, Cell
from .goals import SubGoal
from .planner import FLAT_SURFACES, locate_selector, view_matches

logger = logging.getLogger(__name__)


class Outcome:
    def __init__(self, ok: bool, error: str | None = None, attempts: int = 0, replan: bool = False, detail: str = ""):
        self.ok = ok
        self.error = error
        self.attempts = attempts
        self.replan = replan
        self.detail = detail

    def __repr__(self):
        return f"Outcome(ok={self.ok}, error={self.error}, attempts={self.attempts}, replan={self.replan})"


class SubgoalFailed(RuntimeError):
    pass


def _rotation_actions(current: int, target: int) -> list[Action]:
    delta = (target - current) % 360
    if delta <= 180:
        return [Action("RotateRight")] * (delta // 30)
    return [Action("RotateLeft")] * ((360 - delta) // 30)


class Executor:
    def __init__(self, session, spatial, episodic, critic, reasoner, config: Config):
        self.session = session
        self.spatial = spatial
        self.episodic = episodic
        self.critic = critic
        self.reasoner = reasoner
        self.config = config
        self.walkable, self.layout = session.floor_plan()
        self.router = session.router()
        self.last_obs = None
        self._observe_fresh(session.observe())

    # -- primitive layer -----------------------------------------------------

    def _observe_fresh(self, obs) -> None:
        self.last_obs = obs
        self.spatial.observe_update(obs, self.session.world.agent.total_actions)
        self.episodic.record_status(self.session.world.agent.held_object, obs.agent_pose)

    def _act(self, action: Action, key: str, kind: str, primary: bool):
        obs, result, done = self.session.step(action)
        if obs is not None:
            self._observe_fresh(obs)
        directive = self.critic.review(
            {
                "subgoal_key": key,
                "subgoal_kind": kind,
                "error": None if result.ok else result.error.value,
                "detail": result.message,
                "primary": primary,
                "action": action.name,
                "reasoner": self.reasoner,
            }
        )
        if directive.kind != "pass":
            self.session.annotate(directive.kind, directive.text)
        return result, directive

    def _pose(self):
        return self.session.world.agent.pose

    def _held(self):
        return self.session.world.agent.held_object

    def _visible_record(self, world_id: str):
        for record in self.last_obs.visible:
            if record.id == world_id:
                return record
        return None

    # -- navigation ------------------------------------------------------------

    def _target_cell(self, params: dict) -> Cell | None:
        if params.get("cell") is not None:
            return tuple(params["cell"])
        mem_id = params.get("mem_id")
        if mem_id and mem_id in self.spatial.objects:
            return self.spatial.objects[mem_id].centroid
        return None

    def navigate_to(self, target: Cell, key: str, kind: str, reach_fraction: float = 0.8, exclude: set | None = None) -> Outcome:
        """Walk within reach of `target` and face it. The grid is static and
        known, so path failures indicate an unreachable target."""
        sim = self.config.sim
        reach_cells = (sim.reach_distance / sim.cell_size) * reach_fraction
        pose = self._pose()
        if target == pose.cell:
            return Outcome(True)
        candidates = stand_candidates(self.walkable, self.layout.room_of, target, reach_cells)
        if exclude:
            candidates = [c for c in candidates if c not in exclude]
        if self.walkable and target in self.walkable:
            candidates = [target] + candidates
        if not candidates:
            return Outcome(False, "NotReachable", detail=f"no stand cell near {target}")
        if pose.cell in candidates:
            return self._face(target, key, kind)
        path = None
        ranked = sorted(candidates, key=lambda c: (abs(c[0] - pose.gx) + abs(c[1] - pose.gz), c))
        for cand in ranked[:8]:
            path = self.router.path(pose.cell, cand)
            if path:
                break
        if not path:
            return Outcome(False, "NotReachable", detail=f"unreachable: {target}")
        for nxt in path[1:]:
            pose = self._pose()
            heading = nearest_heading(nxt[0] - pose.gx, nxt[1] - pose.gz)
            for rot in _rotation_actions(pose.heading, heading):
                result, directive = self._act(rot, key, kind, primary=True)
                if directive.kind == "replan":
                    return Outcome(False, result.error.value if result.error else None, replan=True)
            result, directive = self._act(Action("MoveAhead"), key, kind, primary=True)
            if self.session.done:
                return Outcome(result.ok, None if result.ok else result.error.value)
            if not result.ok:
                if directive.kind == "replan":
                    return Outcome(False, result.error.value, replan=True)
                # Blocked cell on a supposedly known grid: re-route once from here.
                retry = self.router.path(self._pose().cell, path[-1])
                if not retry or retry == path:
                    return Outcome(False, result.error.value, detail="path blocked")
                return self.navigate_to(target, key, kind, reach_fraction, exclude)
        return self._face(target, key, kind)

    def _face(self, target: Cell, key: str, kind: str) -> Outcome:
        pose = self._pose()
        dx, dz = target[0] - pose.gx, target[1] - pose.gz
        if dx == 0 and dz == 0:
            return Outcome(True)
        for rot in _rotation_actions(pose.heading, nearest_heading(dx, dz)):
            result, directive = self._act(rot, key, kind, primary=True)
            if directive.kind == "replan":
                return Outcome(False, result.error.value if result.error else None, replan=True)
        return Outcome(True)

    # -- perception gates ---------------------------------------------------------

    def _approach(self, world_id: str, fallback_cell: Cell | None, key: str, kind: str) -> Outcome:
        """Make sure `world_id` is visible and in reach, navigating if needed."""
        record = self._visible_record(world_id)
        sim = self.config.sim
        if record is not None and record.distance <= sim.reach_distance * 0.95:
            return Outcome(True)
        cell = None
        entries = self.spatial.entries_for_world_id(world_id)
        if entries:
            cell = entries[0].centroid
        if cell is None:
            cell = fallback_cell
        if cell is None:
            return Outcome(False, "NotVisible", detail=f"no known location for {world_id}")
        return self.navigate_to(cell, key, kind)

    def _observed_state(self, world_id: str, word: str) -> bool | None:
        """True/False when the word or its antonym is in the live view."""
        record = self._visible_record(world_id)
        if record is None:
            return None
        pairs = {"open": "closed", "on": "off"}
        if word in record.attributes:
            return True
        if pairs.get(word) in record.attributes:
            return False
        return None

    # -- correction hints ------------------------------------------------------------

    def _apply_hint(self, hint: str, action_name: str, target: str | None, target_cell: Cell | None, key: str, kind: str) -> None:
        if hint == "rotate-toward-target" and target_cell is not None:
            self._face(target_cell, key, kind)
        elif hint in ("step-closer", "reposition") and target_cell is not None:
            exclude = {self._pose().cell} if hint == "reposition" else None
            self.navigate_to(target_cell, key, kind, reach_fraction=0.5, exclude=exclude)
        elif hint == "stow-held-object":
            self.place_on_surface(key, kind)
        elif hint == "place-target-on-surface" and target is not None and self._held() == target:
            self.place_on_surface(key, kind)
        elif hint == "open-container-first" and target is not None:
            self._open_container_of(target, key, kind, target_cell)
        elif hint == "fetch-knife":
            self._fetch_category("knife", key, kind)
        elif hint == "acquire-target" and target is not None:
            self._approach(target, target_cell, key, kind)
            self._act(Action("Pick", target), key, kind, primary=False)
        # replan-path and widen-search are handled inside their own skills.

    def place_on_surface(self, key: str, kind: str) -> bool:
        """Put the held object down on the nearest open flat surface."""
        held = self._held()
        if held is None:
            return True
        here = self._pose().cell
        options = []
        for entry in self.spatial.objects.values():
            view = entry.views[-1]
            if view.category in FLAT_SURFACES and view.category not in ("stove", "sink"):
                options.append((cell_distance(here, entry.centroid), entry.centroid, view.world_id))
        options.sort()
        for _, cell, rid in options[:4]:
            nav = self.navigate_to(cell, key, kind)
            if not nav.ok:
                continue
            result, _ = self._act(Action("Place", rid), key, kind, primary=False)
            if result.ok:
                return True
        return False

    def _nearest_closed(self, anchor: Cell) -> str | None:
        closed = [r for r in self.last_obs.visible if "closed" in r.attributes]
        if not closed:
            return None
        return min(closed, key=lambda r: (cell_distance(anchor, r.cell), r.id)).id

    def _open_container_of(
        self, world_id: str, key: str, kind: str, expected_cell: Cell | None = None, known_container: str | None = None
    ) -> None:
        """Open whatever closed receptacle most plausibly hides `world_id`:
        the binding's container when known, else its last remembered
        container, else the closed receptacle nearest to the cell the object
        is expected at. The container may sit just outside the facing cone,
        so scan in place before falling back to proximity guessing."""
        anchor = expected_cell or self._pose().cell
        container = None
        if known_container is not None and self._observed_state(known_container, "open") is not True:
            container = known_container
        if container is None:
            entries = self.spatial.entries_for_world_id(world_id)
            if entries and entries[0].views[-1].containing_receptacle:
                cand = entries[0].views[-1].containing_receptacle
                if self._observed_state(cand, "open") is not True:
                    container = cand
        if container is None:
            container = self._nearest_closed(anchor)
        if container is None:
            for _ in range(self.config.agent.search_spin_steps):
                self._act(Action("RotateRight"), key, kind, primary=False)
                if self.session.done:
                    return
                container = self._nearest_closed(anchor)
                if container is not None:
                    break
        if container is None:
            return
        centry = self.spatial.entries_for_world_id(container)
        cell = centry[0].centroid if centry else None
        self._approach(container, cell, key, kind)
        if cell is not None:
            self._face(cell, key, kind)
        if self._observed_state(container, "open") is False:
            self._act(Action("Open", container), key, kind, primary=False)

    def _fetch_category(self, category: str, key: str, kind: str) -> bool:
        entry = locate_selector(ObjectSelector(category=category), self.spatial, self.layout)
        if entry is None:
            return False
        world_id = entry.views[-1].world_id
        if self._held() == world_id:
            return True
        if self._held() is not None and not self.place_on_surface(key, kind):
            return False
        if not self._approach(world_id, entry.centroid, key, kind).ok:
            return False
        result, _ = self._act(Action("Pick", world_id), key, kind, primary=False)
        return result.ok

    # -- supervised manipulation --------------------------------------------------------

    def _manipulate(self, action_name: str, target: str, key: str, kind: str, target_cell: Cell | None) -> Outcome:
        attempts = 0
        while attempts <= self.config.agent.refine_budget + 2:
            if self.session.done:
                return Outcome(False, "SessionClosed")
            result, directive = self._act(Action(action_name, target), key, kind, primary=True)
            if result.ok:
                return Outcome(True, attempts=attempts)
            attempts += 1
            if directive.kind == "replan":
                return Outcome(False, result.error.value, attempts=attempts, replan=True, detail=directive.text)
            self._apply_hint(directive.text, action_name, target, target_cell, key, kind)
        return Outcome(False, "RefineBudgetExceeded", attempts=attempts)

    # -- skills ------------------------------------------------------------------------

    def execute(self, sg: SubGoal, key: str) -> Outcome:
        handler = {
            "NavigateTo": self._sg_navigate,
            "Search": self._sg_search,
            "PickUp": self._sg_pick,
            "PlaceIn": self._sg_place,
            "Open": self._sg_open,
            "Close": self._sg_close,
            "Toggle": self._sg_toggle,
            "Slice": self._sg_slice,
            "CookOn": self._sg_cook,
            "FillFrom": self._sg_fill,
        }[sg.kind]
        outcome = handler(sg, key)
        logger.debug("subgoal %s -> %r", sg.describe(), outcome)
        return outcome

    def _sg_navigate(self, sg: SubGoal, key: str) -> Outcome:
        cell = self._target_cell(sg.params)
        if cell is None:
            return Outcome(False, "NotVisible", detail="navigation target unknown")
        return self.navigate_to(cell, key, sg.kind)

    def _sg_pick(self, sg: SubGoal, key: str) -> Outcome:
        target = sg.params["object"]
        expected = sg.params.get("cell") or self._known_cell(target)
        container = sg.params.get("container")
        if self._held() == target:
            return Outcome(True)
        if self._held() is not None:
            self.place_on_surface(key, sg.kind)
        approach = self._approach(target, expected, key, sg.kind)
        if approach.replan:
            return approach
        record = self._visible_record(target)
        if record is None:
            self._open_container_of(target, key, sg.kind, expected, container)
        elif record.containing_receptacle and self._observed_state(record.containing_receptacle, "open") is False:
            self._open_container_of(target, key, sg.kind, expected, record.containing_receptacle)
        return self._manipulate("Pick", target, key, sg.kind, self._known_cell(target) or expected)

    def _sg_place(self, sg: SubGoal, key: str) -> Outcome:
        target = sg.params["receptacle"]
        if target == "@nearest-surface":
            ok = self.place_on_surface(key, sg.kind)
            return Outcome(ok, None if ok else "NotReachable")
        expected = sg.params.get("cell") or self._known_cell(target)
        held = self._held()
        wanted = sg.params.get("object")
        if held is None and wanted is not None:
            pick = self._sg_pick(SubGoal("PickUp", {"object": wanted}), key)
            if not pick.ok:
                return pick
        approach = self._approach(target, expected, key, sg.kind)
        if approach.replan:
            return approach
        if self._observed_state(target, "open") is False:
            self._act(Action("Open", target), key, sg.kind, primary=False)
        return self._manipulate("Place", target, key, sg.kind, self._known_cell(target) or expected)

    def _sg_open(self, sg: SubGoal, key: str) -> Outcome:
        return self._door(sg.params["object"], True, key, sg.kind, sg.params.get("cell"))

    def _sg_close(self, sg: SubGoal, key: str) -> Outcome:
        return self._door(sg.params["object"], False, key, sg.kind, sg.params.get("cell"))

    def _door(self, target: str, want_open: bool, key: str, kind: str, expected: Cell | None = None) -> Outcome:
        expected = expected or self._known_cell(target)
        approach = self._approach(target, expected, key, kind)
        if approach.replan:
            return approach
        state = self._observed_state(target, "open")
        if state is not None and state == want_open:
            return Outcome(True)
        return self._manipulate("Open" if want_open else "Close", target, key, kind, self._known_cell(target) or expected)

    def _sg_toggle(self, sg: SubGoal, key: str) -> Outcome:
        target = sg.params["object"]
        want_on = bool(sg.params["on"])
        expected = sg.params.get("cell") or self._known_cell(target)
        approach = self._approach(target, expected, key, sg.kind)
        if approach.replan:
            return approach
        state = self._observed_state(target, "on")
        if state is not None and state == want_on:
            return Outcome(True)
        return self._manipulate("ToggleOn" if want_on else "ToggleOff", target, key, sg.kind, self._known_cell(target) or expected)

    def _sg_slice(self, sg: SubGoal, key: str) -> Outcome:
        target = sg.params["object"]
        expected = sg.params.get("cell") or self._known_cell(target)
        approach = self._approach(target, expected, key, sg.kind)
        if approach.replan:
            return approach
        record = self._visible_record(target)
        if record is None:
            self._open_container_of(target, key, sg.kind, expected, sg.params.get("container"))
        return self._manipulate("Slice", target, key, sg.kind, self._known_cell(target) or expected)

    def _sg_cook(self, sg: SubGoal, key: str) -> Outcome:
        appliance = sg.params["appliance"]
        place = self._sg_place(SubGoal("PlaceIn", {"object": sg.params["object"], "receptacle": appliance}), key)
        if not place.ok:
            return place
        if self._observed_state(appliance, "on") is not True:
            return self._manipulate("ToggleOn", appliance, key, sg.kind, self._known_cell(appliance))
        return Outcome(True)

    def _sg_fill(self, sg: SubGoal, key: str) -> Outcome:
        sink = sg.params["sink"]
        place = self._sg_place(SubGoal("PlaceIn", {"object": sg.params["object"], "receptacle": sink}), key)
        if not place.ok:
            return place
        if self._observed_state(sink, "on") is not True:
            return self._manipulate("ToggleOn", sink, key, sg.kind, self._known_cell(sink))
        return Outcome(True)

    def _known_cell(self, world_id: str) -> Cell | None:
        entries = self.spatial.entries_for_world_id(world_id)
        return entries[0].centroid if entries else None

    # -- search -----------------------------------------------------------------------

    def _memory_match(self, selector: ObjectSelector):
        return locate_selector(selector, self.spatial, self.layout)

    def _sg_search(self, sg: SubGoal, key: str) -> Outcome:
        """Explore likely receptacles room by room until the selector matches
        something in memory."""
        selector = sg.params["selector"]
        hints = list(sg.params.get("hints", ()))
        preferred_room = sg.params.get("room")
        if self._memory_match(selector) is not None:
            return Outcome(True)

        rooms = list(self.layout.rooms)
        here = self.layout.room_name(self._pose().cell)

        def room_rank(room):
            if room.name == preferred_room:
                return (0, room.name)
            if room.name == here:
                return (1, room.name)
            return (2, room.name)

        for room in sorted(rooms, key=room_rank):
            nav = self.navigate_to(room.center, key, sg.kind, reach_fraction=0.8)
            if self.session.done:
                return Outcome(False, "SessionClosed")
            for _ in range(self.config.agent.search_spin_steps):
                self._act(Action("RotateRight"), key, sg.kind, primary=False)
                if self.session.done:
                    return Outcome(False, "SessionClosed")
            if self._memory_match(selector) is not None:
                return Outcome(True)

            closed = self._closed_openables_in(room, hints)
            for entry_cell, rid in closed:
                self.navigate_to(entry_cell, key, sg.kind)
                if self.session.done:
                    return Outcome(False, "SessionClosed")
                if self._observed_state(rid, "open") is False:
                    self._act(Action("Open", rid), key, sg.kind, primary=False)
                if self._memory_match(selector) is not None:
                    return Outcome(True)
        return Outcome(False, "SearchExhausted", detail=f"nothing matches {selector.to_dict()}")

    def _closed_openables_in(self, room, hints: list[str]) -> list[tuple[Cell, str]]:
        found = []
        for entry in self.spatial.objects.values():
            view = entry.views[-1]
            if "closed" not in view.attributes:
                continue
            cell = entry.centroid
            if self.layout.room_name(cell) != room.name:
                continue
            rank = hints.index(view.category) if view.category in hints else len(hints)
            found.append((rank, cell, view.world_id))
        found.sort()
        return [(cell, rid) for _, cell, rid in found]
