"""Seeded episode generation.

Goals are drawn from scenario-flavored templates against a concrete layout,
each yielding a checklist item, an instruction sentence, and the object ids
the witness plan will act on. The generator verifies its own work: every
episode ships with a compiled witness action list that provably satisfies
the checklist, and items are guaranteed unsatisfied in the initial state.
"""

from __future__ import annotations

import random
from collections import deque

from ..world.snapshot import build_world, layout_to_dict
from ..world.types import COOK_APPLIANCES, FILL_APPLIANCES, HouseLayout, WorldState
from .deps import infer_dependencies, topological_order
from .resolve import evaluate_item, resolve_selector
from .types import ChecklistItem, Condition, Episode, ObjectSelector, SCENARIOS
from .witness import WitnessError, compile_witness

GOAL_MIN, GOAL_MAX = 4, 14

_INTENT = {
    "Daily Cleaning & Tidying": "Tidy the house up",
    "Work & Study Preparation": "Get things ready for work",
    "Rest & Entertainment": "Set things up for a relaxing evening",
    "Dining & Kitchen Related": "Get the kitchen ready for a meal",
}

_VERB = {
    "in_receptacle": "put things where they belong",
    "in_room": "move things between rooms",
    "open": "sort out the doors",
    "toggled_on": "deal with the switches",
    "sliced": "do some slicing",
    "cooked": "cook something",
    "filled_with": "fill something up",
}

# Scenario-flavored object preferences for pick/place goals.
_PP_PREFERENCES = {
    "Daily Cleaning & Tidying": (("book", "toy", "plate", "mug", "cup", "remote"), ("bookshelf", "box", "cabinet", "dresser", "sink")),
    "Work & Study Preparation": (("laptop", "notebook", "pen", "pencil", "book", "mug"), ("desk", "drawer", "bookshelf")),
    "Rest & Entertainment": (("pillow", "remote", "book", "toy"), ("sofa", "coffee_table", "tv_stand")),
    "Dining & Kitchen Related": (("plate", "fork", "spoon", "mug", "cup", "bowl"), ("dining_table", "countertop", "sink", "cabinet")),
}


class GenerationError(RuntimeError):
    pass


class _Builder:
    def __init__(self, world: WorldState, scenario: str, rng: random.Random, goal_count: int):
        self.world = world
        self.scenario = scenario
        self.rng = rng
        self.goal_count = goal_count
        self.items: list[ChecklistItem] = []
        self.sentences: list[str] = []
        self.hints: list[dict] = []
        self.used_subjects: set[str] = set()

    def _room_left(self) -> int:
        return self.goal_count - len(self.items)

    # -- selector construction -------------------------------------------

    def _selector_for(self, oid: str) -> ObjectSelector:
        """Narrow a selector around `oid`: add a color, then a room, until it
        pins the object or no qualifier is left.

        Pickupable objects never get a room qualifier: conditions are checked
        against the live world, so a selector anchored to the object's
        starting room would stop matching the moment the object is carried
        somewhere else. Ambiguity that colors cannot remove is acceptable
        because checklist semantics are existential.
        """
        obj = self.world.objects[oid]
        sel = ObjectSelector(category=obj.category)
        if len(resolve_selector(self.world, sel)) == 1:
            return sel
        colors = sorted(obj.attributes)
        if colors:
            sel = ObjectSelector(category=obj.category, attributes=frozenset(colors[:1]))
        if len(resolve_selector(self.world, sel)) == 1 or obj.has("pickupable"):
            return sel
        room = self.world.layout.room_name(self.world.effective_cell(oid))
        narrowed = ObjectSelector(category=sel.category, attributes=sel.attributes, relation=("in-room", room))
        if oid in resolve_selector(self.world, narrowed):
            return narrowed
        return sel

    def _phrase(self, sel: ObjectSelector) -> str:
        noun = sel.category.replace("_", " ")
        attrs = " ".join(sorted(sel.attributes))
        core = f"the {attrs} {noun}" if attrs else f"the {noun}"
        if sel.relation and sel.relation[0] == "in-room":
            core += f" in the {sel.relation[1].replace('_', ' ')}"
        return core

    def _add(self, item: ChecklistItem, sentence: str, hints: dict) -> None:
        self.items.append(item)
        self.sentences.append(sentence)
        self.hints.append(hints)

    # -- object pools ------------------------------------------------------

    def _pickupables(self, preferred: tuple[str, ...]) -> list[str]:
        pool = [
            oid
            for oid in sorted(self.world.objects)
            if self.world.objects[oid].has("pickupable") and oid not in self.used_subjects
        ]
        favored = [oid for oid in pool if self.world.objects[oid].category in preferred]
        return favored or pool

    def _surfaces(self, preferred: tuple[str, ...], exclude_parent_of: str | None = None) -> list[str]:
        out = []
        for oid in sorted(self.world.objects):
            obj = self.world.objects[oid]
            if not obj.is_surface or obj.has("pickupable"):
                continue
            if exclude_parent_of and self.world.objects[exclude_parent_of].states.parent_receptacle == oid:
                continue
            if self.world.free_slot(oid) is None:
                continue
            out.append(oid)
        favored = [oid for oid in out if self.world.objects[oid].category in preferred]
        return favored or out

    # -- templates ---------------------------------------------------------

    def template_pp_move(self) -> bool:
        preferred_items, preferred_targets = _PP_PREFERENCES[self.scenario]
        pool = self._pickupables(preferred_items)
        self.rng.shuffle(pool)
        for oid in pool:
            targets = self._surfaces(preferred_targets, exclude_parent_of=oid)
            targets = [t for t in targets if t != self.world.objects[oid].states.parent_receptacle]
            if not targets:
                continue
            rid = self.rng.choice(targets)
            rec = self.world.objects[rid]
            rec_sel = self._selector_for(rid)
            item = ChecklistItem(self._selector_for(oid), Condition("in_receptacle", rec_sel))
            if evaluate_item(self.world, item):
                continue
            prep = "in" if (rec.has("openable") or rec.category in FILL_APPLIANCES) else "on"
            self._add(item, f"Put {self._phrase(item.selector)} {prep} {self._phrase(rec_sel)}.",
                      {"object": oid, "receptacle": rid})
            self.used_subjects.add(oid)
            return True
        return False

    def template_pp_bring_to_room(self) -> bool:
        rooms = self.world.layout.rooms
        if len(rooms) < 2:
            return False
        pool = self._pickupables(_PP_PREFERENCES[self.scenario][0])
        self.rng.shuffle(pool)
        for oid in pool:
            here = self.world.layout.room_name(self.world.effective_cell(oid))
            choices = [r.name for r in rooms if r.name != here]
            self.rng.shuffle(choices)
            for room in choices:
                # Land on open flat surfaces only, so carrying the object in
                # never needs to disturb a door whose state another goal owns.
                landing = [
                    rid for rid in self._surfaces(())
                    if self.world.layout.room_name(self.world.effective_cell(rid)) == room
                    and self.world.objects[rid].has("flat-surface")
                    and not self.world.objects[rid].has("openable")
                ]
                if not landing:
                    continue
                item = ChecklistItem(self._selector_for(oid), Condition("in_room", room))
                if evaluate_item(self.world, item):
                    continue  # an ambiguous sibling already sits in that room
                self._add(item, f"Bring {self._phrase(item.selector)} to the {room.replace('_', ' ')}.",
                          {"object": oid, "receptacle": self.rng.choice(landing)})
                self.used_subjects.add(oid)
                return True
        return False

    def template_toggle(self) -> bool:
        pool = [
            oid
            for oid in sorted(self.world.objects)
            if self.world.objects[oid].has("toggleable")
            and self.world.objects[oid].category in ("tv", "desk_lamp", "floor_lamp")
            and oid not in self.used_subjects
        ]
        if not pool:
            return False
        oid = self.rng.choice(pool)
        on_now = self.world.objects[oid].states.toggled_on
        item = ChecklistItem(self._selector_for(oid), Condition("toggled_on", not on_now))
        verb = "off" if on_now else "on"
        self._add(item, f"Turn {verb} {self._phrase(item.selector)}.", {"object": oid})
        self.used_subjects.add(oid)
        return True

    def template_door_state(self) -> bool:
        pool = [
            oid
            for oid in sorted(self.world.objects)
            if self.world.objects[oid].states.open is not None and oid not in self.used_subjects
        ]
        if not pool:
            return False
        open_now = [oid for oid in pool if self.world.objects[oid].states.open]
        oid = self.rng.choice(open_now or pool)
        want_open = not self.world.objects[oid].states.open
        item = ChecklistItem(self._selector_for(oid), Condition("open", want_open))
        self._add(item, f"{'Open' if want_open else 'Close'} {self._phrase(item.selector)}.", {"object": oid})
        self.used_subjects.add(oid)
        return True

    def _maybe_chain_pp(self, oid: str, preferred: tuple[str, ...]) -> None:
        """Follow a transforming goal with a resting-place goal for the same
        object, wiring a deliberate inter-goal dependency."""
        if self._room_left() < 1 or self.rng.random() > 0.35:
            return
        targets = [
            rid for rid in self._surfaces(preferred)
            if rid != self.world.objects[oid].states.parent_receptacle
        ]
        if not targets:
            return
        rid = self.rng.choice(targets)
        rec_sel = self._selector_for(rid)
        item = ChecklistItem(self._selector_for(oid), Condition("in_receptacle", rec_sel))
        if evaluate_item(self.world, item):
            return
        rec = self.world.objects[rid]
        prep = "in" if (rec.has("openable") or rec.category in FILL_APPLIANCES) else "on"
        self._add(item, f"Then put {self._phrase(item.selector)} {prep} {self._phrase(rec_sel)}.",
                  {"object": oid, "receptacle": rid})

    def template_slice(self) -> bool:
        knives = self.world.category_index.get("knife", [])
        if not knives:
            return False
        pool = [
            oid
            for oid in sorted(self.world.objects)
            if self.world.objects[oid].has("sliceable")
            and not self.world.objects[oid].states.sliced
            and oid not in self.used_subjects
            and oid not in knives
        ]
        if not pool:
            return False
        oid = self.rng.choice(pool)
        item = ChecklistItem(self._selector_for(oid), Condition("sliced"))
        self._add(item, f"Slice {self._phrase(item.selector)}.", {"object": oid, "knife": knives[0]})
        self.used_subjects.add(oid)
        self._maybe_chain_pp(oid, ("plate", "dining_table", "countertop"))
        return True

    def _cook_appliances(self) -> list[str]:
        # Stoves first: they hold several items, a microwave only one.
        out = [
            oid for oid in sorted(self.world.objects)
            if self.world.objects[oid].category in COOK_APPLIANCES
        ]
        return sorted(out, key=lambda oid: (self.world.objects[oid].category != "stove", oid))

    def template_cook(self) -> bool:
        appliances = self._cook_appliances()
        if not appliances:
            return False
        pool = [
            oid
            for oid in sorted(self.world.objects)
            if self.world.objects[oid].has("cookable")
            and not self.world.objects[oid].states.cooked
            and oid not in self.used_subjects
        ]
        if not pool:
            return False
        oid = self.rng.choice(pool)
        item = ChecklistItem(self._selector_for(oid), Condition("cooked"))
        self._add(item, f"Cook {self._phrase(item.selector)}.", {"object": oid, "appliance": appliances[0]})
        self.used_subjects.add(oid)
        self._maybe_chain_pp(oid, ("dining_table", "countertop"))
        return True

    def template_fill(self) -> bool:
        sinks = [
            oid for oid in sorted(self.world.objects)
            if self.world.objects[oid].category in FILL_APPLIANCES
        ]
        if not sinks:
            return False
        pool = [
            oid
            for oid in sorted(self.world.objects)
            if self.world.objects[oid].has("fillable")
            and not self.world.objects[oid].states.filled_with
            and self.world.objects[oid].has("pickupable")
            and oid not in self.used_subjects
        ]
        if not pool:
            return False
        oid = self.rng.choice(pool)
        item = ChecklistItem(self._selector_for(oid), Condition("filled_with", "water"))
        self._add(item, f"Fill {self._phrase(item.selector)} with water.", {"object": oid, "appliance": sinks[0]})
        self.used_subjects.add(oid)
        self._maybe_chain_pp(oid, ("desk", "coffee_table", "dining_table"))
        return True


_SCENARIO_TEMPLATES = {
    "Daily Cleaning & Tidying": ("pp_move", "pp_move", "pp_move", "pp_bring_to_room", "door_state", "door_state", "toggle"),
    "Work & Study Preparation": ("pp_move", "pp_move", "pp_move", "toggle", "fill", "door_state", "pp_bring_to_room"),
    "Rest & Entertainment": ("toggle", "toggle", "pp_move", "pp_move", "pp_bring_to_room", "fill", "door_state"),
    "Dining & Kitchen Related": ("slice", "slice", "cook", "fill", "pp_move", "pp_move", "door_state", "toggle"),
}


def generate_episode(layout: HouseLayout, scenario: str, seed: int) -> Episode:
    """Build a satisfiable episode; pure function of (layout, scenario, seed)."""
    if scenario not in SCENARIOS:
        raise GenerationError(f"unknown scenario {scenario!r}")
    last_error = None
    for attempt in range(20):
        rng = random.Random(f"episode:{layout.layout_id}:{scenario}:{seed}:{attempt}")
        try:
            return _generate_once(layout, scenario, seed, rng)
        except (WitnessError, GenerationError) as exc:
            last_error = exc
    raise GenerationError(f"generation failed after retries: {last_error}")


def _generate_once(layout: HouseLayout, scenario: str, seed: int, rng: random.Random) -> Episode:
    world = build_world(layout)
    goal_count = rng.randint(GOAL_MIN, GOAL_MAX)
    builder = _Builder(world, scenario, rng, goal_count)

    queue: deque = deque()
    stalled_cycles = 0
    while len(builder.items) < goal_count:
        if not queue:
            cycle = list(_SCENARIO_TEMPLATES[scenario])
            rng.shuffle(cycle)
            queue.extend(cycle)
            before = len(builder.items)
        name = queue.popleft()
        getattr(builder, f"template_{name}")()
        if not queue:
            stalled_cycles = stalled_cycles + 1 if len(builder.items) == before else 0
            if stalled_cycles >= 2:
                raise GenerationError(f"only {len(builder.items)} of {goal_count} goals applicable")
    del builder.items[goal_count:]
    del builder.sentences[goal_count:]
    del builder.hints[goal_count:]

    for item in builder.items:
        if not resolve_selector(world, item.selector):
            raise GenerationError("selector resolves to nothing")
        if evaluate_item(world, item):
            raise GenerationError("item satisfied in the initial state")

    edges = infer_dependencies(world, builder.items)
    order = topological_order(len(builder.items), edges)
    plan = [(builder.items[i], builder.hints[i]) for i in order]

    witness_world = build_world(layout)
    actions = compile_witness(witness_world, plan)
    for item in builder.items:
        if not evaluate_item(witness_world, item):
            raise WitnessError("witness left checklist incomplete")

    detailed = " ".join(builder.sentences)
    concise = _concise(scenario, builder.items)
    return Episode(
        id=f"{layout.layout_id}-{_slug(scenario)}-s{seed}",
        layout_doc=layout_to_dict(layout),
        scenario=scenario,
        instruction_detailed=detailed,
        instruction_concise=concise,
        checklist=list(builder.items),
        witness=[a.to_wire() for a in actions],
        seed=seed,
    )


def _slug(scenario: str) -> str:
    return "".join(ch for ch in scenario.lower().replace(" ", "-") if ch.isalnum() or ch == "-")


def _concise(scenario: str, items: list[ChecklistItem]) -> str:
    phrases = []
    for item in items:
        verb = _VERB[item.condition.kind]
        if verb not in phrases:
            phrases.append(verb)
    return f"{_INTENT[scenario]}: {', '.join(phrases)}."
