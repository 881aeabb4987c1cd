"""Scripted reasoner implementations.

OracleReasoner reads the episode definition itself (checklist plus initial
placements), which makes it the consistency probe for the whole
simulator/evaluator loop: with sound planning machinery it must reach full
success. GreedyTemplateReasoner parses the detailed instruction text back
into goals with no privileged knowledge, exercising refinement, search and
grounding the way a model-backed reasoner would. RandomReasoner and
NoopReasoner are fuzzing baselines.
"""

from __future__ import annotations

import random
import re

from ..tasks.catalog import COLORS
from ..tasks.deps import infer_dependencies, infer_dependencies_symbolic
from ..tasks.types import ChecklistItem, Condition, ObjectSelector
from ..world.snapshot import build_world, layout_from_dict
from ..world.types import COOK_APPLIANCES, WorldState
from .goals import Goal, GoalDag, RefinedGoal
from .planner import FLAT_SURFACES, default_refine

_KNOWN_ROOMS = ("kitchen", "living_room", "bedroom", "study")


class _ScriptedBase:
    """Common plumbing: optional session attachment for floor-plan geometry."""

    name = "scripted"

    def __init__(self):
        self.layout = None

    def attach_session(self, session) -> None:
        self.layout = session.layout

    def refine(self, goal, episodic, spatial) -> RefinedGoal:
        return default_refine(goal, episodic, spatial, self.layout)

    def translate(self, subgoal, observation):
        return None

    def critique(self, context):
        return None


def _room_hint_for(layout, cell) -> tuple[str, tuple[int, int]] | None:
    if cell is None:
        return None
    name = layout.room_name(tuple(cell))
    if name is None:
        return None
    room = layout.room_by_name(name)
    return (name, room.center)


class OracleReasoner(_ScriptedBase):
    """Builds the goal graph straight from the episode's checklist with
    ground-truth ids and initial locations as hints."""

    name = "oracle"

    def __init__(self, episode):
        super().__init__()
        self.episode = episode
        self._world = build_world(layout_from_dict(episode.layout_doc))

    def decompose(self, instruction: str, scene_summary: dict) -> GoalDag:
        world = self._world
        dag = GoalDag()
        used_subjects: set[str] = set()
        for i, item in enumerate(self.episode.checklist):
            hints = oracle_hints(world, item, used_subjects)
            if "subject" in hints:
                used_subjects.add(hints["subject"])
            cell = hints.get("subject_cell")
            dag.add(
                Goal(
                    goal_id=f"g{i:02d}",
                    description=_describe(item),
                    target_selectors=[item.selector],
                    desired_conditions=[item],
                    room_hint=_room_hint_for(world.layout, cell),
                    hints=hints,
                )
            )
        for a, b in infer_dependencies(world, self.episode.checklist):
            dag.add_edge(f"g{a:02d}", f"g{b:02d}")
        return dag


def oracle_hints(world: WorldState, item: ChecklistItem, used_subjects: set[str] | None = None) -> dict:
    """Concrete ids and initial cells for every slot of a checklist item.

    When a selector is ambiguous, prefer an object no other goal is already
    using: acting twice on one object can undo an earlier goal, while the
    existential checklist semantics are happy with any matching candidate.
    """
    from ..tasks.resolve import resolve_selector

    hints: dict = {}
    subjects = resolve_selector(world, item.selector)
    if subjects:
        fresh = [s for s in subjects if s not in (used_subjects or ())]
        subject = (fresh or subjects)[0]
        hints["subject"] = subject
        hints["subject_cell"] = world.effective_cell(subject)
        chain = world.ancestors(subject)
        if chain:
            hints["subject_container"] = chain[0]
    kind = item.condition.kind
    if kind == "in_receptacle":
        target = item.condition.target
        receptacles = resolve_selector(world, target) if isinstance(target, ObjectSelector) else [target]
        receptacles = [r for r in receptacles if world.free_slot(r) is not None] or receptacles
        if receptacles:
            hints["receptacle"] = receptacles[0]
            hints["receptacle_cell"] = world.effective_cell(receptacles[0])
    elif kind == "in_room":
        room = item.condition.target
        landings = [
            oid
            for oid in sorted(world.objects)
            if world.objects[oid].has("flat-surface")
            and not world.objects[oid].has("openable")
            and world.layout.room_name(world.effective_cell(oid)) == room
            and world.free_slot(oid) is not None
        ]
        if landings:
            hints["receptacle"] = landings[0]
            hints["receptacle_cell"] = world.effective_cell(landings[0])
    elif kind == "sliced":
        knives = world.category_index.get("knife", [])
        if knives:
            hints["tool"] = knives[0]
            hints["tool_cell"] = world.effective_cell(knives[0])
            chain = world.ancestors(knives[0])
            if chain:
                hints["tool_container"] = chain[0]
    elif kind == "cooked":
        appliances = sorted(
            (oid for oid in world.objects if world.objects[oid].category in COOK_APPLIANCES),
            key=lambda oid: (world.objects[oid].category != "stove", oid),
        )
        if appliances:
            hints["appliance"] = appliances[0]
            hints["appliance_cell"] = world.effective_cell(appliances[0])
    elif kind == "filled_with":
        sinks = world.category_index.get("sink", [])
        if sinks:
            hints["appliance"] = sinks[0]
            hints["appliance_cell"] = world.effective_cell(sinks[0])
    return hints


def _describe(item: ChecklistItem) -> str:
    sel = item.selector
    noun = " ".join(sorted(sel.attributes) + [sel.category.replace("_", " ")])
    kind = item.condition.kind
    target = item.condition.target
    if kind == "in_receptacle":
        where = target.category.replace("_", " ") if isinstance(target, ObjectSelector) else str(target)
        return f"put the {noun} in/on the {where}"
    if kind == "in_room":
        return f"bring the {noun} to the {str(target).replace('_', ' ')}"
    if kind == "open":
        return f"{'open' if target else 'close'} the {noun}"
    if kind == "toggled_on":
        return f"turn {'on' if target else 'off'} the {noun}"
    return f"{kind.replace('_', ' ')} the {noun}"


# -- instruction parsing -----------------------------------------------------------


_SENTENCES = (
    (re.compile(r"^(?:Then put|Put) (.+?) (?:in|on) (.+)$"), "in_receptacle"),
    (re.compile(r"^Bring (.+?) to the (.+)$"), "in_room"),
    (re.compile(r"^(Open|Close) (.+)$"), "open"),
    (re.compile(r"^Turn (on|off) (.+)$"), "toggled_on"),
    (re.compile(r"^Slice (.+)$"), "sliced"),
    (re.compile(r"^Cook (.+)$"), "cooked"),
    (re.compile(r"^Fill (.+?) with water$"), "filled_with"),
)


def parse_phrase(text: str) -> ObjectSelector:
    """'the red mug in the kitchen' -> selector(category=mug, {red}, in-room)."""
    text = text.strip()
    relation = None
    m = re.search(r" in the ([a-z ]+)$", text)
    if m and m.group(1).replace(" ", "_") in _KNOWN_ROOMS:
        relation = ("in-room", m.group(1).replace(" ", "_"))
        text = text[: m.start()]
    words = [w for w in text.replace("the ", " ").split() if w]
    attributes = frozenset(w for w in words if w in COLORS)
    nouns = [w for w in words if w not in COLORS]
    return ObjectSelector(category="_".join(nouns), attributes=attributes, relation=relation)


def parse_instruction(instruction: str) -> list[ChecklistItem]:
    items = []
    for raw in instruction.split("."):
        sentence = raw.strip()
        if not sentence:
            continue
        for pattern, kind in _SENTENCES:
            m = pattern.match(sentence)
            if not m:
                continue
            if kind == "in_receptacle":
                items.append(
                    ChecklistItem(parse_phrase(m.group(1)), Condition("in_receptacle", parse_phrase(m.group(2))))
                )
            elif kind == "in_room":
                items.append(
                    ChecklistItem(parse_phrase(m.group(1)), Condition("in_room", m.group(2).strip().replace(" ", "_")))
                )
            elif kind == "open":
                items.append(
                    ChecklistItem(parse_phrase(m.group(2)), Condition("open", m.group(1) == "Open"))
                )
            elif kind == "toggled_on":
                items.append(
                    ChecklistItem(parse_phrase(m.group(2)), Condition("toggled_on", m.group(1) == "on"))
                )
            elif kind == "sliced":
                items.append(ChecklistItem(parse_phrase(m.group(1)), Condition("sliced")))
            elif kind == "cooked":
                items.append(ChecklistItem(parse_phrase(m.group(1)), Condition("cooked")))
            elif kind == "filled_with":
                items.append(ChecklistItem(parse_phrase(m.group(1)), Condition("filled_with", "water")))
            break
    return items


class GreedyTemplateReasoner(_ScriptedBase):
    """Parses the detailed instruction into goals; no privileged knowledge."""

    name = "greedy"

    def decompose(self, instruction: str, scene_summary: dict) -> GoalDag:
        items = parse_instruction(instruction)
        dag = GoalDag()
        rooms = {r["name"]: tuple(r["center"]) for r in scene_summary.get("rooms", [])}
        for i, item in enumerate(items):
            hint = None
            if item.selector.relation and item.selector.relation[0] == "in-room":
                room = item.selector.relation[1]
                if room in rooms:
                    hint = (room, rooms[room])
            dag.add(
                Goal(
                    goal_id=f"g{i:02d}",
                    description=_describe(item),
                    target_selectors=[item.selector],
                    desired_conditions=[item],
                    room_hint=hint,
                )
            )
        for a, b in infer_dependencies_symbolic(items):
            dag.add_edge(f"g{a:02d}", f"g{b:02d}")
        return dag


class RandomReasoner(_ScriptedBase):
    """Seeded wandering: navigates to random cells, no task intent."""

    name = "random"

    def __init__(self, seed: int = 0, goal_budget: int = 30):
        super().__init__()
        self.seed = seed
        self.goal_budget = goal_budget

    def decompose(self, instruction: str, scene_summary: dict) -> GoalDag:
        rng = random.Random(f"random-reasoner:{self.seed}:{instruction[:32]}")
        rooms = scene_summary.get("rooms", [])
        dag = GoalDag()
        for i in range(self.goal_budget):
            room = rng.choice(rooms) if rooms else None
            if room:
                x0, z0, x1, z1 = room["rect"]
                cell = (rng.randint(x0, x1), rng.randint(z0, z1))
            else:
                cell = (1, 1)
            dag.add(
                Goal(
                    goal_id=f"g{i:02d}",
                    description=f"wander to {cell}",
                    target_selectors=[],
                    desired_conditions=[],
                    hints={"cell": cell},
                )
            )
        return dag


class NoopReasoner(_ScriptedBase):
    """Stops immediately: decomposes to an empty goal graph."""

    name = "noop"

    def decompose(self, instruction: str, scene_summary: dict) -> GoalDag:
        return GoalDag()


def make_reasoner(spec: str, episode=None, seed: int = 0):
    """Reasoner factory for CLI names: oracle|greedy|random|noop|external:..."""
    if spec == "oracle":
        if episode is None:
            raise ValueError("oracle reasoner needs the episode")
        return OracleReasoner(episode)
    if spec == "greedy":
        return GreedyTemplateReasoner()
    if spec == "random":
        return RandomReasoner(seed)
    if spec == "noop":
        return NoopReasoner()
    if spec.startswith("external:"):
        from .external import ExternalReasoner

        return ExternalReasoner.from_spec(spec)
    raise ValueError(f"unknown reasoner {spec!r}")
