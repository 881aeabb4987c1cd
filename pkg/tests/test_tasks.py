import json
import random

import pytest
from hypothesis import given, strategies as st

from homebench.jsonutil import SchemaError, canonical_json
from homebench.tasks import (
    ChecklistItem,
    Condition,
    ObjectSelector,
    SCENARIOS,
    evaluate_item,
    generate_episode,
    generate_layout,
    load_episode,
    resolve_selector,
    save_episode,
)
from homebench.tasks.io import episode_from_dict, episode_to_dict
from homebench.world import Action, apply_action, build_world
from homebench.world.snapshot import layout_from_dict

from conftest import build, make_object, single_room_layout, two_room_layout


# -- independent brute-force checker (test oracle) ----------------------------


def brute_matches(world, selector):
    """Selector resolution by raw scan, no indexes."""
    out = []
    for oid, obj in world.objects.items():
        if obj.category != selector.category:
            continue
        if not set(selector.attributes) <= set(obj.attributes):
            continue
        out.append(oid)
    if selector.relation:
        kind = selector.relation[0]
        if kind == "in-room":
            room = selector.relation[1]
            out = [oid for oid in out if world.layout.room_name(world.effective_cell(oid)) == room]
        elif kind == "nearest-to":
            anchors = [o for o, obj in world.objects.items() if obj.category == selector.relation[1]]
            if not anchors or not out:
                return []
            import math

            def dist(a, b):
                ca, cb = world.effective_cell(a), world.effective_cell(b)
                return math.hypot(ca[0] - cb[0], ca[1] - cb[1])

            best = min(out, key=lambda oid: (min(dist(oid, a) for a in anchors), oid))
            out = [best]
    return sorted(out)


def brute_evaluate(world, item):
    """Condition check by raw scan, written independently of resolve.py."""
    for oid in brute_matches(world, item.selector):
        obj = world.objects[oid]
        kind = item.condition.kind
        target = item.condition.target
        if kind == "in_receptacle":
            parent = obj.states.parent_receptacle
            if parent is None:
                continue
            if isinstance(target, ObjectSelector):
                if parent in brute_matches(world, target):
                    return True
            elif parent == target:
                return True
        elif kind == "in_room":
            if world.layout.room_name(world.effective_cell(oid)) == target:
                return True
        elif kind == "open":
            if obj.states.open == target:
                return True
        elif kind == "toggled_on":
            if obj.states.toggled_on == target:
                return True
        elif kind == "sliced":
            if obj.states.sliced is True:
                return True
        elif kind == "cooked":
            if obj.states.cooked is True:
                return True
        elif kind == "filled_with":
            if obj.states.filled_with == target:
                return True
    return False


def random_world_and_items(seed):
    """A generated world with randomized object states plus random items."""
    rng = random.Random(seed)
    world = build(generate_layout(seed % 7))
    for obj in world.objects.values():
        if obj.states.open is not None and rng.random() < 0.5:
            obj.states.open = not obj.states.open
        if obj.states.toggled_on is not None and rng.random() < 0.5:
            obj.states.toggled_on = not obj.states.toggled_on
        if obj.states.sliced is not None and rng.random() < 0.3:
            obj.states.sliced = True
        if obj.states.cooked is not None and rng.random() < 0.3:
            obj.states.cooked = True
        if obj.has("fillable") and rng.random() < 0.3:
            obj.states.filled_with = "water"
    categories = sorted({o.category for o in world.objects.values()})
    rooms = [r.name for r in world.layout.rooms]
    items = []
    for _ in range(10):
        category = rng.choice(categories)
        attrs = frozenset(rng.sample(["red", "blue", "green", "white"], k=rng.randint(0, 1)))
        relation = None
        if rng.random() < 0.3:
            relation = ("in-room", rng.choice(rooms))
        elif rng.random() < 0.1:
            relation = ("nearest-to", rng.choice(categories))
        selector = ObjectSelector(category, attrs, relation)
        kind = rng.choice(("in_receptacle", "in_room", "open", "toggled_on", "sliced", "cooked", "filled_with"))
        if kind == "in_receptacle":
            cond = Condition(kind, ObjectSelector(rng.choice(categories)))
        elif kind == "in_room":
            cond = Condition(kind, rng.choice(rooms))
        elif kind in ("open", "toggled_on"):
            cond = Condition(kind, rng.random() < 0.5)
        elif kind == "filled_with":
            cond = Condition(kind, "water")
        else:
            cond = Condition(kind)
        items.append(ChecklistItem(selector, cond))
    return world, items


class TestSelectors:
    def test_category_match(self, kitchen_world):
        w = kitchen_world
        twin = make_object("mug_2", "mug", cell=(38, 46), attributes=("blue",), affordances=("pickupable",), parent="counter_1")
        w.objects["mug_2"] = twin
        w.category_index["mug"].append("mug_2")
        w.contents["counter_1"].append("mug_2")
        assert resolve_selector(w, ObjectSelector("mug")) == ["mug_1", "mug_2"]
        assert resolve_selector(w, ObjectSelector("mug", frozenset({"red"}))) == ["mug_1"]

    def test_room_relation_matches_brute_force(self):
        objects = [
            make_object("shelf_1", "bookshelf", rect=(5, 34, 12, 39), affordances=("receptacle",)),
            make_object("book_1", "book", cell=(6, 34), attributes=("red",), affordances=("pickupable",), parent="shelf_1"),
            make_object("desk_1", "desk", rect=(60, 30, 70, 36), affordances=("receptacle", "flat-surface")),
            make_object("book_2", "book", cell=(62, 32), attributes=("blue",), affordances=("pickupable",), parent="desk_1"),
        ]
        w = build(two_room_layout(objects))
        sel = ObjectSelector("book", relation=("in-room", "bedroom"))
        assert resolve_selector(w, sel) == brute_matches(w, sel) == ["book_2"]

    def test_resolution_equals_brute_force_randomized(self):
        for seed in range(25):
            world, items = random_world_and_items(seed)
            for item in items:
                assert resolve_selector(world, item.selector) == brute_matches(world, item.selector)

    @given(st.integers(0, 30))
    def test_monotone_under_attribute_removal(self, seed):
        world, items = random_world_and_items(seed)
        for item in items:
            sel = item.selector
            if not sel.attributes:
                continue
            narrowed = set(resolve_selector(world, sel))
            dropped = ObjectSelector(sel.category, frozenset(), sel.relation)
            widened = set(resolve_selector(world, dropped))
            assert len(widened) >= len(narrowed)


class TestEvaluation:
    def test_toggled_condition(self, kitchen_world):
        w = kitchen_world
        item = ChecklistItem(ObjectSelector("floor_lamp"), Condition("toggled_on", True))
        assert evaluate_item(w, item) is False
        w.objects["lamp_1"].states.toggled_on = True
        assert evaluate_item(w, item) is True

    def test_wrong_receptacle(self, kitchen_world):
        item = ChecklistItem(
            ObjectSelector("mug"), Condition("in_receptacle", ObjectSelector("drawer"))
        )
        assert evaluate_item(kitchen_world, item) is False

    def test_agrees_with_brute_force_randomized(self):
        checked = 0
        for seed in range(40):
            world, items = random_world_and_items(seed)
            for item in items:
                assert evaluate_item(world, item) == brute_evaluate(world, item)
                checked += 1
        assert checked == 400


class TestGenerator:
    def test_seeded_determinism(self):
        layout = generate_layout(2)
        a = generate_episode(layout, SCENARIOS[3], 7)
        b = generate_episode(layout, SCENARIOS[3], 7)
        assert canonical_json(episode_to_dict(a)) == canonical_json(episode_to_dict(b))

    def test_goal_count_bounds(self):
        layout = generate_layout(2)
        for seed in range(12):
            ep = generate_episode(layout, SCENARIOS[seed % 4], seed)
            assert 2 <= ep.goal_count <= 14

    def test_witness_replays_to_full_success(self):
        layout = generate_layout(4)
        for seed in range(6):
            ep = generate_episode(layout, SCENARIOS[seed % 4], seed)
            world = build_world(layout_from_dict(ep.layout_doc))
            for wire in ep.witness:
                _, r = apply_action(world, Action.from_wire(wire))
                assert r.ok, (wire, r)
            from homebench.tasks.resolve import satisfied_flags

            assert all(satisfied_flags(world, ep.checklist))

    def test_items_initially_unsatisfied(self):
        layout = generate_layout(5)
        ep = generate_episode(layout, SCENARIOS[0], 3)
        world = build_world(layout_from_dict(ep.layout_doc))
        assert not any(evaluate_item(world, item) for item in ep.checklist)

    def test_disambiguation_present_when_duplicates_exist(self):
        layout = generate_layout(6)
        world = build_world(layout)
        episodes = [generate_episode(layout, SCENARIOS[i % 4], i) for i in range(8)]
        for ep in episodes:
            duplicated = [
                item for item in ep.checklist
                if len(resolve_selector(world, ObjectSelector(item.selector.category))) > 1
            ]
            if duplicated:
                assert any(item.selector.attributes or item.selector.relation for item in duplicated)

    def test_unknown_scenario_rejected(self):
        from homebench.tasks.generator import GenerationError

        with pytest.raises(GenerationError):
            generate_episode(generate_layout(1), "Gardening", 0)


class TestEpisodeIO:
    def test_round_trip(self, tmp_path):
        ep = generate_episode(generate_layout(1), SCENARIOS[1], 9)
        path = tmp_path / "ep.json"
        save_episode(ep, str(path))
        loaded = load_episode(str(path))
        assert canonical_json(episode_to_dict(loaded)) == canonical_json(episode_to_dict(ep))

    def test_truncated_file(self, tmp_path):
        ep = generate_episode(generate_layout(1), SCENARIOS[1], 9)
        path = tmp_path / "ep.json"
        save_episode(ep, str(path))
        text = path.read_text()
        path.write_text(text[: len(text) // 2])
        with pytest.raises(SchemaError):
            load_episode(str(path))

    def test_unknown_condition_kind_names_field(self, tmp_path):
        ep = generate_episode(generate_layout(1), SCENARIOS[1], 9)
        doc = episode_to_dict(ep)
        doc["checklist"][0]["condition"]["kind"] = "painted"
        with pytest.raises(SchemaError) as err:
            episode_from_dict(doc)
        assert "checklist[0]" in str(err.value) and "kind" in str(err.value)

    def test_tag_mismatch_rejected(self):
        with pytest.raises(SchemaError):
            ChecklistItem(ObjectSelector("mug"), Condition("sliced"), tag="PP")
