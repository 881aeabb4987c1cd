import random

import pytest
from hypothesis import given, strategies as st

from homebench.grid import Pose, snap_cardinal
from homebench.jsonutil import canonical_json
from homebench.world import (
    Action,
    ErrorCode,
    apply_action,
    build_world,
    layout_from_dict,
    layout_to_dict,
    render_observation,
    validate_world,
    visibility,
    world_from_dict,
    world_to_dict,
)
from homebench.world.observe import UnknownObjectError

from conftest import build, make_object, single_room_layout


class TestPose:
    def test_lattice_and_quantum(self):
        p = Pose.at(1.00, 1.00, 0, 0)
        assert (p.x, p.z) == (1.00, 1.00)
        with pytest.raises(ValueError):
            Pose.at(1.02, 1.00)
        with pytest.raises(ValueError):
            Pose(1, 1, 45, 0)
        with pytest.raises(ValueError):
            Pose(1, 1, 0, 90)

    def test_cardinal_snap(self):
        assert snap_cardinal(0) == (0, 1)
        assert snap_cardinal(30) == (0, 1)
        assert snap_cardinal(60) == (1, 0)
        assert snap_cardinal(90) == (1, 0)
        assert snap_cardinal(150) == (0, -1)
        assert snap_cardinal(330) == (0, 1)


class TestNavigation:
    def test_move_ahead_one_quantum(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose.at(1.00, 1.00, 0, 0)
        _, r = apply_action(w, Action("MoveAhead"))
        assert r.ok
        assert (w.agent.pose.x, w.agent.pose.z) == (1.00, 1.05)

    def test_move_into_wall_collides(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(1, 1, 180, 0)  # facing -z toward the wall at z=0
        _, r = apply_action(w, Action("MoveAhead"))
        assert not r.ok and r.error is ErrorCode.COLLISION
        assert w.agent.pose.cell == (1, 1)

    def test_move_into_furniture_collides(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(22, 43, 0, 0)  # one cell south of the countertop
        _, r = apply_action(w, Action("MoveAhead"))
        assert not r.ok and r.error is ErrorCode.COLLISION

    def test_rotation_wraps(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(5, 5, 330, 0)
        apply_action(w, Action("RotateRight"))
        assert w.agent.pose.heading == 0
        apply_action(w, Action("RotateLeft"))
        assert w.agent.pose.heading == 330

    def test_pitch_limits(self, kitchen_world):
        w = kitchen_world
        for _ in range(2):
            _, r = apply_action(w, Action("LookUp"))
            assert r.ok
        _, r = apply_action(w, Action("LookUp"))
        assert not r.ok and r.error is ErrorCode.COLLISION
        assert w.agent.pose.pitch == 60


class TestManipulation:
    def test_toggle_flip(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(6, 44, 270, 0)
        _, r = apply_action(w, Action("ToggleOn", "lamp_1"))
        assert r.ok
        assert w.objects["lamp_1"].states.toggled_on is True
        _, r = apply_action(w, Action("ToggleOn", "lamp_1"))
        assert not r.ok and r.error is ErrorCode.INVALID_TARGET

    def test_pick_with_full_hand(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(22, 43, 0, 0)
        _, r = apply_action(w, Action("Pick", "mug_1"))
        assert r.ok and w.agent.held_object == "mug_1"
        w.agent.pose = Pose(26, 43, 0, 0)
        before = world_to_dict(w)
        _, r = apply_action(w, Action("Pick", "knife_1"))
        assert not r.ok and r.error is ErrorCode.HAND_FULL
        after = world_to_dict(w)
        # unchanged except the action counter
        assert after["agent"]["totalActions"] == before["agent"]["totalActions"] + 1
        after["agent"]["totalActions"] = before["agent"]["totalActions"]
        assert canonical_json(after) == canonical_json(before)

    def test_slice_held_target_needs_surface(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(30, 43, 0, 0)
        apply_action(w, Action("Pick", "bread_1"))
        _, r = apply_action(w, Action("Slice", "bread_1"))
        assert not r.ok and r.error is ErrorCode.INVALID_TARGET

    def test_slice_requires_knife(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(30, 43, 0, 0)
        _, r = apply_action(w, Action("Slice", "bread_1"))
        assert not r.ok and r.error is ErrorCode.NO_KNIFE
        w.agent.pose = Pose(26, 43, 0, 0)
        assert apply_action(w, Action("Pick", "knife_1"))[1].ok
        w.agent.pose = Pose(30, 43, 0, 0)
        _, r = apply_action(w, Action("Slice", "bread_1"))
        assert r.ok and w.objects["bread_1"].states.sliced is True
        _, r = apply_action(w, Action("Slice", "bread_1"))
        assert not r.ok  # sliced objects cannot revert

    def test_pick_from_closed_receptacle(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(12, 23, 270, 0)
        _, r = apply_action(w, Action("Pick", "fork_1"))
        assert not r.ok and r.error is ErrorCode.CLOSED_RECEPTACLE
        _, r = apply_action(w, Action("Open", "drawer_1"))
        assert r.ok
        _, r = apply_action(w, Action("Pick", "fork_1"))
        assert r.ok

    def test_place_into_closed(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(22, 43, 0, 0)
        assert apply_action(w, Action("Pick", "mug_1"))[1].ok
        w.agent.pose = Pose(12, 23, 270, 0)
        _, r = apply_action(w, Action("Place", "drawer_1"))
        assert not r.ok and r.error is ErrorCode.CLOSED_RECEPTACLE
        apply_action(w, Action("Open", "drawer_1"))
        _, r = apply_action(w, Action("Place", "drawer_1"))
        assert r.ok
        assert w.objects["mug_1"].states.parent_receptacle == "drawer_1"

    def test_place_without_held(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(26, 43, 0, 0)
        _, r = apply_action(w, Action("Place", "counter_1"))
        assert not r.ok and r.error is ErrorCode.HAND_EMPTY

    def test_out_of_reach(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(22, 5, 0, 0)  # far from the counter, still facing it
        _, r = apply_action(w, Action("Pick", "mug_1"))
        assert not r.ok and r.error is ErrorCode.NOT_REACHABLE

    def test_unknown_target(self, kitchen_world):
        _, r = apply_action(kitchen_world, Action("Pick", "ghost_9"))
        assert not r.ok and r.error is ErrorCode.INVALID_TARGET

    def test_containment_cycle_rejected(self, kitchen_world):
        w = kitchen_world
        pot = make_object("box_9", "box", cell=(24, 46), affordances=("pickupable", "receptacle", "flat-surface"), parent="counter_1")
        w.objects["box_9"] = pot
        w.contents["box_9"] = []
        w.contents["counter_1"].append("box_9")
        w.category_index.setdefault("box", []).append("box_9")
        w.agent.pose = Pose(24, 43, 0, 0)
        assert apply_action(w, Action("Pick", "box_9"))[1].ok
        _, r = apply_action(w, Action("Place", "box_9"))
        assert not r.ok and r.error is ErrorCode.INVALID_TARGET


class TestDerivedStates:
    def test_cook_on_powered_stove(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(34, 43, 0, 0)
        apply_action(w, Action("Pick", "potato_1"))
        w.agent.pose = Pose(43, 24, 90, 0)
        assert apply_action(w, Action("Place", "stove_1"))[1].ok
        assert w.objects["potato_1"].states.cooked is False
        assert apply_action(w, Action("ToggleOn", "stove_1"))[1].ok
        assert w.objects["potato_1"].states.cooked is True

    def test_fill_in_running_sink(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(43, 36, 90, 0)
        assert apply_action(w, Action("ToggleOn", "sink_1"))[1].ok
        w.agent.pose = Pose(22, 43, 0, 0)
        assert apply_action(w, Action("Pick", "mug_1"))[1].ok
        w.agent.pose = Pose(43, 36, 90, 0)
        assert apply_action(w, Action("Place", "sink_1"))[1].ok
        assert w.objects["mug_1"].states.filled_with == "water"


class TestVisibility:
    def test_ahead_in_open_room(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(22, 40, 0, 0)
        assert visibility(w, "mug_1") is True

    def test_out_of_cone(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(22, 40, 180, 0)  # facing away
        assert visibility(w, "mug_1") is False

    def test_closed_container_hides_contents(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(12, 23, 270, 0)
        assert visibility(w, "fork_1") is False
        apply_action(w, Action("Open", "drawer_1"))
        assert visibility(w, "fork_1") is True

    def test_wall_occludes(self):
        from conftest import two_room_layout

        table = make_object("t1", "desk", rect=(50, 18, 55, 24), affordances=("receptacle", "flat-surface"))
        w = build(two_room_layout([table]))
        w.agent.pose = Pose(10, 21, 90, 0)  # straight ray crosses the dividing wall
        assert visibility(w, "t1") is False

    def test_unknown_object(self, kitchen_world):
        with pytest.raises(UnknownObjectError):
            visibility(kitchen_world, "nope")

    def test_held_not_visible(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(26, 43, 0, 0)
        apply_action(w, Action("Pick", "mug_1"))
        assert visibility(w, "mug_1") is False

    def test_open_is_monotone(self, generated_world):
        w = generated_world
        rng = random.Random(11)
        cells = sorted(w.walkable_cells())
        w.agent.pose = Pose(*rng.choice(cells), rng.choice((0, 90, 180, 270)), 0)
        before = {v.id for v in render_observation(w).visible}
        for oid in sorted(w.objects):
            if w.objects[oid].states.open is False:
                w.objects[oid].states.open = True
        after = {v.id for v in render_observation(w).visible}
        assert before <= after


class TestObservation:
    def test_matches_per_object_predicate(self, generated_world):
        w = generated_world
        rng = random.Random(5)
        cells = sorted(w.walkable_cells())
        for _ in range(20):
            w.agent.pose = Pose(*rng.choice(cells), rng.choice((0, 90, 180, 270)), 0)
            expected = {oid for oid in w.objects if visibility(w, oid)}
            obs = render_observation(w)
            assert {v.id for v in obs.visible} == expected
            assert all(v.mask_area >= 1.0 for v in obs.visible)

    def test_distinct_duplicates_preserved(self, kitchen_world):
        w = kitchen_world
        twin = make_object("mug_2", "mug", cell=(38, 46), attributes=("red",), affordances=("pickupable", "fillable"), parent="counter_1")
        w.objects["mug_2"] = twin
        w.contents["counter_1"].append("mug_2")
        w.agent.pose = Pose(30, 30, 0, 0)
        obs = render_observation(w)
        mugs = [v for v in obs.visible if v.category == "mug"]
        assert len(mugs) == 2 and {m.id for m in mugs} == {"mug_1", "mug_2"}
        assert all("red" in m.attributes for m in mugs)

    def test_local_occupancy_patch(self, kitchen_world):
        w = kitchen_world
        w.agent.pose = Pose(22, 43, 0, 0)
        occ = render_observation(w).local_occupancy
        assert occ["w"] == occ["h"] == 21
        row = occ["rows"][43 - occ["z0"]]
        assert row[22 - occ["x0"]] == "0"  # agent's own cell walkable
        row_counter = occ["rows"][44 - occ["z0"]]
        assert row_counter[22 - occ["x0"]] == "1"  # counter cell blocked


class TestValidation:
    def test_fresh_world_clean(self, generated_world):
        assert validate_world(generated_world) == []

    def test_overlap_detected(self, kitchen_world):
        w = kitchen_world
        clash = make_object("x_1", "box", rect=(21, 45, 23, 47), affordances=("receptacle",))
        w.objects["x_1"] = clash
        kinds = {v.kind for v in validate_world(w)}
        assert "OverlapViolation" in kinds

    def test_dangling_reference(self, kitchen_world):
        w = kitchen_world
        w.objects["mug_1"].states.parent_receptacle = "missing_1"
        kinds = {v.kind for v in validate_world(w)}
        assert "DanglingReference" in kinds


class TestSnapshots:
    def test_round_trip_byte_stable(self, generated_world):
        doc = world_to_dict(generated_world)
        text = canonical_json(doc)
        rebuilt = world_from_dict(doc)
        assert canonical_json(world_to_dict(rebuilt)) == text

    def test_layout_round_trip(self, generated_world):
        doc = layout_to_dict(generated_world.layout)
        rebuilt = layout_from_dict(doc)
        assert canonical_json(layout_to_dict(rebuilt)) == canonical_json(doc)


@given(st.integers(0, 3), st.integers(0, 11))
def test_failed_actions_state_neutral(move_idx, heading_idx):
    """A blocked move changes nothing but the action counter."""
    objects = [make_object("c_1", "countertop", rect=(3, 3, 8, 8), affordances=("receptacle", "flat-surface"))]
    w = build(single_room_layout(objects, side=10, agent=(5, 2, 0)))
    w.agent.pose = Pose(2, 2, heading_idx * 30, 0)
    before = canonical_json(world_to_dict(w))
    name = ["MoveAhead", "MoveBack", "MoveLeft", "MoveRight"][move_idx]
    _, result = apply_action(w, Action(name))
    after = canonical_json(world_to_dict(w))
    if result.ok:
        assert before != after
    else:
        assert before.replace('"totalActions":0', '"totalActions":1') == after


def test_determinism_identical_runs(generated_world):
    from homebench.tasks.layoutgen import generate_layout

    layout = generate_layout(3)
    rng = random.Random(9)
    actions = []
    for _ in range(300):
        name = rng.choice(["MoveAhead", "MoveBack", "RotateLeft", "RotateRight", "MoveLeft", "MoveRight"])
        actions.append(Action(name))
    finals = []
    for _ in range(2):
        w = build_world(layout)
        for a in actions:
            apply_action(w, a)
        finals.append(canonical_json(world_to_dict(w)))
    assert finals[0] == finals[1]
