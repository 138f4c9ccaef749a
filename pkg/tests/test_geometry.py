"""Scene model: containment, segment collision, visibility, file format."""

import json

import numpy as np
import pytest

from inspecsim.errors import WorldFormatError
from inspecsim.geometry import (
    Aabb,
    Anchor,
    WorldModel,
    corner_anchor_layout,
    load_world,
    save_world,
    world_from_dict,
)

from conftest import make_world

CENTERED_BOX = Aabb((-0.5, -0.5, -0.5), (0.5, 0.5, 0.5))


def segment_hits_oracle(world, a, b, margin, samples=1000):
    """Dense point sampling stand-in for the slab test."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    for f in np.linspace(0.0, 1.0, samples):
        if world.point_in_inflated_target(a + f * (b - a), margin):
            return True
    return False


class TestAabb:
    def test_min_above_max_rejected(self):
        with pytest.raises(WorldFormatError):
            Aabb((0, 0, 0), (-1, 0, 0))

    def test_center_and_half_extents(self):
        box = Aabb((0, 0, 0), (2, 4, 6))
        assert np.allclose(box.center, [1, 2, 3])
        assert np.allclose(box.half_extents, [1, 2, 3])

    def test_inflated_is_minkowski_cube(self):
        box = CENTERED_BOX.inflated(0.15)
        assert np.allclose(box.min_corner, [-0.65] * 3)
        assert np.allclose(box.max_corner, [0.65] * 3)


class TestPointInInflatedTarget:
    @pytest.fixture
    def world(self):
        return make_world([CENTERED_BOX])

    def test_center_inside(self, world):
        assert world.point_in_inflated_target((0, 0, 0), 0.0)

    def test_just_outside_face(self, world):
        assert not world.point_in_inflated_target((0.6, 0, 0), 0.0)

    def test_margin_captures_nearby_point(self, world):
        # inflating to half-extent 0.65 swallows x=0.6
        assert world.point_in_inflated_target((0.6, 0, 0), 0.15)

    def test_face_boundary_is_inside(self, world):
        assert world.point_in_inflated_target((0.5, 0, 0), 0.0)

    def test_negative_margin_rejected(self, world):
        with pytest.raises(ValueError):
            world.point_in_inflated_target((0, 0, 0), -0.1)


class TestSegmentHitsTarget:
    @pytest.fixture
    def world(self):
        return make_world([CENTERED_BOX])

    def test_through_center(self, world):
        assert world.segment_hits_target((-2, 0, 0), (2, 0, 0), 0.0)

    def test_above_box(self, world):
        assert not world.segment_hits_target((-2, 0, 2), (2, 0, 2), 0.0)

    def test_inflation_brings_hit(self, world):
        # z=0.55 clears the bare box but not the 0.1-inflated one
        assert not world.segment_hits_target((-2, 0, 0.55), (2, 0, 0.55), 0.0)
        assert world.segment_hits_target((-2, 0, 0.55), (2, 0, 0.55), 0.1)
        assert segment_hits_oracle(world, (-2, 0, 0.55), (2, 0, 0.55), 0.1)

    def test_grazing_face_counts_as_hit(self, world):
        assert world.segment_hits_target((-2, 0, 0.5), (2, 0, 0.5), 0.0)

    def test_degenerate_segment_is_containment(self, world):
        assert world.segment_hits_target((0, 0, 0), (0, 0, 0), 0.0)
        assert not world.segment_hits_target((2, 2, 2), (2, 2, 2), 0.0)

    def test_outside_point_stays_outside_for_smaller_margin(self, world):
        rng = np.random.default_rng(7)
        for _ in range(200):
            p = rng.uniform(-2.5, 2.5, size=3)
            m = float(rng.uniform(0.0, 0.5))
            if not world.point_in_inflated_target(p, m):
                m_small = float(rng.uniform(0.0, m)) if m > 0 else 0.0
                assert not world.segment_hits_target(p, p, m_small)

    def test_matches_dense_sampling_oracle(self, world):
        rng = np.random.default_rng(123)
        disagreements = 0
        for _ in range(400):
            a = rng.uniform(-2.0, 2.0, size=3)
            b = rng.uniform(-2.0, 2.0, size=3)
            margin = float(rng.uniform(0.0, 0.3))
            slab = world.segment_hits_target(a, b, margin)
            dense = segment_hits_oracle(world, a, b, margin, samples=1000)
            if dense:
                # the sampled oracle found an inside point; slab must agree
                assert slab
            elif slab != dense:
                # slab may flag a crossing the 1000-sample grid stepped over;
                # verify the miss distance is within one sample spacing
                disagreements += 1
                assert segment_hits_oracle(world, a, b, margin, samples=20000)
        assert disagreements < 10


class TestRayVisibility:
    @pytest.fixture
    def world(self):
        return make_world([CENTERED_BOX])

    def test_direct_line(self, world):
        assert world.ray_visibility((2, 0, 0), (0.5, 0, 0))

    def test_box_between(self, world):
        assert not world.ray_visibility((-2, 0, 0), (0.5, 0, 0))

    def test_oblique_matches_dense_oracle(self, world):
        viewpoint = np.array([1.5, 1.5, 0.0])
        surface = np.array([0.5, 0.25, 0.0])
        expected = True  # segment stays outside the open box interior
        for f in np.linspace(0.0, 1.0, 1000):
            p = viewpoint + f * (surface - viewpoint)
            if CENTERED_BOX.contains_interior(p, shrink=1e-9):
                expected = False
                break
        assert world.ray_visibility(viewpoint, surface) == expected

    def test_grazing_own_face_not_occlusion(self, world):
        # sight line running inside the +x face plane
        assert world.ray_visibility((0.5, 2, 0), (0.5, 0, 0))

    def test_symmetry_off_surface(self, world):
        rng = np.random.default_rng(5)
        for _ in range(300):
            a = rng.uniform(-2.5, 2.5, size=3)
            b = rng.uniform(-2.5, 2.5, size=3)
            assert world.ray_visibility(a, b) == world.ray_visibility(b, a)


class TestWorldModel:
    def test_needs_four_anchors(self):
        bounds = Aabb((-1, -1, -1), (1, 1, 1))
        anchors = [Anchor(i, (0, 0, i)) for i in range(3)]
        with pytest.raises(WorldFormatError):
            WorldModel(target=[], anchors=anchors, bounds=bounds)

    def test_duplicate_anchor_ids_rejected(self):
        bounds = Aabb((-1, -1, -1), (1, 1, 1))
        anchors = [Anchor(0, (0, 0, 0)), Anchor(0, (1, 0, 0)), Anchor(2, (0, 1, 0)), Anchor(3, (0, 0, 1))]
        with pytest.raises(WorldFormatError):
            WorldModel(target=[], anchors=anchors, bounds=bounds)

    def test_target_outside_bounds_rejected(self):
        bounds = Aabb((-1, -1, -1), (1, 1, 1))
        with pytest.raises(WorldFormatError):
            make_world([Aabb((-2, 0, 0), (0, 0.5, 0.5))], bounds=bounds)

    def test_corner_anchor_layout(self):
        bounds = Aabb((-2, -3, 0), (2, 3, 4))
        anchors = corner_anchor_layout(bounds)
        assert len(anchors) == 8
        assert len({a.id for a in anchors}) == 8
        for a in anchors:
            assert bounds.contains(a.position)

    def test_in_bounds_shrink(self):
        world = make_world([CENTERED_BOX])
        assert world.in_bounds((3.0, 0, 0))
        assert not world.in_bounds((3.0, 0, 0), margin=0.1)


class TestWorldFile:
    def test_round_trip(self, tmp_path):
        world = make_world([CENTERED_BOX], safety_margin=0.17)
        path = tmp_path / "world.json"
        save_world(world, path)
        loaded = load_world(path)
        assert loaded.safety_margin == 0.17
        assert len(loaded.target) == 1
        assert np.allclose(loaded.target[0].min_corner, CENTERED_BOX.min_corner)
        assert len(loaded.anchors) == len(world.anchors)
        assert loaded.to_dict() == world.to_dict()

    def test_missing_key_rejected(self):
        with pytest.raises(WorldFormatError):
            world_from_dict({"bounds": {"min": [0, 0, 0], "max": [1, 1, 1]}})

    def test_bad_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        with pytest.raises(WorldFormatError):
            load_world(path)

    def test_schema_keys_exact(self):
        doc = make_world([CENTERED_BOX]).to_dict()
        assert set(doc.keys()) == {"bounds", "target", "anchors", "safety_margin"}
        assert set(doc["bounds"].keys()) == {"min", "max"}
        assert set(doc["anchors"][0].keys()) == {"id", "pos"}
        json.dumps(doc)  # serializable as-is
