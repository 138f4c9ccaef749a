"""Shared scene fixtures used across the test suite."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from inspecsim.geometry import Aabb, Anchor, WorldModel, corner_anchor_layout

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "inspecsim" / "data"


def make_world(
    target: list[Aabb],
    bounds: Aabb | None = None,
    safety_margin: float = 0.2,
    anchors: list[Anchor] | None = None,
) -> WorldModel:
    if bounds is None:
        bounds = Aabb((-3.0, -3.0, -3.0), (3.0, 3.0, 3.0))
    if anchors is None:
        anchors = corner_anchor_layout(bounds)
    return WorldModel(
        target=target, anchors=anchors, bounds=bounds, safety_margin=safety_margin
    )


@pytest.fixture
def unit_cube_world() -> WorldModel:
    """One 1 m cube centered at the origin inside a roomy volume."""
    return make_world([Aabb((-0.5, -0.5, -0.5), (0.5, 0.5, 0.5))])


@pytest.fixture
def floor_box_world() -> WorldModel:
    """A 1 x 1 x 0.5 box resting on the floor of a z >= 0 volume."""
    return make_world(
        [Aabb((-0.5, -0.5, 0.0), (0.5, 0.5, 0.5))],
        bounds=Aabb((-3.0, -3.0, 0.0), (3.0, 3.0, 2.5)),
    )


@pytest.fixture
def demo_world_path() -> Path:
    return DATA_DIR / "world_demo.json"


@pytest.fixture
def spiral_scenario_path() -> Path:
    return DATA_DIR / "scenario_spiral_demo.json"


@pytest.fixture
def sampling_scenario_path() -> Path:
    return DATA_DIR / "scenario_sampling_demo.json"


def random_box_world(rng: np.random.Generator) -> WorldModel:
    """Random 1-3 box target inside fixed generous bounds."""
    bounds = Aabb((-4.0, -4.0, 0.0), (4.0, 4.0, 3.0))
    n_boxes = int(rng.integers(1, 4))
    boxes = []
    for _ in range(n_boxes):
        cx, cy = rng.uniform(-0.8, 0.8, size=2)
        sx, sy = rng.uniform(0.3, 1.4, size=2)
        height = rng.uniform(0.4, 1.5)
        boxes.append(
            Aabb(
                (cx - sx / 2.0, cy - sy / 2.0, 0.0),
                (cx + sx / 2.0, cy + sy / 2.0, height),
            )
        )
    margin = float(rng.uniform(0.1, 0.2))
    return make_world(boxes, bounds=bounds, safety_margin=margin)
