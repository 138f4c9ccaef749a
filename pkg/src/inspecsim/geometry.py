"""Static scene model: target boxes, ranging anchors, flight bounds.

Everything here is loaded once and treated as immutable; all queries are
pure functions of the stored geometry. The inspection target is a set of
axis-aligned boxes, which keeps collision and visibility tests exact.
Lengths are meters in a right-handed frame with z up and the origin at
the positioning-system world origin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import WorldFormatError

# Shrink applied to box interiors for visibility tests so that rays grazing
# a face are not counted as occluded.
_FACE_EPS = 1e-9

DEFAULT_SAFETY_MARGIN = 0.20


def _vec3(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise WorldFormatError(f"{name} must be a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise WorldFormatError(f"{name} must be finite, got {value}")
    return arr


@dataclass
class Aabb:
    """Axis-aligned box given by its two extreme corners."""

    min_corner: np.ndarray
    max_corner: np.ndarray

    def __post_init__(self):
        self.min_corner = _vec3(self.min_corner, "min_corner")
        self.max_corner = _vec3(self.max_corner, "max_corner")
        if np.any(self.min_corner > self.max_corner):
            raise WorldFormatError(
                f"box min {self.min_corner.tolist()} exceeds max {self.max_corner.tolist()}"
            )

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.min_corner + self.max_corner)

    @property
    def half_extents(self) -> np.ndarray:
        return 0.5 * (self.max_corner - self.min_corner)

    def inflated(self, margin: float) -> "Aabb":
        """Minkowski sum with an axis-aligned cube of half-side ``margin``."""
        return Aabb(self.min_corner - margin, self.max_corner + margin)

    def contains(self, p, margin: float = 0.0) -> bool:
        """Closed containment test against the box inflated by ``margin``."""
        p = np.asarray(p, dtype=float)
        return bool(
            np.all(p >= self.min_corner - margin) and np.all(p <= self.max_corner + margin)
        )

    def contains_interior(self, p, shrink: float = _FACE_EPS) -> bool:
        """True if ``p`` is inside the box shrunk by ``shrink`` on every face."""
        p = np.asarray(p, dtype=float)
        return bool(
            np.all(p > self.min_corner + shrink) and np.all(p < self.max_corner - shrink)
        )

    def segment_intersection(self, a, b, margin: float = 0.0):
        """Clip segment a->b against the inflated box (slab method).

        Returns the parameter interval (t0, t1) within [0, 1] where the
        segment lies inside the closed inflated box, or None if it misses.
        Degenerate segments reduce to a containment test.
        """
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        lo = self.min_corner - margin
        hi = self.max_corner + margin
        d = b - a
        t0, t1 = 0.0, 1.0
        for k in range(3):
            if d[k] == 0.0:
                if a[k] < lo[k] or a[k] > hi[k]:
                    return None
            else:
                inv = 1.0 / d[k]
                ta = (lo[k] - a[k]) * inv
                tb = (hi[k] - a[k]) * inv
                if ta > tb:
                    ta, tb = tb, ta
                t0 = max(t0, ta)
                t1 = min(t1, tb)
                if t0 > t1:
                    return None
        return (t0, t1)

    def intersects_segment(self, a, b, margin: float = 0.0) -> bool:
        return self.segment_intersection(a, b, margin) is not None

    def to_dict(self) -> dict:
        return {"min": self.min_corner.tolist(), "max": self.max_corner.tolist()}


@dataclass
class Anchor:
    """Fixed ranging anchor with a known position."""

    id: int
    position: np.ndarray

    def __post_init__(self):
        self.id = int(self.id)
        self.position = _vec3(self.position, f"anchor {self.id} position")


@dataclass
class WorldModel:
    """Inspection scene: target boxes, anchors, and the flight volume.

    Immutable after construction and safe to share across tasks. At least
    four anchors are required so range-only position fixes are solvable
    in 3D.
    """

    target: list[Aabb]
    anchors: list[Anchor]
    bounds: Aabb
    safety_margin: float = DEFAULT_SAFETY_MARGIN
    name: str = field(default="world", compare=False)

    def __post_init__(self):
        if self.safety_margin < 0:
            raise WorldFormatError("safety_margin must be >= 0")
        if len(self.anchors) < 4:
            raise WorldFormatError(f"need at least 4 anchors, got {len(self.anchors)}")
        ids = [a.id for a in self.anchors]
        if len(set(ids)) != len(ids):
            raise WorldFormatError(f"anchor ids must be unique, got {ids}")
        for i, box in enumerate(self.target):
            if not (
                np.all(box.min_corner >= self.bounds.min_corner)
                and np.all(box.max_corner <= self.bounds.max_corner)
            ):
                raise WorldFormatError(f"target box {i} lies outside the flight bounds")

    # -- geometric queries ------------------------------------------------

    def point_in_inflated_target(self, p, margin: float) -> bool:
        """True iff ``p`` lies in any target box inflated by ``margin``."""
        if margin < 0:
            raise ValueError("margin must be >= 0")
        return any(box.contains(p, margin) for box in self.target)

    def segment_hits_target(self, a, b, margin: float = 0.0) -> bool:
        """True iff the closed segment a->b intersects any inflated target box."""
        return any(box.intersects_segment(a, b, margin) for box in self.target)

    def ray_visibility(self, viewpoint, surface_point) -> bool:
        """True iff the sight line does not pass through any box interior.

        ``surface_point`` is expected to lie on a target face. Each box is
        shrunk by a small epsilon before the test so that rays grazing a
        face, including the face owning the surface point, do not count
        as occlusions.
        """
        a = np.asarray(viewpoint, dtype=float)
        b = np.asarray(surface_point, dtype=float)
        for box in self.target:
            if box.intersects_segment(a, b, margin=-_FACE_EPS):
                return False
        return True

    def in_bounds(self, p, margin: float = 0.0) -> bool:
        """Closed containment in the flight volume, shrunk by ``margin``."""
        return self.bounds.contains(p, -margin)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "bounds": self.bounds.to_dict(),
            "target": [box.to_dict() for box in self.target],
            "anchors": [{"id": a.id, "pos": a.position.tolist()} for a in self.anchors],
            "safety_margin": self.safety_margin,
        }


def world_from_dict(doc: dict, name: str = "world") -> WorldModel:
    """Build a WorldModel from the world-file JSON structure."""
    if not isinstance(doc, dict):
        raise WorldFormatError("world document must be a JSON object")
    for key in ("bounds", "target", "anchors"):
        if key not in doc:
            raise WorldFormatError(f"world document missing required key '{key}'")
    try:
        bounds = Aabb(doc["bounds"]["min"], doc["bounds"]["max"])
        target = [Aabb(b["min"], b["max"]) for b in doc["target"]]
        anchors = [Anchor(a["id"], a["pos"]) for a in doc["anchors"]]
    except (KeyError, TypeError) as exc:
        raise WorldFormatError(f"malformed world document: {exc}") from exc
    margin = float(doc.get("safety_margin", DEFAULT_SAFETY_MARGIN))
    return WorldModel(target=target, anchors=anchors, bounds=bounds,
                      safety_margin=margin, name=name)


def load_world(path) -> WorldModel:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise WorldFormatError(f"{path}: invalid JSON: {exc}") from exc
    return world_from_dict(doc, name=str(path))


def save_world(world: WorldModel, path) -> None:
    with open(path, "w") as fh:
        json.dump(world.to_dict(), fh, indent=2)
        fh.write("\n")


def corner_anchor_layout(bounds: Aabb) -> list[Anchor]:
    """Eight anchors at the corners of the bounds box (perimeter placement)."""
    lo, hi = bounds.min_corner, bounds.max_corner
    anchors = []
    i = 0
    for x in (lo[0], hi[0]):
        for y in (lo[1], hi[1]):
            for z in (lo[2], hi[2]):
                anchors.append(Anchor(i, np.array([x, y, z])))
                i += 1
    return anchors
