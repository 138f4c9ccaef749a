"""Waypoint primitives and the inspection-path file format."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import WorldFormatError


def normalize_yaw(yaw: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    y = yaw % math.tau
    if y > math.pi:
        y -= math.tau
    return y


@dataclass(frozen=True)
class Waypoint4D:
    """Commanded pose sample: position plus heading."""

    x: float
    y: float
    z: float
    yaw: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", float(self.z))
        object.__setattr__(self, "yaw", normalize_yaw(float(self.yaw)))

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def distance_to(self, other: "Waypoint4D") -> float:
        return math.dist((self.x, self.y, self.z), (other.x, other.y, other.z))

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "z": self.z, "yaw": self.yaw}

    @classmethod
    def from_dict(cls, doc: dict) -> "Waypoint4D":
        return cls(doc["x"], doc["y"], doc["z"], doc.get("yaw", 0.0))


def look_at_yaw(from_pos, to_pos) -> float:
    """Heading that points the nose from one position toward another."""
    dx = float(to_pos[0]) - float(from_pos[0])
    dy = float(to_pos[1]) - float(from_pos[1])
    return normalize_yaw(math.atan2(dy, dx))


@dataclass
class InspectionPath:
    """Ordered waypoint sequence emitted by a planner.

    ``coverage`` is the fraction of target facets with a satisfying
    viewpoint, in [0, 1].
    """

    waypoints: list[Waypoint4D]
    planner_name: str
    coverage: float = field(default=0.0)

    def __post_init__(self):
        self.coverage = float(self.coverage)
        if not 0.0 <= self.coverage <= 1.0:
            raise WorldFormatError(f"coverage must be in [0, 1], got {self.coverage}")

    def __len__(self) -> int:
        return len(self.waypoints)

    def length(self) -> float:
        """Total Euclidean length of the waypoint polyline."""
        return sum(
            a.distance_to(b) for a, b in zip(self.waypoints, self.waypoints[1:])
        )

    def to_dict(self) -> dict:
        return {
            "planner": self.planner_name,
            "waypoints": [wp.to_dict() for wp in self.waypoints],
            "coverage": self.coverage,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "InspectionPath":
        try:
            return cls(
                waypoints=[Waypoint4D.from_dict(w) for w in doc["waypoints"]],
                planner_name=doc["planner"],
                coverage=doc.get("coverage", 0.0),
            )
        except (KeyError, TypeError) as exc:
            raise WorldFormatError(f"malformed path document: {exc}") from exc


def densify(waypoints: list[Waypoint4D], max_leg: float) -> list[Waypoint4D]:
    """Split legs longer than max_leg by inserting evenly spaced stops.

    Keeps every original waypoint and the total polyline length; the
    inserted stops carry the destination yaw. Short legs pace the
    waypoint-feedback controller so transit error stays bounded.
    """
    if max_leg <= 0.0:
        raise WorldFormatError("max_leg must be positive")
    if len(waypoints) < 2:
        return list(waypoints)
    out = [waypoints[0]]
    for a, b in zip(waypoints, waypoints[1:]):
        leg = a.distance_to(b)
        pieces = max(1, math.ceil(leg / max_leg - 1e-12))
        for i in range(1, pieces):
            f = i / pieces
            out.append(
                Waypoint4D(
                    a.x + f * (b.x - a.x),
                    a.y + f * (b.y - a.y),
                    a.z + f * (b.z - a.z),
                    b.yaw,
                )
            )
        out.append(b)
    return out


def load_path(path) -> InspectionPath:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise WorldFormatError(f"{path}: invalid JSON: {exc}") from exc
    return InspectionPath.from_dict(doc)


def save_path(inspection_path: InspectionPath, path) -> None:
    with open(path, "w") as fh:
        json.dump(inspection_path.to_dict(), fh, indent=2)
        fh.write("\n")
