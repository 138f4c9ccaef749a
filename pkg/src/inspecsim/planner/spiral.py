"""Spiral inspection path: stacked rings around the target footprint."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InfeasibleStandoff, WorldFormatError
from ..geometry import WorldModel
from ..paths import InspectionPath, Waypoint4D, look_at_yaw
from . import validate


@dataclass
class SpiralParams:
    standoff: float
    z_min: float
    z_max: float
    vertical_interval: float
    points_per_ring: int = 8
    direction: str = "ccw"

    def __post_init__(self):
        if self.standoff <= 0:
            raise WorldFormatError("standoff must be > 0")
        if self.z_min > self.z_max:
            raise WorldFormatError("z_min must not exceed z_max")
        if self.vertical_interval <= 0:
            raise WorldFormatError("vertical_interval must be > 0")
        if self.points_per_ring < 4:
            raise WorldFormatError("points_per_ring must be >= 4")
        if self.direction not in ("ccw", "cw"):
            raise WorldFormatError("direction must be 'ccw' or 'cw'")


def footprint_circle(world: WorldModel) -> tuple[float, float, float]:
    """Center and circumscribed radius of the target's xy footprint.

    The center is the middle of the footprint's bounding rectangle; the
    radius reaches the farthest xy corner of any target box.
    """
    if not world.target:
        raise WorldFormatError("world has no target boxes")
    xs = [c for box in world.target for c in (box.min_corner[0], box.max_corner[0])]
    ys = [c for box in world.target for c in (box.min_corner[1], box.max_corner[1])]
    cx = 0.5 * (min(xs) + max(xs))
    cy = 0.5 * (min(ys) + max(ys))
    radius = 0.0
    for box in world.target:
        for x in (box.min_corner[0], box.max_corner[0]):
            for y in (box.min_corner[1], box.max_corner[1]):
                radius = max(radius, math.hypot(x - cx, y - cy))
    return cx, cy, radius


def ring_count(params: SpiralParams) -> int:
    return int(math.floor((params.z_max - params.z_min) / params.vertical_interval)) + 1


def generate_spiral(world: WorldModel, params: SpiralParams) -> InspectionPath:
    """Build the ring-stack path and verify it is collision-free.

    Rings are regular polygons on the circle of radius footprint radius
    plus standoff, every waypoint yawed toward the vertical axis through
    the footprint center, consecutive rings joined last point to first.
    """
    if params.standoff < world.safety_margin:
        raise InfeasibleStandoff(
            f"standoff {params.standoff} is below the safety margin {world.safety_margin}"
        )
    cx, cy, footprint_radius = footprint_circle(world)
    radius = footprint_radius + params.standoff
    n_rings = ring_count(params)
    n_points = params.points_per_ring
    sign = 1.0 if params.direction == "ccw" else -1.0

    waypoints: list[Waypoint4D] = []
    margin = world.safety_margin
    for ring in range(n_rings):
        z = params.z_min + ring * params.vertical_interval
        for j in range(n_points):
            theta = sign * j * 2.0 * math.pi / n_points
            x = cx + radius * math.cos(theta)
            y = cy + radius * math.sin(theta)
            p = np.array([x, y, z])
            if not world.in_bounds(p):
                raise InfeasibleStandoff(
                    f"ring point at z={z:.3f} leaves the flight volume"
                )
            if world.point_in_inflated_target(p, margin):
                raise InfeasibleStandoff(
                    f"ring point at z={z:.3f} collides at margin {margin}"
                )
            waypoints.append(Waypoint4D(x, y, z, look_at_yaw((x, y), (cx, cy))))

    for a, b in zip(waypoints, waypoints[1:]):
        if world.segment_hits_target(a.position, b.position, margin):
            raise InfeasibleStandoff(
                "ring chord or ring-to-ring climb collides at the safety margin"
            )

    coverage = validate.coverage_fraction(waypoints, world)
    return InspectionPath(waypoints=waypoints, planner_name="spiral", coverage=coverage)
