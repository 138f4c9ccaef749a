"""Independent checks for planner output.

These functions re-derive every constraint from the world model rather
than trusting planner bookkeeping, so tests can replay any emitted path
or viewpoint through them.
"""

from __future__ import annotations

import math

import numpy as np

from ..geometry import WorldModel
from ..paths import InspectionPath, Waypoint4D, look_at_yaw
from .facets import Facet, subdivide_faces

# slack for boundary comparisons so exact-band constructions do not flap
_TOL = 1e-9

DEFAULT_D_MIN = 0.4
DEFAULT_D_MAX = 1.2
DEFAULT_MAX_INCIDENCE = math.radians(60.0)
DEFAULT_COVERAGE_PITCH = 0.5


def viewpoint_failures(
    w: Waypoint4D,
    facet: Facet,
    world: WorldModel,
    d_min: float,
    d_max: float,
    max_incidence: float,
) -> list[str]:
    """List every violated viewpoint condition; empty means valid."""
    failures: list[str] = []
    offset = w.position - facet.center
    dist = float(np.linalg.norm(offset))
    if dist < d_min - _TOL or dist > d_max + _TOL:
        failures.append(f"distance {dist:.6f} outside [{d_min}, {d_max}]")
    if dist > 0.0:
        cos_inc = float(np.dot(offset, facet.normal)) / dist
        angle = math.acos(min(1.0, max(-1.0, cos_inc)))
        if angle > max_incidence + _TOL:
            failures.append(f"incidence {angle:.6f} exceeds {max_incidence:.6f}")
    else:
        failures.append("viewpoint coincides with facet center")
    if not world.ray_visibility(w.position, facet.center):
        failures.append("facet center not visible")
    if world.point_in_inflated_target(w.position, world.safety_margin):
        failures.append("inside inflated target")
    if not world.in_bounds(w.position):
        failures.append("outside world bounds")
    return failures


def check_viewpoint(
    w: Waypoint4D,
    facet: Facet,
    world: WorldModel,
    d_min: float,
    d_max: float,
    max_incidence: float,
) -> bool:
    return not viewpoint_failures(w, facet, world, d_min, d_max, max_incidence)


def path_violations(path: InspectionPath, world: WorldModel) -> list[str]:
    """Re-verify the collision-free and yaw invariants of a path."""
    failures: list[str] = []
    margin = world.safety_margin
    for idx, wp in enumerate(path.waypoints):
        if world.point_in_inflated_target(wp.position, margin):
            failures.append(f"waypoint {idx} inside inflated target")
        if not world.in_bounds(wp.position):
            failures.append(f"waypoint {idx} outside bounds")
        if not (-math.pi < wp.yaw <= math.pi + _TOL):
            failures.append(f"waypoint {idx} yaw {wp.yaw} not normalized")
    for idx in range(len(path.waypoints) - 1):
        a = path.waypoints[idx].position
        b = path.waypoints[idx + 1].position
        if world.segment_hits_target(a, b, margin):
            failures.append(f"segment {idx}->{idx + 1} hits inflated target")
    if not 0.0 <= path.coverage <= 1.0:
        failures.append(f"coverage {path.coverage} outside [0, 1]")
    return failures


def check_inspection_path(path: InspectionPath, world: WorldModel) -> bool:
    return not path_violations(path, world)


def coverage_fraction(
    waypoints: list[Waypoint4D],
    world: WorldModel,
    d_min: float = DEFAULT_D_MIN,
    d_max: float = DEFAULT_D_MAX,
    max_incidence: float = DEFAULT_MAX_INCIDENCE,
    pitch: float = DEFAULT_COVERAGE_PITCH,
) -> float:
    """Fraction of target facets seen by at least one waypoint."""
    facets = subdivide_faces(world, pitch)
    if not facets:
        return 0.0
    seen = 0
    for facet in facets:
        if any(
            check_viewpoint(wp, facet, world, d_min, d_max, max_incidence)
            for wp in waypoints
        ):
            seen += 1
    return seen / len(facets)


def facet_yaw(w: Waypoint4D, facet: Facet) -> float:
    """Yaw a waypoint should carry to face the facet center."""
    return look_at_yaw(w.position, facet.center)
