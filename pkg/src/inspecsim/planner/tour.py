"""Open-tour construction over viewpoints: nearest neighbor plus 2-opt.

Edges whose straight segment would cross the (inflated) target carry a
10x cost penalty; they are still traversable because the final path
detours over the obstruction.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..errors import NoRouteFound
from ..geometry import WorldModel
from ..paths import Waypoint4D

COLLISION_PENALTY = 10.0
_IMPROVE_EPS = 1e-12
# clearance added above the safety margin when lifting over a box
_CLEAR_EPS = 1e-6
# instances this small are solved exactly; 2-opt is a heuristic beyond that
_EXACT_LIMIT = 8


def cost_matrix(points: list[Waypoint4D], world: WorldModel) -> np.ndarray:
    """Pairwise Euclidean costs with the collision penalty applied."""
    n = len(points)
    pos = np.array([[p.x, p.y, p.z] for p in points])
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    cost = dist.copy()
    margin = world.safety_margin
    for i in range(n):
        for j in range(i + 1, n):
            if world.segment_hits_target(pos[i], pos[j], margin):
                cost[i, j] = cost[j, i] = dist[i, j] * COLLISION_PENALTY
    return cost


def tour_length(cost: np.ndarray, order: list[int]) -> float:
    return float(sum(cost[order[k], order[k + 1]] for k in range(len(order) - 1)))


def nearest_neighbor_order(cost: np.ndarray, start: int) -> list[int]:
    n = cost.shape[0]
    order = [start]
    remaining = set(range(n)) - {start}
    current = start
    while remaining:
        candidates = sorted(remaining)
        nxt = min(candidates, key=lambda j: cost[current, j])
        order.append(nxt)
        remaining.remove(nxt)
        current = nxt
    return order


def two_opt(cost: np.ndarray, order: list[int]) -> list[int]:
    """Improve an open tour by segment reversal until no swap helps.

    The first stop stays fixed; a move reverses order[i..j]. Because the
    cost matrix is symmetric only the two boundary edges change.
    """
    order = list(order)
    n = len(order)
    if n < 3:
        return order
    improved = True
    while improved:
        improved = False
        best_delta = -_IMPROVE_EPS
        best_move = None
        for i in range(1, n - 1):
            before = cost[order[i - 1], order[i]]
            for j in range(i + 1, n):
                delta = cost[order[i - 1], order[j]] - before
                if j + 1 < n:
                    delta += cost[order[i], order[j + 1]] - cost[order[j], order[j + 1]]
                if delta < best_delta:
                    best_delta = delta
                    best_move = (i, j)
        if best_move is not None:
            i, j = best_move
            order[i : j + 1] = reversed(order[i : j + 1])
            improved = True
    return order


def exact_order(cost: np.ndarray, start: int) -> list[int]:
    """Optimal open tour from start by exhaustive permutation search."""
    rest = [i for i in range(cost.shape[0]) if i != start]
    best_order = [start, *rest]
    best_length = tour_length(cost, best_order)
    for perm in itertools.permutations(rest):
        order = [start, *perm]
        length = tour_length(cost, order)
        if length < best_length - _IMPROVE_EPS:
            best_length = length
            best_order = order
    return list(best_order)


def plan_tour(viewpoints: list[Waypoint4D], world: WorldModel) -> list[int]:
    """Order viewpoints into an open tour starting nearest the world origin.

    Small instances are solved exactly; larger ones use nearest neighbor
    refined by 2-opt. Either way the result admits no improving 2-opt
    swap and is never longer than the nearest-neighbor tour.
    """
    if not viewpoints:
        raise ValueError("plan_tour requires at least one viewpoint")
    if len(viewpoints) == 1:
        return [0]
    start = min(
        range(len(viewpoints)),
        key=lambda i: math.hypot(viewpoints[i].x, viewpoints[i].y, viewpoints[i].z),
    )
    cost = cost_matrix(viewpoints, world)
    if len(viewpoints) <= _EXACT_LIMIT:
        return exact_order(cost, start)
    return two_opt(cost, nearest_neighbor_order(cost, start))


def route_detour(a: Waypoint4D, b: Waypoint4D, world: WorldModel) -> list[Waypoint4D]:
    """Connect two collision-free waypoints, lifting over obstructions.

    A blocked leg climbs to just above the tallest obstructing box (plus
    the safety margin), traverses, and descends. Raises NoRouteFound when
    the required altitude leaves the flight volume or the lift itself is
    blocked.
    """
    if a == b:
        return [a]
    margin = world.safety_margin
    pa, pb = a.position, b.position
    if not world.segment_hits_target(pa, pb, margin):
        return [a, b]

    blockers = [
        box for box in world.target if box.intersects_segment(pa, pb, margin)
    ]
    z_clear = max(box.max_corner[2] for box in blockers) + margin + _CLEAR_EPS
    for attempt_z in (
        z_clear,
        max(box.max_corner[2] for box in world.target) + margin + _CLEAR_EPS,
    ):
        if attempt_z > world.bounds.max_corner[2]:
            raise NoRouteFound(
                f"lift altitude {attempt_z:.3f} exceeds the flight volume top"
            )
        lift_a = Waypoint4D(a.x, a.y, attempt_z, b.yaw)
        lift_b = Waypoint4D(b.x, b.y, attempt_z, b.yaw)
        candidate = [a, lift_a, lift_b, b]
        route = [candidate[0]]
        for wp in candidate[1:]:
            if wp.distance_to(route[-1]) > 0.0:
                route.append(wp)
        legs_clear = all(
            not world.segment_hits_target(u.position, v.position, margin)
            for u, v in zip(route, route[1:])
        )
        if legs_clear:
            return route
    raise NoRouteFound("vertical lift cannot clear the obstruction")
