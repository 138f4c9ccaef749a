"""Viewpoint sampling planner: per-facet candidate draws, an open tour,
and accept-if-better resampling that shortens the tour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyPlan, WorldFormatError
from ..geometry import WorldModel
from ..paths import InspectionPath, Waypoint4D, look_at_yaw
from . import tour as tour_mod
from . import validate
from .facets import Facet, subdivide_faces


@dataclass
class ViewpointParams:
    d_min: float = 0.4
    d_max: float = 1.2
    max_incidence: float = math.radians(60.0)
    samples_per_facet: int = 200
    facet_size: float = 0.5
    resample_rounds: int = 8
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.d_min <= self.d_max:
            raise WorldFormatError("need 0 < d_min <= d_max")
        if not 0.0 <= self.max_incidence < math.pi / 2:
            raise WorldFormatError("max_incidence must lie in [0, pi/2)")
        if self.samples_per_facet < 1:
            raise WorldFormatError("samples_per_facet must be >= 1")
        if self.facet_size <= 0.0:
            raise WorldFormatError("facet_size must be positive")
        if self.resample_rounds < 0:
            raise WorldFormatError("resample_rounds must be >= 0")


def _cone_basis(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal pair spanning the plane perpendicular to the normal."""
    helper = np.array([1.0, 0.0, 0.0])
    if abs(normal[0]) > 0.9:
        helper = np.array([0.0, 1.0, 0.0])
    u = np.cross(normal, helper)
    u = u / np.linalg.norm(u)
    v = np.cross(normal, u)
    return u, v


def sample_viewpoint(
    facet: Facet,
    world: WorldModel,
    params: ViewpointParams,
    rng: np.random.Generator,
) -> Waypoint4D | None:
    """Draw candidates in the view cone until one passes every constraint.

    Directions are uniform in cos(angle) over the cone, so max_incidence
    of zero degenerates to the exact facet normal. Returns None once
    samples_per_facet draws have failed.
    """
    u, v = _cone_basis(facet.normal)
    cos_cap = math.cos(params.max_incidence)
    for _ in range(params.samples_per_facet):
        cos_t = rng.uniform(cos_cap, 1.0)
        phi = rng.uniform(0.0, 2.0 * math.pi)
        dist = rng.uniform(params.d_min, params.d_max)
        sin_t = math.sqrt(max(0.0, 1.0 - cos_t * cos_t))
        direction = (
            cos_t * facet.normal + sin_t * (math.cos(phi) * u + math.sin(phi) * v)
        )
        pos = facet.center + dist * direction
        yaw = look_at_yaw(pos, facet.center)
        candidate = Waypoint4D(pos[0], pos[1], pos[2], yaw)
        if validate.check_viewpoint(
            candidate, facet, world, params.d_min, params.d_max, params.max_incidence
        ):
            return candidate
    return None


def _facet_rng(seed: int, facet_index: int, round_index: int) -> np.random.Generator:
    return np.random.default_rng([seed, facet_index, round_index])


def _neighbor_cost(
    cand: Waypoint4D,
    order_pos: int,
    viewpoints: list[Waypoint4D],
    order: list[int],
    world: WorldModel,
) -> float:
    """Penalized distance from a candidate to its tour neighbors."""
    total = 0.0
    for nb_pos in (order_pos - 1, order_pos + 1):
        if 0 <= nb_pos < len(order):
            nb = viewpoints[order[nb_pos]]
            d = cand.distance_to(nb)
            if world.segment_hits_target(
                cand.position, nb.position, world.safety_margin
            ):
                d *= tour_mod.COLLISION_PENALTY
            total += d
    return total


@dataclass
class SamplingResult:
    path: InspectionPath
    facet_total: int
    facet_covered: int
    # penalized open-tour cost after the initial tour and after each round
    objective_history: list[float] = field(default_factory=list)


def plan_sampling(world: WorldModel, params: ViewpointParams) -> SamplingResult:
    facets = subdivide_faces(world, params.facet_size)
    viewpoints: list[Waypoint4D] = []
    facet_ids: list[int] = []
    kept_facets: list[Facet] = []
    for idx, facet in enumerate(facets):
        rng = _facet_rng(params.rng_seed, idx, 0)
        wp = sample_viewpoint(facet, world, params, rng)
        if wp is not None:
            viewpoints.append(wp)
            facet_ids.append(idx)
            kept_facets.append(facet)
    if not viewpoints:
        raise EmptyPlan("no facet admits a valid viewpoint")

    order = tour_mod.plan_tour(viewpoints, world)
    cost = tour_mod.cost_matrix(viewpoints, world)
    history = [tour_mod.tour_length(cost, order)]

    for round_index in range(1, params.resample_rounds + 1):
        for order_pos, vp_idx in enumerate(order):
            rng = _facet_rng(params.rng_seed, facet_ids[vp_idx], round_index)
            cand = sample_viewpoint(kept_facets[vp_idx], world, params, rng)
            if cand is not None:
                old_cost = _neighbor_cost(
                    viewpoints[vp_idx], order_pos, viewpoints, order, world
                )
                new_cost = _neighbor_cost(cand, order_pos, viewpoints, order, world)
                if new_cost < old_cost:
                    viewpoints[vp_idx] = cand
        cost = tour_mod.cost_matrix(viewpoints, world)
        history.append(tour_mod.tour_length(cost, order))

    route: list[Waypoint4D] = []
    for k in range(len(order) - 1):
        leg = tour_mod.route_detour(
            viewpoints[order[k]], viewpoints[order[k + 1]], world
        )
        if route:
            leg = leg[1:]
        route.extend(leg)
    if len(order) == 1:
        route = [viewpoints[order[0]]]

    coverage = len(viewpoints) / len(facets)
    path = InspectionPath(waypoints=route, planner_name="sampling", coverage=coverage)
    return SamplingResult(
        path=path,
        facet_total=len(facets),
        facet_covered=len(viewpoints),
        objective_history=history,
    )


def generate_sampling_path(world: WorldModel, params: ViewpointParams) -> InspectionPath:
    return plan_sampling(world, params).path
