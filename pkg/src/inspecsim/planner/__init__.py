"""Inspection path planners and their validation helpers."""

from .facets import Facet, subdivide_faces, total_facet_area
from .sampling import (
    SamplingResult,
    ViewpointParams,
    generate_sampling_path,
    plan_sampling,
    sample_viewpoint,
)
from .spiral import SpiralParams, footprint_circle, generate_spiral, ring_count
from .tour import (
    cost_matrix,
    nearest_neighbor_order,
    plan_tour,
    route_detour,
    tour_length,
    two_opt,
)
from .validate import (
    check_inspection_path,
    check_viewpoint,
    coverage_fraction,
    path_violations,
    viewpoint_failures,
)

__all__ = [
    "Facet",
    "SamplingResult",
    "SpiralParams",
    "ViewpointParams",
    "check_inspection_path",
    "check_viewpoint",
    "cost_matrix",
    "coverage_fraction",
    "footprint_circle",
    "generate_sampling_path",
    "generate_spiral",
    "nearest_neighbor_order",
    "path_violations",
    "plan_sampling",
    "plan_tour",
    "ring_count",
    "route_detour",
    "sample_viewpoint",
    "subdivide_faces",
    "total_facet_area",
    "tour_length",
    "two_opt",
    "viewpoint_failures",
]
