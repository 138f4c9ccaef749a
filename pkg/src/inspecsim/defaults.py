"""Single source for every tunable default, grouped by subsystem."""

from __future__ import annotations

from .localization import NoiseModel
from .vehicle import DisturbanceParams, VehicleParams


def default_parameters() -> dict:
    """All defaults as one JSON-serializable document."""
    return {
        "vehicle": VehicleParams().to_dict(),
        "noise": NoiseModel().to_dict(),
        "disturbance": DisturbanceParams().to_dict(),
        "estimator": {
            "process_noise": 0.6,
            "initial_pos_var": 0.01,
            "initial_vel_var": 0.01,
        },
        "spiral": {
            "standoff": 0.6,
            "z_min": 0.3,
            "z_max": 1.2,
            "vertical_interval": 0.3,
            "points_per_ring": 32,
            "direction": "ccw",
        },
        "viewpoint": {
            "d_min": 0.4,
            "d_max": 1.2,
            "max_incidence_deg": 60.0,
            "samples_per_facet": 200,
            "facet_size": 0.5,
            "resample_rounds": 8,
        },
        "mission": {
            "box_half_side": 0.075,
            "dwell_required": 0.5,
            "takeoff_altitude": 0.3,
            "landing_rate": 0.2,
            "max_time": 900.0,
            "dt": 0.01,
        },
    }
