"""Scenario files: one JSON document binding a world, a planned path,
vehicle and noise parameters, seeds, and mission pacing.

World and path entries may be inline objects or file references
resolved relative to the scenario file. Alternatively a "plan" block
generates the path at load time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import ScenarioError
from .geometry import WorldModel, load_world, world_from_dict
from .localization import NoiseModel, RangeEkf
from .mission import MissionRunner
from .paths import InspectionPath, Waypoint4D, densify, load_path
from .planner import (
    SpiralParams,
    ViewpointParams,
    generate_sampling_path,
    generate_spiral,
)
from .vehicle import DisturbanceParams, DisturbanceSchedule, VehicleParams


def _schema() -> dict:
    text = (
        resources.files("inspecsim.data.schemas")
        .joinpath("scenario.schema.json")
        .read_text()
    )
    return json.loads(text)


@dataclass
class Scenario:
    name: str
    world: WorldModel
    path: InspectionPath
    vehicle: VehicleParams
    noise: NoiseModel
    disturbance: DisturbanceParams
    process_noise: float = 0.6
    initial_pos_var: float = 0.01
    initial_vel_var: float = 0.01
    dt: float = 0.01
    max_time: float = 900.0
    max_leg: float | None = None
    settle_skip: float = 0.0
    takeoff_altitude: float = 0.3
    landing_rate: float = 0.2
    box_half_side: float = 0.075
    dwell_required: float = 0.5
    start: Waypoint4D = None  # type: ignore[assignment]
    seed: int = 0

    def __post_init__(self) -> None:
        if self.start is None:
            self.start = Waypoint4D(0.0, 0.0, 0.0, 0.0)


def _vehicle_from(doc: dict, dt: float) -> VehicleParams:
    fields = dict(doc)
    for key in ("kp", "ki", "kd"):
        if key in fields:
            fields[key] = tuple(float(v) for v in fields[key])
    fields["dt"] = dt
    try:
        return VehicleParams(**fields)
    except TypeError as exc:
        raise ScenarioError(f"unknown vehicle parameter: {exc}") from exc


def _plan_path(plan: dict, world: WorldModel, master_seed: int) -> InspectionPath:
    kind = plan.get("planner")
    params = {k: v for k, v in plan.items() if k != "planner"}
    if kind == "spiral":
        try:
            return generate_spiral(world, SpiralParams(**params))
        except TypeError as exc:
            raise ScenarioError(f"bad spiral plan block: {exc}") from exc
    if kind == "sampling":
        params.setdefault("rng_seed", master_seed * 1000 + 3)
        try:
            return generate_sampling_path(world, ViewpointParams(**params))
        except TypeError as exc:
            raise ScenarioError(f"bad sampling plan block: {exc}") from exc
    raise ScenarioError(f"unknown planner '{kind}' in plan block")


def scenario_from_dict(doc: dict, base_dir: Path | None = None, seed: int | None = None) -> Scenario:
    try:
        jsonschema.validate(doc, _schema())
    except jsonschema.ValidationError as exc:
        raise ScenarioError(f"scenario schema violation: {exc.message}") from exc
    base = Path(base_dir) if base_dir is not None else Path.cwd()

    master_seed = int(doc.get("seed", 0)) if seed is None else int(seed)

    world_entry = doc["world"]
    if isinstance(world_entry, str):
        world = load_world(base / world_entry)
    else:
        world = world_from_dict(world_entry)

    if ("path" in doc) == ("plan" in doc):
        raise ScenarioError("scenario needs exactly one of 'path' or 'plan'")
    if "path" in doc:
        entry = doc["path"]
        if isinstance(entry, str):
            path = load_path(base / entry)
        else:
            path = InspectionPath.from_dict(entry)
    else:
        path = _plan_path(doc["plan"], world, master_seed)

    dt = float(doc.get("dt", 0.01))
    vehicle = _vehicle_from(doc.get("vehicle", {}), dt)

    noise_doc = dict(doc.get("noise", {}))
    noise_doc.setdefault("seed", master_seed * 1000 + 1)
    noise = NoiseModel(**noise_doc)

    dist_doc = dict(doc.get("disturbance", {}))
    dist_doc.setdefault("seed", master_seed * 1000 + 2)
    disturbance = DisturbanceParams(dt=dt, **dist_doc)

    est_doc = doc.get("estimator", {})

    max_leg = doc.get("max_leg")
    if max_leg is not None:
        path = replace(path, waypoints=densify(path.waypoints, float(max_leg)))

    start_doc = doc.get("start")
    start = Waypoint4D.from_dict(start_doc) if start_doc else Waypoint4D(0, 0, 0, 0)

    return Scenario(
        name=str(doc.get("name", "scenario")),
        world=world,
        path=path,
        vehicle=vehicle,
        noise=noise,
        disturbance=disturbance,
        process_noise=float(est_doc.get("process_noise", 0.6)),
        initial_pos_var=float(est_doc.get("initial_pos_var", 0.01)),
        initial_vel_var=float(est_doc.get("initial_vel_var", 0.01)),
        dt=dt,
        max_time=float(doc.get("max_time", 900.0)),
        max_leg=None if max_leg is None else float(max_leg),
        settle_skip=float(doc.get("settle_skip", 0.0)),
        takeoff_altitude=float(doc.get("takeoff_altitude", 0.3)),
        landing_rate=float(doc.get("landing_rate", 0.2)),
        box_half_side=float(doc.get("box_half_side", 0.075)),
        dwell_required=float(doc.get("dwell_required", 0.5)),
        start=start,
        seed=master_seed,
    )


def load_scenario(path, seed: int | None = None) -> Scenario:
    path = Path(path)
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise ScenarioError(f"scenario file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON: {exc}") from exc
    return scenario_from_dict(doc, base_dir=path.parent, seed=seed)


def build_runner(scn: Scenario) -> MissionRunner:
    """Wire a scenario into a ready-to-tick mission runner."""
    ekf = RangeEkf(
        anchors=scn.world.anchors,
        noise=scn.noise,
        process_noise=scn.process_noise,
        initial_pos=(scn.start.x, scn.start.y, scn.start.z),
        initial_pos_var=scn.initial_pos_var,
        initial_vel_var=scn.initial_vel_var,
    )
    return MissionRunner(
        world=scn.world,
        path=scn.path,
        vehicle_params=scn.vehicle,
        ekf=ekf,
        disturbance=DisturbanceSchedule(scn.disturbance),
        start=scn.start,
        takeoff_altitude=scn.takeoff_altitude,
        landing_rate=scn.landing_rate,
        box_half_side=scn.box_half_side,
        dwell_required=scn.dwell_required,
    )
