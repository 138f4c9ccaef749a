"""Command-line entry point.

Subcommands: plan (spiral | sampling), simulate (headless mission),
analyze (log to report), serve (live WebSocket service), and
print-defaults. Domain failures print one machine-readable JSON object
on stderr and map to stable exit codes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .analysis import compute_report, export_report, load_log
from .defaults import default_parameters
from .errors import (
    EmptyPlan,
    InfeasibleStandoff,
    InspecsimError,
    NoAutonomousSegment,
    NoRouteFound,
    ScenarioError,
    WorldFormatError,
)
from .geometry import load_world
from .headless import resolve_log_dir, run_scenario, write_outputs
from .paths import save_path
from .planner import SpiralParams, ViewpointParams, generate_sampling_path, generate_spiral
from .scenario import load_scenario

EXIT_OK = 0
EXIT_INCOMPLETE = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_NO_ROUTE = 4
EXIT_NO_AUTONOMOUS = 5

_EXIT_BY_ERROR: list[tuple[type, int]] = [
    (InfeasibleStandoff, EXIT_INFEASIBLE),
    (EmptyPlan, EXIT_INFEASIBLE),
    (NoRouteFound, EXIT_NO_ROUTE),
    (NoAutonomousSegment, EXIT_NO_AUTONOMOUS),
    (ScenarioError, EXIT_USAGE),
    (WorldFormatError, EXIT_USAGE),
]


def _fail(exc: InspecsimError) -> int:
    payload = {"error": exc.code, "message": str(exc)}
    print(json.dumps(payload), file=sys.stderr)
    for err_type, code in _EXIT_BY_ERROR:
        if isinstance(exc, err_type):
            return code
    return EXIT_USAGE


def _cmd_plan(args: argparse.Namespace) -> int:
    world = load_world(args.world)
    if args.planner == "spiral":
        params = SpiralParams(
            standoff=args.standoff,
            z_min=args.z_min,
            z_max=args.z_max,
            vertical_interval=args.vertical_interval,
            points_per_ring=args.points_per_ring,
            direction=args.direction,
        )
        path = generate_spiral(world, params)
    else:
        params = ViewpointParams(
            d_min=args.d_min,
            d_max=args.d_max,
            max_incidence=math.radians(args.max_incidence_deg),
            samples_per_facet=args.samples_per_facet,
            facet_size=args.facet_size,
            resample_rounds=args.resample_rounds,
            rng_seed=args.seed,
        )
        path = generate_sampling_path(world, params)
    save_path(path, args.out)
    print(
        json.dumps(
            {
                "planner": path.planner_name,
                "waypoints": len(path.waypoints),
                "coverage": path.coverage,
                "out": str(args.out),
            }
        )
    )
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    scn = load_scenario(args.scenario, seed=args.seed)
    result = run_scenario(scn)
    out_dir = resolve_log_dir(scn.name, args.out_dir)
    files = write_outputs(result, out_dir)
    print(
        json.dumps(
            {
                "mission_complete": result.report.mission_complete,
                "waypoints_visited": result.report.waypoints_visited,
                "flight_time": result.report.flight_time,
                "log": str(files["log"]),
                "report": str(files["report"]),
            }
        )
    )
    return result.exit_code


def _cmd_analyze(args: argparse.Namespace) -> int:
    log = load_log(args.log)
    report = compute_report(log, settle_skip=args.settle_skip)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    export_report(report, log, out, csv_dir=args.csv_dir)
    print(report.to_json(), end="")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    # imported lazily so batch commands never need the service stack
    import uvicorn

    from .service import create_app

    scn = load_scenario(args.scenario, seed=args.seed)
    app = create_app(scn, speed=args.speed)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def _cmd_print_defaults(_: argparse.Namespace) -> int:
    print(json.dumps(default_parameters(), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inspecsim",
        description="Deterministic indoor inspection-flight simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="generate an inspection path")
    plan_sub = plan.add_subparsers(dest="planner", required=True)

    spiral = plan_sub.add_parser("spiral", help="stacked-ring path around the target")
    spiral.add_argument("--world", required=True)
    spiral.add_argument("--out", required=True)
    spiral.add_argument("--standoff", type=float, default=0.6)
    spiral.add_argument("--z-min", type=float, default=0.3)
    spiral.add_argument("--z-max", type=float, default=1.2)
    spiral.add_argument("--vertical-interval", type=float, default=0.3)
    spiral.add_argument("--points-per-ring", type=int, default=32)
    spiral.add_argument("--direction", choices=["ccw", "cw"], default="ccw")
    spiral.set_defaults(func=_cmd_plan)

    sampling = plan_sub.add_parser("sampling", help="per-facet viewpoint tour")
    sampling.add_argument("--world", required=True)
    sampling.add_argument("--out", required=True)
    sampling.add_argument("--d-min", type=float, default=0.4)
    sampling.add_argument("--d-max", type=float, default=1.2)
    sampling.add_argument("--max-incidence-deg", type=float, default=60.0)
    sampling.add_argument("--samples-per-facet", type=int, default=200)
    sampling.add_argument("--facet-size", type=float, default=0.5)
    sampling.add_argument("--resample-rounds", type=int, default=8)
    sampling.add_argument("--seed", type=int, default=0)
    sampling.set_defaults(func=_cmd_plan)

    simulate = sub.add_parser("simulate", help="run a scenario headless")
    simulate.add_argument("--scenario", required=True)
    simulate.add_argument("--out-dir", default=None)
    simulate.add_argument("--seed", type=int, default=None)
    simulate.set_defaults(func=_cmd_simulate)

    analyze = sub.add_parser("analyze", help="compute a tracking report from a log")
    analyze.add_argument("--log", required=True)
    analyze.add_argument("--out", required=True)
    analyze.add_argument("--settle-skip", type=float, default=0.0)
    analyze.add_argument("--csv-dir", default=None)
    analyze.set_defaults(func=_cmd_analyze)

    serve = sub.add_parser("serve", help="live simulation over WebSocket")
    serve.add_argument("--scenario", required=True)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--speed", type=float, default=1.0)
    serve.add_argument("--seed", type=int, default=None)
    serve.set_defaults(func=_cmd_serve)

    defaults = sub.add_parser("print-defaults", help="dump all default parameters")
    defaults.set_defaults(func=_cmd_print_defaults)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InspecsimError as exc:
        return _fail(exc)
    except OSError as exc:
        print(json.dumps({"error": "IOError", "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
