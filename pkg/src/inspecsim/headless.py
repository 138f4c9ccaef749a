"""Headless mission execution: scripted takeoff, autonomous flight,
landing, then log and report export. Runs as fast as possible."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .analysis import FlightLog, TrackingReport, compute_report, export_report, write_log
from .mission import MissionMode, MissionRunner, OperatorCommand, TelemetryRecord
from .scenario import Scenario, build_runner

DEFAULT_LOG_DIR = "runs"


@dataclass
class HeadlessResult:
    runner: MissionRunner
    records: list[TelemetryRecord]
    log: FlightLog
    report: TrackingReport
    exit_code: int


def run_scenario(scn: Scenario) -> HeadlessResult:
    """Fly the scenario with the scripted command stream.

    Exit code 0 means the mission completed every waypoint; 1 means the
    time budget ran out first.
    """
    runner = build_runner(scn)
    records: list[TelemetryRecord] = []
    runner.submit(OperatorCommand.TAKE_OFF)
    auto_sent = False
    land_sent = False
    max_ticks = int(round(scn.max_time / scn.dt))
    for _ in range(max_ticks):
        records.append(runner.tick())
        if not auto_sent and runner.mode is MissionMode.MANUAL_HOVER:
            runner.submit(OperatorCommand.START_AUTONOMOUS)
            auto_sent = True
        if runner.mission_complete and not land_sent:
            runner.submit(OperatorCommand.LAND)
            land_sent = True
        if land_sent and runner.mode is MissionMode.IDLE:
            break
    log = FlightLog.from_records(records)
    report = compute_report(log, settle_skip=scn.settle_skip)
    exit_code = 0 if report.mission_complete else 1
    return HeadlessResult(
        runner=runner, records=records, log=log, report=report, exit_code=exit_code
    )


def resolve_log_dir(scenario_name: str, out_dir: str | None = None) -> Path:
    """Output directory, honoring the INSPECSIM_LOG_DIR override."""
    if out_dir is not None:
        return Path(out_dir)
    base = os.environ.get("INSPECSIM_LOG_DIR", DEFAULT_LOG_DIR)
    return Path(base) / scenario_name


def write_outputs(result: HeadlessResult, out_dir: Path) -> dict[str, Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    log_path = out_dir / "flight.ndjson"
    report_path = out_dir / "report.json"
    write_log(result.records, log_path)
    export_report(result.report, result.log, report_path)
    return {"log": log_path, "report": report_path}
