"""Post-flight analysis: planned-versus-flown error per axis.

The reference is the piecewise-constant commanded setpoint read from
the log, so the report measures exactly what the controller was asked
to do. Reports serialize deterministically; CSV floats use nine
significant digits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NoAutonomousSegment, OutOfRange, WorldFormatError
from .mission import TelemetryRecord

_FLOAT_FMT = "%.9g"


@dataclass
class FlightLog:
    """Column view of a telemetry log (one row per tick)."""

    t: np.ndarray
    true_pos: np.ndarray
    true_vel: np.ndarray
    yaw: np.ndarray
    est_pos: np.ndarray
    est_vel: np.ndarray
    mode: list[str]
    wp: np.ndarray
    dwell: np.ndarray
    setpoint: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    @classmethod
    def from_records(cls, records: list[TelemetryRecord]) -> "FlightLog":
        if not records:
            raise WorldFormatError("flight log is empty")
        return cls(
            t=np.array([r.t for r in records]),
            true_pos=np.array([r.true_pos for r in records]),
            true_vel=np.array([r.true_vel for r in records]),
            yaw=np.array([r.yaw for r in records]),
            est_pos=np.array([r.est_pos for r in records]),
            est_vel=np.array([r.est_vel for r in records]),
            mode=[r.mode for r in records],
            wp=np.array([r.wp for r in records], dtype=int),
            dwell=np.array([r.dwell for r in records]),
            setpoint=np.array([r.setpoint for r in records]),
        )

    def validate(self) -> None:
        dts = np.diff(self.t)
        if len(dts) and (np.any(dts <= 0.0) or np.ptp(dts) > 1e-9):
            raise WorldFormatError("log timestamps must increase at constant dt")


def record_to_json(record: TelemetryRecord) -> str:
    return json.dumps(record.to_dict(), separators=(",", ":"))


def write_log(records: list[TelemetryRecord], path) -> None:
    with open(path, "w") as fh:
        for record in records:
            fh.write(record_to_json(record))
            fh.write("\n")


def load_log(path) -> FlightLog:
    records = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
                records.append(
                    TelemetryRecord(
                        t=doc["t"],
                        true_pos=tuple(doc["true_pos"]),
                        true_vel=tuple(doc["true_vel"]),
                        yaw=doc["yaw"],
                        est_pos=tuple(doc["est_pos"]),
                        est_vel=tuple(doc["est_vel"]),
                        mode=doc["mode"],
                        wp=doc["wp"],
                        dwell=doc["dwell"],
                        setpoint=tuple(doc["setpoint"]),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise WorldFormatError(f"{path}:{line_no}: bad log record: {exc}") from exc
    log = FlightLog.from_records(records)
    log.validate()
    return log


def reference_position(t: float, log: FlightLog) -> np.ndarray:
    """Commanded position active at time t (piecewise constant)."""
    if t < log.t[0] or t > log.t[-1]:
        raise OutOfRange(f"t={t} outside log span [{log.t[0]}, {log.t[-1]}]")
    idx = int(np.searchsorted(log.t, t, side="right")) - 1
    return log.setpoint[idx, :3].copy()


@dataclass
class TrackingReport:
    mae_x: float
    mae_y: float
    mae_z: float
    mae_xy: float
    max_err_x: float
    max_err_y: float
    max_err_z: float
    mission_complete: bool
    waypoints_visited: int
    flight_time: float
    settle_skip: float = 0.0
    autonomous_samples: int = 0

    def to_dict(self) -> dict:
        return {
            "mae_x": self.mae_x,
            "mae_y": self.mae_y,
            "mae_z": self.mae_z,
            "mae_xy": self.mae_xy,
            "max_err_x": self.max_err_x,
            "max_err_y": self.max_err_y,
            "max_err_z": self.max_err_z,
            "mission_complete": self.mission_complete,
            "waypoints_visited": self.waypoints_visited,
            "flight_time": self.flight_time,
            "settle_skip": self.settle_skip,
            "autonomous_samples": self.autonomous_samples,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _autonomous_mask(log: FlightLog, settle_skip: float) -> np.ndarray:
    mask = np.array([m == "autonomous" for m in log.mode])
    if settle_skip > 0.0 and mask.any():
        advances = np.flatnonzero(np.diff(log.wp) != 0) + 1
        for idx in advances:
            if not mask[idx]:
                continue
            t0 = log.t[idx]
            mask &= ~((log.t >= t0) & (log.t < t0 + settle_skip))
    return mask


def compute_report(log: FlightLog, settle_skip: float = 0.0) -> TrackingReport:
    if not any(m == "autonomous" for m in log.mode):
        raise NoAutonomousSegment("log contains no autonomous-mode samples")
    mask = _autonomous_mask(log, settle_skip)
    if not mask.any():
        raise NoAutonomousSegment("settle_skip excluded every autonomous sample")
    err = log.true_pos[mask] - log.setpoint[mask, :3]
    abs_err = np.abs(err)
    mae = abs_err.mean(axis=0)
    max_err = abs_err.max(axis=0)
    mae_xy = float(np.hypot(err[:, 0], err[:, 1]).mean())
    return TrackingReport(
        mae_x=float(mae[0]),
        mae_y=float(mae[1]),
        mae_z=float(mae[2]),
        mae_xy=mae_xy,
        max_err_x=float(max_err[0]),
        max_err_y=float(max_err[1]),
        max_err_z=float(max_err[2]),
        mission_complete="complete" in log.mode,
        waypoints_visited=int(log.wp.max()),
        flight_time=float(log.t[-1] - log.t[0]),
        settle_skip=float(settle_skip),
        autonomous_samples=int(mask.sum()),
    )


def export_report(
    report: TrackingReport, log: FlightLog, report_path, csv_dir=None
) -> list[Path]:
    """Write the report JSON plus per-axis CSVs; returns written paths."""
    report_path = Path(report_path)
    report_path.parent.mkdir(parents=True, exist_ok=True)
    written = [report_path]
    with open(report_path, "w") as fh:
        fh.write(report.to_json())
    csv_base = Path(csv_dir) if csv_dir is not None else report_path.parent
    csv_base.mkdir(parents=True, exist_ok=True)
    for axis, name in enumerate("xyz"):
        csv_path = csv_base / f"tracking_{name}.csv"
        with open(csv_path, "w") as fh:
            fh.write("time,ref,true,est\n")
            for i in range(len(log)):
                row = (
                    log.t[i],
                    log.setpoint[i, axis],
                    log.true_pos[i, axis],
                    log.est_pos[i, axis],
                )
                fh.write(",".join(_FLOAT_FMT % v for v in row))
                fh.write("\n")
        written.append(csv_path)
    return written
