"""Tests for flight-log loading, reference reconstruction, and reports."""

import json
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from inspecsim.analysis import (
    FlightLog,
    compute_report,
    export_report,
    load_log,
    record_to_json,
    reference_position,
    write_log,
)
from inspecsim.errors import NoAutonomousSegment, OutOfRange, WorldFormatError
from inspecsim.mission import TelemetryRecord

DT = 0.01

WP0 = (0.0, 0.0, 0.5, 0.0)
WP1 = (0.8, -0.2, 0.7, 1.5)

SCHEMA_PATH = (
    Path(__file__).resolve().parents[1]
    / "src"
    / "inspecsim"
    / "data"
    / "schemas"
    / "report.schema.json"
)


def make_records(err_fn=None, t0=0.0):
    """Synthetic 240-tick mission: idle, takeoff, two waypoints, complete.

    err_fn(i) returns the true-minus-setpoint position error at tick i;
    default is perfect tracking.
    """
    if err_fn is None:
        err_fn = lambda i: (0.0, 0.0, 0.0)
    timeline = []
    for i in range(10):
        timeline.append(("idle", 0, (0.0, 0.0, 0.0, 0.0)))
    for i in range(20):
        timeline.append(("taking_off", 0, WP0))
    for i in range(100):
        timeline.append(("autonomous", 0, WP0))
    for i in range(100):
        timeline.append(("autonomous", 1, WP1))
    for i in range(10):
        timeline.append(("complete", 2, WP1))
    records = []
    for i, (mode, wp, sp) in enumerate(timeline):
        err = err_fn(i)
        true = tuple(float(sp[k] + err[k]) for k in range(3))
        est = tuple(float(v + 0.001) for v in true)
        records.append(
            TelemetryRecord(
                t=float(t0 + i * DT),
                true_pos=true,
                true_vel=(0.0, 0.0, 0.0),
                yaw=float(sp[3]),
                est_pos=est,
                est_vel=(0.0, 0.0, 0.0),
                mode=mode,
                wp=int(wp),
                dwell=0.0,
                setpoint=tuple(float(v) for v in sp),
            )
        )
    return records


def make_log(err_fn=None, t0=0.0):
    return FlightLog.from_records(make_records(err_fn, t0))


class TestReferencePosition:
    def test_dwell_sample_returns_active_waypoint(self):
        log = make_log()
        ref = reference_position(float(log.t[80]), log)
        assert ref == pytest.approx(WP0[:3], abs=0.0)

    def test_advance_tick_reads_new_waypoint(self):
        # The setpoint switches on the advance tick itself, so a query at
        # exactly that timestamp must see the new waypoint.
        log = make_log()
        assert log.wp[130] == 1 and log.wp[129] == 0
        ref = reference_position(float(log.t[130]), log)
        assert ref == pytest.approx(WP1[:3], abs=0.0)

    def test_between_samples_holds_previous(self):
        log = make_log()
        ref = reference_position(float(log.t[129]) + 0.004, log)
        assert ref == pytest.approx(WP0[:3], abs=0.0)

    def test_matches_setpoint_channel_everywhere(self):
        log = make_log()
        for i in range(len(log)):
            ref = reference_position(float(log.t[i]), log)
            assert np.array_equal(ref, log.setpoint[i, :3])

    def test_outside_span_raises(self):
        log = make_log()
        with pytest.raises(OutOfRange):
            reference_position(float(log.t[0]) - 1e-6, log)
        with pytest.raises(OutOfRange):
            reference_position(float(log.t[-1]) + 1e-6, log)

    def test_returns_copy(self):
        log = make_log()
        ref = reference_position(float(log.t[50]), log)
        ref[0] = 99.0
        assert log.setpoint[50, 0] != 99.0


class TestComputeReport:
    def test_perfect_log_all_zero(self):
        report = compute_report(make_log())
        assert report.mae_x == 0.0
        assert report.mae_y == 0.0
        assert report.mae_z == 0.0
        assert report.mae_xy == 0.0
        assert report.max_err_x == 0.0
        assert report.max_err_y == 0.0
        assert report.max_err_z == 0.0
        assert report.mission_complete is True
        assert report.waypoints_visited == 2
        assert report.flight_time == pytest.approx(239 * DT)
        assert report.autonomous_samples == 200

    def test_constant_z_offset_isolated_to_mae_z(self):
        report = compute_report(make_log(lambda i: (0.0, 0.0, 0.05)))
        assert report.mae_z == pytest.approx(0.05, abs=1e-12)
        assert report.max_err_z == pytest.approx(0.05, abs=1e-12)
        assert report.mae_x == 0.0
        assert report.mae_y == 0.0
        assert report.mae_xy == 0.0

    def test_mae_xy_triangle_bounds(self):
        rng = np.random.default_rng(31)
        errs = rng.normal(scale=0.05, size=(240, 3))
        report = compute_report(make_log(lambda i: tuple(errs[i])))
        assert report.mae_xy <= report.mae_x + report.mae_y + 1e-12
        assert report.mae_xy >= max(report.mae_x, report.mae_y) - 1e-12

    def test_time_translation_invariance(self):
        rng = np.random.default_rng(7)
        errs = rng.normal(scale=0.03, size=(240, 3))
        err_fn = lambda i: tuple(errs[i])
        base = compute_report(make_log(err_fn))
        shifted = compute_report(make_log(err_fn, t0=137.0))
        assert shifted.mae_x == base.mae_x
        assert shifted.mae_y == base.mae_y
        assert shifted.mae_z == base.mae_z
        assert shifted.mae_xy == base.mae_xy
        assert shifted.flight_time == pytest.approx(base.flight_time)

    def test_errors_outside_autonomous_ignored(self):
        # Large error during idle and takeoff only; report stays clean.
        err_fn = lambda i: (5.0, 5.0, 5.0) if i < 30 else (0.0, 0.0, 0.0)
        report = compute_report(make_log(err_fn))
        assert report.mae_x == 0.0
        assert report.max_err_z == 0.0

    def test_no_autonomous_segment_raises(self):
        records = [
            TelemetryRecord(
                t=i * DT,
                true_pos=(0.0, 0.0, 0.0),
                true_vel=(0.0, 0.0, 0.0),
                yaw=0.0,
                est_pos=(0.0, 0.0, 0.0),
                est_vel=(0.0, 0.0, 0.0),
                mode="idle",
                wp=0,
                dwell=0.0,
                setpoint=(0.0, 0.0, 0.0, 0.0),
            )
            for i in range(50)
        ]
        with pytest.raises(NoAutonomousSegment):
            compute_report(FlightLog.from_records(records))

    def test_settle_skip_excludes_post_advance_window(self):
        # 0.1 m z error on the first 20 ticks after the waypoint advance.
        err_fn = lambda i: (0.0, 0.0, 0.1) if 130 <= i < 150 else (0.0, 0.0, 0.0)
        noisy = compute_report(make_log(err_fn))
        assert noisy.mae_z > 0.0
        clean = compute_report(make_log(err_fn), settle_skip=0.195)
        assert clean.mae_z == 0.0
        assert clean.autonomous_samples == noisy.autonomous_samples - 20
        assert clean.settle_skip == pytest.approx(0.195)

    def test_settle_skip_excluding_everything_raises(self):
        # Single short autonomous burst that begins on a waypoint advance.
        records = []
        for i in range(10):
            records.append(
                TelemetryRecord(
                    t=i * DT,
                    true_pos=(0.0, 0.0, 0.3),
                    true_vel=(0.0, 0.0, 0.0),
                    yaw=0.0,
                    est_pos=(0.0, 0.0, 0.3),
                    est_vel=(0.0, 0.0, 0.0),
                    mode="manual_hover",
                    wp=0,
                    dwell=0.0,
                    setpoint=(0.0, 0.0, 0.3, 0.0),
                )
            )
        for i in range(10, 30):
            records.append(
                TelemetryRecord(
                    t=i * DT,
                    true_pos=(0.0, 0.0, 0.3),
                    true_vel=(0.0, 0.0, 0.0),
                    yaw=0.0,
                    est_pos=(0.0, 0.0, 0.3),
                    est_vel=(0.0, 0.0, 0.0),
                    mode="autonomous",
                    wp=1,
                    dwell=0.0,
                    setpoint=(0.5, 0.0, 0.3, 0.0),
                )
            )
        log = FlightLog.from_records(records)
        assert compute_report(log).autonomous_samples == 20
        with pytest.raises(NoAutonomousSegment):
            compute_report(log, settle_skip=1.0)

    def test_report_deterministic_bytes(self):
        rng = np.random.default_rng(11)
        errs = rng.normal(scale=0.04, size=(240, 3))
        err_fn = lambda i: tuple(errs[i])
        first = compute_report(make_log(err_fn)).to_json()
        second = compute_report(make_log(err_fn)).to_json()
        assert first == second
        assert first.endswith("\n")


class TestLogIo:
    def test_record_json_is_compact(self):
        rec = make_records()[0]
        text = record_to_json(rec)
        assert ", " not in text
        assert ": " not in text
        assert json.loads(text) == rec.to_dict()

    def test_write_then_load_round_trip(self, tmp_path):
        rng = np.random.default_rng(3)
        errs = rng.normal(scale=0.02, size=(240, 3))
        records = make_records(lambda i: tuple(errs[i]))
        path = tmp_path / "flight.ndjson"
        write_log(records, path)
        log = load_log(path)
        direct = FlightLog.from_records(records)
        assert np.array_equal(log.t, direct.t)
        assert np.array_equal(log.true_pos, direct.true_pos)
        assert np.array_equal(log.est_pos, direct.est_pos)
        assert np.array_equal(log.setpoint, direct.setpoint)
        assert log.mode == direct.mode
        assert np.array_equal(log.wp, direct.wp)

    def test_rewrite_is_byte_identical(self, tmp_path):
        rng = np.random.default_rng(5)
        errs = rng.normal(scale=0.02, size=(240, 3))
        records = make_records(lambda i: tuple(errs[i]))
        first = tmp_path / "a.ndjson"
        second = tmp_path / "b.ndjson"
        write_log(records, first)
        log = load_log(first)
        reloaded = [
            TelemetryRecord(
                t=float(log.t[i]),
                true_pos=tuple(float(v) for v in log.true_pos[i]),
                true_vel=tuple(float(v) for v in log.true_vel[i]),
                yaw=float(log.yaw[i]),
                est_pos=tuple(float(v) for v in log.est_pos[i]),
                est_vel=tuple(float(v) for v in log.est_vel[i]),
                mode=log.mode[i],
                wp=int(log.wp[i]),
                dwell=float(log.dwell[i]),
                setpoint=tuple(float(v) for v in log.setpoint[i]),
            )
            for i in range(len(log))
        ]
        write_log(reloaded, second)
        assert first.read_bytes() == second.read_bytes()

    def test_blank_lines_skipped(self, tmp_path):
        records = make_records()[:5]
        path = tmp_path / "flight.ndjson"
        lines = [record_to_json(r) for r in records]
        path.write_text("\n".join(lines[:2]) + "\n\n" + "\n".join(lines[2:]) + "\n")
        assert len(load_log(path)) == 5

    def test_bad_json_line_reports_location(self, tmp_path):
        records = make_records()[:3]
        path = tmp_path / "flight.ndjson"
        lines = [record_to_json(r) for r in records]
        lines[1] = "{not json"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(WorldFormatError, match=r":2: bad log record"):
            load_log(path)

    def test_missing_key_rejected(self, tmp_path):
        records = make_records()[:3]
        path = tmp_path / "flight.ndjson"
        docs = [json.loads(record_to_json(r)) for r in records]
        del docs[2]["est_pos"]
        path.write_text("\n".join(json.dumps(d) for d in docs) + "\n")
        with pytest.raises(WorldFormatError, match=r":3:"):
            load_log(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "flight.ndjson"
        path.write_text("")
        with pytest.raises(WorldFormatError):
            load_log(path)

    def test_uneven_timestamps_rejected(self, tmp_path):
        records = make_records()[:10]
        records[5] = TelemetryRecord(
            t=records[5].t + 0.004,
            true_pos=records[5].true_pos,
            true_vel=records[5].true_vel,
            yaw=records[5].yaw,
            est_pos=records[5].est_pos,
            est_vel=records[5].est_vel,
            mode=records[5].mode,
            wp=records[5].wp,
            dwell=records[5].dwell,
            setpoint=records[5].setpoint,
        )
        path = tmp_path / "flight.ndjson"
        write_log(records, path)
        with pytest.raises(WorldFormatError, match="constant dt"):
            load_log(path)


class TestExportReport:
    def test_written_files_and_headers(self, tmp_path):
        log = make_log()
        report = compute_report(log)
        written = export_report(report, log, tmp_path / "out" / "report.json")
        names = [p.name for p in written]
        assert names == [
            "report.json",
            "tracking_x.csv",
            "tracking_y.csv",
            "tracking_z.csv",
        ]
        for path in written:
            assert path.exists()
        for path in written[1:]:
            header = path.read_text().splitlines()[0]
            assert header == "time,ref,true,est"
            assert len(path.read_text().splitlines()) == len(log) + 1

    def test_csv_dir_override(self, tmp_path):
        log = make_log()
        report = compute_report(log)
        written = export_report(
            report, log, tmp_path / "report.json", csv_dir=tmp_path / "csv"
        )
        assert written[0].parent == tmp_path
        assert all(p.parent == tmp_path / "csv" for p in written[1:])

    def test_report_json_matches_schema(self, tmp_path):
        log = make_log()
        report = compute_report(log, settle_skip=0.1)
        written = export_report(report, log, tmp_path / "report.json")
        doc = json.loads(written[0].read_text())
        schema = json.loads(SCHEMA_PATH.read_text())
        jsonschema.validate(doc, schema)

    def test_csv_reformat_idempotent(self, tmp_path):
        rng = np.random.default_rng(13)
        errs = rng.normal(scale=0.05, size=(240, 3))
        log = make_log(lambda i: tuple(errs[i]))
        report = compute_report(log)
        written = export_report(report, log, tmp_path / "report.json")
        for path in written[1:]:
            lines = path.read_text().splitlines()
            for line in lines[1:]:
                fields = line.split(",")
                rebuilt = ",".join("%.9g" % float(f) for f in fields)
                assert rebuilt == line

    def test_csv_values_match_log(self, tmp_path):
        rng = np.random.default_rng(17)
        errs = rng.normal(scale=0.05, size=(240, 3))
        log = make_log(lambda i: tuple(errs[i]))
        report = compute_report(log)
        written = export_report(report, log, tmp_path / "report.json")
        z_lines = written[3].read_text().splitlines()[1:]
        parsed = np.array([[float(v) for v in line.split(",")] for line in z_lines])
        assert parsed[:, 0] == pytest.approx(log.t, rel=1e-8)
        assert parsed[:, 1] == pytest.approx(log.setpoint[:, 2], rel=1e-8, abs=1e-8)
        assert parsed[:, 2] == pytest.approx(log.true_pos[:, 2], rel=1e-8, abs=1e-8)
        assert parsed[:, 3] == pytest.approx(log.est_pos[:, 2], rel=1e-8, abs=1e-8)
