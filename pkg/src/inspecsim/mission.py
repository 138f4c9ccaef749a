"""Mission control: operator command state machine and the waypoint
feedback loop that advances through a planned path.

Arrival uses the estimated position only: the vehicle must keep its
estimate inside a 15 cm cube centered on the active waypoint for more
than 0.5 s before the next waypoint is commanded.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import WorldModel
from .localization import RangeEkf
from .paths import InspectionPath, Waypoint4D
from .vehicle import (
    ControlCommand,
    DisturbanceSchedule,
    VehicleParams,
    VehicleSim,
    VehicleState,
)

# altitude above which the vehicle counts as airborne for FSM gating
_AIRBORNE_Z = 0.05
# guard so accumulated float dust cannot turn "more than 0.5 s" into
# "0.5 s": 50 ticks of 0.01 s must not advance, 51 must
_DWELL_EPS = 1e-9
# touchdown detection threshold during landing
_TOUCHDOWN_Z = 1e-3
# once the descent setpoint reaches the floor and the vehicle is this
# low, motors cut for the final drop; ground-effect lift would otherwise
# hold the clamped-integral controller a few centimeters off the floor
_MOTOR_CUT_Z = 0.06
# takeoff completes when the estimated altitude is within this of target
_TAKEOFF_TOL = 0.05


class MissionMode(enum.Enum):
    IDLE = "idle"
    TAKING_OFF = "taking_off"
    MANUAL_HOVER = "manual_hover"
    AUTONOMOUS = "autonomous"
    PAUSED = "paused"
    LANDING = "landing"
    EMERGENCY_STOP = "emergency_stop"
    COMPLETE = "complete"


class OperatorCommand(enum.Enum):
    TAKE_OFF = "take_off"
    LAND = "land"
    START_AUTONOMOUS = "start_auto"
    PAUSE = "pause"
    RESUME = "resume"
    ESTOP = "estop"


_TABLE: dict[tuple[MissionMode, OperatorCommand], MissionMode] = {
    (MissionMode.IDLE, OperatorCommand.TAKE_OFF): MissionMode.TAKING_OFF,
    (MissionMode.MANUAL_HOVER, OperatorCommand.START_AUTONOMOUS): MissionMode.AUTONOMOUS,
    (MissionMode.AUTONOMOUS, OperatorCommand.PAUSE): MissionMode.PAUSED,
    (MissionMode.PAUSED, OperatorCommand.RESUME): MissionMode.AUTONOMOUS,
    (MissionMode.MANUAL_HOVER, OperatorCommand.LAND): MissionMode.LANDING,
    (MissionMode.AUTONOMOUS, OperatorCommand.LAND): MissionMode.LANDING,
    (MissionMode.PAUSED, OperatorCommand.LAND): MissionMode.LANDING,
    (MissionMode.COMPLETE, OperatorCommand.LAND): MissionMode.LANDING,
}


def fsm_apply(
    mode: MissionMode, cmd: OperatorCommand, airborne: bool
) -> tuple[MissionMode, bool, str]:
    """Resolve a command: (next mode, accepted, reason when refused)."""
    if cmd is OperatorCommand.ESTOP:
        return MissionMode.EMERGENCY_STOP, True, ""
    target = _TABLE.get((mode, cmd))
    if target is MissionMode.AUTONOMOUS and cmd is OperatorCommand.START_AUTONOMOUS:
        if not airborne:
            return mode, False, "not airborne"
    if target is None:
        if cmd is OperatorCommand.START_AUTONOMOUS and not airborne:
            return mode, False, "not airborne"
        return mode, False, f"{cmd.value} ignored in {mode.value}"
    return target, True, ""


def fsm_transition(
    mode: MissionMode, cmd: OperatorCommand, airborne: bool
) -> MissionMode:
    return fsm_apply(mode, cmd, airborne)[0]


class TrackerEvent(enum.Enum):
    NONE = "none"
    ADVANCED = "advanced"
    MISSION_COMPLETE = "mission_complete"


@dataclass(frozen=True)
class WaypointTracker:
    path: InspectionPath
    active_index: int = 0
    dwell_elapsed: float = 0.0
    box_half_side: float = 0.075
    dwell_required: float = 0.5

    @property
    def active_waypoint(self) -> Waypoint4D:
        return self.path.waypoints[min(self.active_index, len(self.path.waypoints) - 1)]

    @property
    def finished(self) -> bool:
        return self.active_index >= len(self.path.waypoints)


def waypoint_check(
    tracker: WaypointTracker, est_pos: np.ndarray, dt: float
) -> tuple[WaypointTracker, TrackerEvent]:
    """Bounding-box arrival with dwell; boundary inclusive, reset on exit."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if tracker.finished:
        return tracker, TrackerEvent.MISSION_COMPLETE
    wp = tracker.path.waypoints[tracker.active_index]
    offset = np.abs(np.asarray(est_pos, dtype=float) - wp.position)
    inside = bool(np.all(offset <= tracker.box_half_side))
    if not inside:
        if tracker.dwell_elapsed != 0.0:
            tracker = replace(tracker, dwell_elapsed=0.0)
        return tracker, TrackerEvent.NONE
    dwell = tracker.dwell_elapsed + dt
    if dwell > tracker.dwell_required + _DWELL_EPS:
        advanced = replace(tracker, active_index=tracker.active_index + 1, dwell_elapsed=0.0)
        if advanced.finished:
            return advanced, TrackerEvent.MISSION_COMPLETE
        return advanced, TrackerEvent.ADVANCED
    return replace(tracker, dwell_elapsed=dwell), TrackerEvent.NONE


@dataclass
class TelemetryRecord:
    """One log line: everything analysis and the wire protocol need."""

    t: float
    true_pos: tuple[float, float, float]
    true_vel: tuple[float, float, float]
    yaw: float
    est_pos: tuple[float, float, float]
    est_vel: tuple[float, float, float]
    mode: str
    wp: int
    dwell: float
    setpoint: tuple[float, float, float, float]

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "true_pos": list(self.true_pos),
            "true_vel": list(self.true_vel),
            "yaw": self.yaw,
            "est_pos": list(self.est_pos),
            "est_vel": list(self.est_vel),
            "mode": self.mode,
            "wp": self.wp,
            "dwell": self.dwell,
            "setpoint": list(self.setpoint),
        }


@dataclass
class CommandResult:
    command: OperatorCommand
    accepted: bool
    reason: str
    mode: MissionMode


class MissionRunner:
    """Single owner of all mutable mission state, driven at fixed dt.

    Per tick: drain queued commands, range one anchor and update the
    EKF, run the arrival check on the estimate, pick the mode's
    setpoint, step the vehicle, emit one telemetry record.
    """

    def __init__(
        self,
        world: WorldModel,
        path: InspectionPath,
        vehicle_params: VehicleParams,
        ekf: RangeEkf,
        disturbance: DisturbanceSchedule,
        start: Waypoint4D | None = None,
        takeoff_altitude: float = 0.3,
        landing_rate: float = 0.2,
        box_half_side: float = 0.075,
        dwell_required: float = 0.5,
    ):
        self.world = world
        self.path = path
        self.params = vehicle_params
        self.ekf = ekf
        self.disturbance = disturbance
        self.takeoff_altitude = takeoff_altitude
        self.landing_rate = landing_rate
        if start is None:
            start = Waypoint4D(0.0, 0.0, 0.0, 0.0)
        self.vehicle = VehicleSim(
            params=vehicle_params,
            state=VehicleState(start.position, np.zeros(3), start.yaw, 0.0),
        )
        self.tracker = WaypointTracker(
            path=path, box_half_side=box_half_side, dwell_required=dwell_required
        )
        self.mode = MissionMode.IDLE
        self.tick_index = 0
        self.mission_complete = False
        self._pending: list[OperatorCommand] = []
        self._hover_sp: Waypoint4D = start
        self._landing_sp: Waypoint4D = start
        self.command_log: list[CommandResult] = []

    @property
    def airborne(self) -> bool:
        return float(self.vehicle.state.position[2]) > _AIRBORNE_Z

    @property
    def wp_total(self) -> int:
        return len(self.path.waypoints)

    def submit(self, cmd: OperatorCommand) -> None:
        self._pending.append(cmd)

    def apply_command(self, cmd: OperatorCommand) -> CommandResult:
        new_mode, ok, reason = fsm_apply(self.mode, cmd, self.airborne)
        if ok and new_mode is not self.mode:
            self._enter(new_mode)
        self.mode = new_mode
        result = CommandResult(cmd, ok, reason, self.mode)
        self.command_log.append(result)
        return result

    def _enter(self, mode: MissionMode) -> None:
        state = self.vehicle.state
        est = self.ekf.state
        if mode is MissionMode.TAKING_OFF:
            self._hover_sp = Waypoint4D(
                float(state.position[0]),
                float(state.position[1]),
                self.takeoff_altitude,
                state.yaw,
            )
        elif mode is MissionMode.PAUSED:
            self._hover_sp = Waypoint4D(
                float(est.position[0]),
                float(est.position[1]),
                float(est.position[2]),
                state.yaw,
            )
        elif mode is MissionMode.LANDING:
            self._landing_sp = Waypoint4D(
                float(est.position[0]),
                float(est.position[1]),
                float(est.position[2]),
                state.yaw,
            )

    def _setpoint(self) -> Waypoint4D | None:
        """Mode-specific setpoint; None means motors off."""
        mode = self.mode
        if mode in (MissionMode.IDLE, MissionMode.EMERGENCY_STOP):
            return None
        if mode is MissionMode.TAKING_OFF or mode is MissionMode.MANUAL_HOVER:
            return self._hover_sp
        if mode is MissionMode.PAUSED:
            return self._hover_sp
        if mode is MissionMode.AUTONOMOUS or mode is MissionMode.COMPLETE:
            return self.tracker.active_waypoint
        if mode is MissionMode.LANDING:
            z = max(0.0, self._landing_sp.z - self.landing_rate * self.params.dt)
            self._landing_sp = Waypoint4D(
                self._landing_sp.x, self._landing_sp.y, z, self._landing_sp.yaw
            )
            if z <= 0.0 and float(self.vehicle.state.position[2]) <= _MOTOR_CUT_Z:
                return None
            return self._landing_sp
        return None

    def tick(self) -> TelemetryRecord:
        for cmd in self._pending:
            self.apply_command(cmd)
        self._pending.clear()

        state = self.vehicle.state
        dt = self.params.dt
        est = self.ekf.tick(state.position, state.time, dt)

        if self.mode is MissionMode.AUTONOMOUS:
            self.tracker, event = waypoint_check(self.tracker, est.position, dt)
            if event is TrackerEvent.MISSION_COMPLETE:
                self.mission_complete = True
                self.mode = MissionMode.COMPLETE
        elif self.mode is MissionMode.TAKING_OFF:
            if float(est.position[2]) >= self.takeoff_altitude - _TAKEOFF_TOL:
                self.mode = MissionMode.MANUAL_HOVER

        setpoint = self._setpoint()
        dist = self.disturbance.sample(self.tick_index)
        try:
            if setpoint is None:
                new_state = self.vehicle.step_motors_off(dist)
            else:
                new_state = self.vehicle.step(ControlCommand(setpoint), dist)
        except Exception:
            self.mode = MissionMode.EMERGENCY_STOP
            new_state = self.vehicle.step_motors_off(np.zeros(3))

        if (
            self.mode is MissionMode.LANDING
            and float(new_state.position[2]) <= _TOUCHDOWN_Z
            and self._landing_sp.z <= 0.0
        ):
            self.mode = MissionMode.IDLE

        self.tick_index += 1
        sp = setpoint if setpoint is not None else Waypoint4D(
            float(new_state.position[0]),
            float(new_state.position[1]),
            float(new_state.position[2]),
            new_state.yaw,
        )
        return TelemetryRecord(
            t=new_state.time,
            true_pos=tuple(float(v) for v in new_state.position),
            true_vel=tuple(float(v) for v in new_state.velocity),
            yaw=new_state.yaw,
            est_pos=tuple(float(v) for v in est.position),
            est_vel=tuple(float(v) for v in est.velocity),
            mode=self.mode.value,
            wp=min(self.tracker.active_index, self.wp_total),
            dwell=self.tracker.dwell_elapsed,
            setpoint=(sp.x, sp.y, sp.z, sp.yaw),
        )
