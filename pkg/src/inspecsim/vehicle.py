"""Point-mass quadrotor simulation with a cascaded position PID.

The vehicle is a controlled point with yaw. Thrust is limited by the
37 g airframe / 42 g maximum-takeoff mass budget, speed is capped at
0.3 m/s, and a configurable gravity-bias disturbance plus near-ground
lift make vertical tracking measurably worse than horizontal.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .paths import Waypoint4D, normalize_yaw

GRAVITY = 9.81
_GRAVITY_VEC = np.array([0.0, 0.0, GRAVITY])


class ControlMode(enum.Enum):
    POSITION_HOLD = "position_hold"
    VELOCITY_TRACKING = "velocity_tracking"


@dataclass(frozen=True)
class ControlCommand:
    setpoint: Waypoint4D
    mode: ControlMode = ControlMode.POSITION_HOLD


@dataclass(frozen=True)
class VehicleState:
    position: np.ndarray
    velocity: np.ndarray
    yaw: float = 0.0
    time: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "position", np.asarray(self.position, dtype=float).reshape(3)
        )
        object.__setattr__(
            self, "velocity", np.asarray(self.velocity, dtype=float).reshape(3)
        )
        object.__setattr__(self, "yaw", normalize_yaw(self.yaw))


@dataclass
class VehicleParams:
    mass: float = 0.037
    max_thrust_mass_equiv: float = 0.042
    drag_coeff: float = 0.5
    max_speed: float = 0.3
    yaw_rate_limit: float = 2.0
    kp: tuple[float, float, float] = (4.0, 4.0, 4.0)
    ki: tuple[float, float, float] = (1.0, 1.0, 4.0)
    kd: tuple[float, float, float] = (4.0, 4.0, 4.0)
    integrator_clamp: float = 0.1
    ground_effect_height: float = 0.12
    ground_effect_gain: float = 0.1
    dt: float = 0.01

    def __post_init__(self) -> None:
        if self.mass >= self.max_thrust_mass_equiv:
            raise ValueError("hover infeasible: mass >= max_thrust_mass_equiv")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        self._kp = np.asarray(self.kp, dtype=float)
        self._ki = np.asarray(self.ki, dtype=float)
        self._kd = np.asarray(self.kd, dtype=float)

    @property
    def max_thrust_accel(self) -> float:
        return GRAVITY * self.max_thrust_mass_equiv / self.mass

    def to_dict(self) -> dict:
        return {
            "mass": self.mass,
            "max_thrust_mass_equiv": self.max_thrust_mass_equiv,
            "drag_coeff": self.drag_coeff,
            "max_speed": self.max_speed,
            "yaw_rate_limit": self.yaw_rate_limit,
            "kp": list(self.kp),
            "ki": list(self.ki),
            "kd": list(self.kd),
            "integrator_clamp": self.integrator_clamp,
            "ground_effect_height": self.ground_effect_height,
            "ground_effect_gain": self.ground_effect_gain,
            "dt": self.dt,
        }


def saturate_thrust(accel_cmd: np.ndarray, params: VehicleParams) -> np.ndarray:
    """Clamp the commanded specific force to the rotor envelope.

    Rotors cannot pull down, so the vertical component is floored at
    zero; then the vector norm is capped at g * (max takeoff / mass).
    """
    thrust = accel_cmd.copy()
    if thrust[2] < 0.0:
        thrust[2] = 0.0
    norm = float(np.sqrt(thrust @ thrust))
    limit = params.max_thrust_accel
    if norm > limit:
        thrust *= limit / norm
    return thrust


def pid_accel(
    state: VehicleState,
    cmd: ControlCommand,
    integrator: np.ndarray,
    dt: float,
    params: VehicleParams,
) -> tuple[np.ndarray, np.ndarray]:
    """One controller evaluation; returns (thrust command, new integrator)."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    kp, ki, kd = params._kp, params._ki, params._kd
    if cmd.mode is ControlMode.VELOCITY_TRACKING:
        # setpoint coordinates reinterpreted as a velocity command
        vel_err = np.array([cmd.setpoint.x, cmd.setpoint.y, cmd.setpoint.z])
        vel_err = vel_err - state.velocity
        accel = kd * vel_err + _GRAVITY_VEC
        return saturate_thrust(accel, params), integrator.copy()
    err = cmd.setpoint.position - state.position
    new_integrator = np.clip(
        integrator + err * dt, -params.integrator_clamp, params.integrator_clamp
    )
    accel = kp * err + ki * new_integrator - kd * state.velocity + _GRAVITY_VEC
    return saturate_thrust(accel, params), new_integrator


def ground_effect_lift(z: float, params: VehicleParams) -> float:
    """Upward disturbance acceleration near the floor."""
    return (
        params.ground_effect_gain
        * GRAVITY
        * max(0.0, 1.0 - z / params.ground_effect_height)
    )


def ground_effect(z: float, params: VehicleParams) -> np.ndarray:
    return np.array([0.0, 0.0, ground_effect_lift(z, params)])


def step_with_thrust(
    state: VehicleState,
    thrust: np.ndarray,
    params: VehicleParams,
    disturbance: np.ndarray,
    yaw_setpoint: float | None = None,
) -> VehicleState:
    """Semi-implicit Euler update under an explicit thrust vector.

    The floor sits at z = 0: contact zeroes downward and horizontal
    velocity. Yaw slews toward the setpoint at most yaw_rate_limit.
    """
    accel = (
        np.asarray(thrust, dtype=float)
        - _GRAVITY_VEC
        - params.drag_coeff * state.velocity
        + np.asarray(disturbance, dtype=float)
    )
    accel[2] += ground_effect_lift(float(state.position[2]), params)
    velocity = state.velocity + accel * params.dt
    speed = float(np.sqrt(velocity @ velocity))
    if speed > params.max_speed:
        velocity = velocity * (params.max_speed / speed)
    position = state.position + velocity * params.dt
    if position[2] < 0.0:
        position = position.copy()
        position[2] = 0.0
        velocity = np.array([0.0, 0.0, max(0.0, velocity[2])])
    yaw = state.yaw
    if yaw_setpoint is not None:
        dyaw = normalize_yaw(yaw_setpoint - yaw)
        max_step = params.yaw_rate_limit * params.dt
        dyaw = min(max_step, max(-max_step, dyaw))
        yaw = normalize_yaw(yaw + dyaw)
    return VehicleState(position, velocity, yaw, state.time + params.dt)


def step(
    state: VehicleState,
    cmd: ControlCommand,
    params: VehicleParams,
    disturbance: np.ndarray,
    integrator: np.ndarray,
) -> tuple[VehicleState, np.ndarray]:
    """One closed-loop tick: controller, then physics. Returns state and
    the threaded PID integrator."""
    thrust, new_integrator = pid_accel(state, cmd, integrator, params.dt, params)
    new_state = step_with_thrust(
        state, thrust, params, disturbance, yaw_setpoint=cmd.setpoint.yaw
    )
    return new_state, new_integrator


@dataclass
class DisturbanceParams:
    """Gravity-bias profile: constant sag plus a slow vertical swell and
    mean-free horizontal noise, all scaled by one gain."""

    gain: float = 1.0
    bias: float = 0.3
    amplitude: float = 0.48
    frequency: float = 0.15
    xy_sigma: float = 0.05
    seed: int = 0
    dt: float = 0.01

    def to_dict(self) -> dict:
        return {
            "gain": self.gain,
            "bias": self.bias,
            "amplitude": self.amplitude,
            "frequency": self.frequency,
            "xy_sigma": self.xy_sigma,
            "seed": self.seed,
            "dt": self.dt,
        }


class DisturbanceSchedule:
    """Deterministic per-tick disturbance accelerations.

    Horizontal noise is drawn in antithetic pairs so its mean vanishes
    by construction; the vertical component is a negative bias plus a
    seeded-phase sinusoid.
    """

    def __init__(self, params: DisturbanceParams):
        self.params = params
        phase_rng = np.random.default_rng([params.seed, 0])
        self.phase = float(phase_rng.uniform(0.0, 2.0 * math.pi))
        self._pair_index = -1
        self._pair_noise = np.zeros(2)

    def _pair(self, pair: int) -> np.ndarray:
        if pair != self._pair_index:
            rng = np.random.default_rng([self.params.seed, 1, pair])
            self._pair_noise = rng.normal(0.0, self.params.xy_sigma, size=2)
            self._pair_index = pair
        return self._pair_noise

    def sample(self, tick: int) -> np.ndarray:
        p = self.params
        if p.gain == 0.0:
            return np.zeros(3)
        noise = self._pair(tick // 2)
        if tick % 2 == 1:
            noise = -noise
        t = tick * p.dt
        z = -(p.bias + p.amplitude * math.sin(2.0 * math.pi * p.frequency * t + self.phase))
        return p.gain * np.array([noise[0], noise[1], z])


def gravity_bias_profile(params: DisturbanceParams) -> DisturbanceSchedule:
    return DisturbanceSchedule(params)


@dataclass
class VehicleSim:
    """Convenience wrapper threading the PID integrator across ticks."""

    params: VehicleParams
    state: VehicleState = None  # type: ignore[assignment]
    integrator: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self) -> None:
        if self.state is None:
            self.state = VehicleState(np.zeros(3), np.zeros(3))

    def step(self, cmd: ControlCommand, disturbance: np.ndarray) -> VehicleState:
        self.state, self.integrator = step(
            self.state, cmd, self.params, disturbance, self.integrator
        )
        return self.state

    def step_motors_off(self, disturbance: np.ndarray) -> VehicleState:
        self.state = step_with_thrust(
            self.state, np.zeros(3), self.params, disturbance
        )
        self.integrator = np.zeros(3)
        return self.state
