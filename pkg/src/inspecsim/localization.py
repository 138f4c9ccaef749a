"""Anchor ranging and EKF position estimation.

Distance measurements to fixed anchors are simulated one anchor per tick
(round robin, mimicking two-way ranging) and fused by a six-state
constant-velocity extended Kalman filter. Mission control consumes the
estimate, never ground truth.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .geometry import Anchor

# below this tag-anchor distance the range Jacobian is undefined
_DEGENERATE_RANGE = 1e-6
# innovations beyond this many sigmas are discarded as outliers
_GATE_SIGMAS = 5.0

_EYE6 = np.eye(6)
# (dt, q) -> (transition, process noise); both constant for a fixed tick
_MODEL_CACHE: dict[tuple[float, float], tuple[np.ndarray, np.ndarray]] = {}


@dataclass
class NoiseModel:
    range_sigma: float = 0.05
    range_bias: float = 0.0
    dropout_prob: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.range_sigma < 0.0:
            raise ValueError("range_sigma must be >= 0")
        if not 0.0 <= self.dropout_prob <= 1.0:
            raise ValueError("dropout_prob must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "range_sigma": self.range_sigma,
            "range_bias": self.range_bias,
            "dropout_prob": self.dropout_prob,
            "seed": self.seed,
        }


@dataclass
class RangeMeasurement:
    anchor_id: int
    distance: float
    timestamp: float


@dataclass
class EstimatorState:
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self) -> None:
        self.mean = np.asarray(self.mean, dtype=float).reshape(6)
        self.covariance = np.asarray(self.covariance, dtype=float).reshape(6, 6)

    @property
    def position(self) -> np.ndarray:
        return self.mean[:3]

    @property
    def velocity(self) -> np.ndarray:
        return self.mean[3:]

    def copy(self) -> "EstimatorState":
        return EstimatorState(self.mean.copy(), self.covariance.copy())


class UpdateOutcome(enum.Enum):
    UPDATED = "updated"
    GATED = "gated"
    DEGENERATE = "degenerate"


def simulate_range(
    true_pos: np.ndarray,
    anchor: Anchor,
    noise: NoiseModel,
    rng: np.random.Generator,
    t: float = 0.0,
) -> RangeMeasurement | None:
    """One TWR distance draw; None models a dropped packet."""
    # draw order is fixed so dropout settings do not shift the noise stream
    u = rng.uniform()
    eps = rng.normal(0.0, noise.range_sigma) if noise.range_sigma > 0.0 else 0.0
    if u < noise.dropout_prob:
        return None
    delta = np.asarray(true_pos, dtype=float) - anchor.position
    truth = float(np.sqrt(delta @ delta))
    return RangeMeasurement(
        anchor_id=anchor.id,
        distance=max(0.0, truth + noise.range_bias + eps),
        timestamp=t,
    )


def _symmetrize(p: np.ndarray) -> np.ndarray:
    return (p + p.T) / 2.0


def process_noise_matrix(dt: float, q: float) -> np.ndarray:
    """White-acceleration process noise for the constant-velocity model."""
    eye = np.eye(3)
    qpp = (dt**3) / 3.0 * eye
    qpv = (dt**2) / 2.0 * eye
    qvv = dt * eye
    top = np.hstack([qpp, qpv])
    bot = np.hstack([qpv, qvv])
    return q * q * np.vstack([top, bot])


def _model_matrices(dt: float, q: float) -> tuple[np.ndarray, np.ndarray]:
    key = (dt, q)
    cached = _MODEL_CACHE.get(key)
    if cached is None:
        f = np.eye(6)
        f[:3, 3:] = dt * np.eye(3)
        cached = (f, process_noise_matrix(dt, q))
        _MODEL_CACHE[key] = cached
    return cached


def ekf_predict(est: EstimatorState, dt: float, q: float) -> EstimatorState:
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    f, noise = _model_matrices(dt, q)
    mean = f @ est.mean
    cov = _symmetrize(f @ est.covariance @ f.T + noise)
    return EstimatorState(mean, cov)


def range_jacobian(mean: np.ndarray, anchor_pos: np.ndarray) -> np.ndarray:
    """Row vector dh/dx for h(x) = distance from position to the anchor."""
    delta = mean[:3] - anchor_pos
    r = float(np.linalg.norm(delta))
    row = np.zeros(6)
    row[:3] = delta / r
    return row


def ekf_update_range(
    est: EstimatorState,
    meas: RangeMeasurement,
    anchor: Anchor,
    sigma: float,
) -> tuple[EstimatorState, UpdateOutcome]:
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    delta = est.mean[:3] - anchor.position
    r = float(np.sqrt(delta @ delta))
    if r <= _DEGENERATE_RANGE:
        return est, UpdateOutcome.DEGENERATE
    h_row = np.zeros(6)
    h_row[:3] = delta / r
    innovation = meas.distance - r
    s = float(h_row @ est.covariance @ h_row) + sigma * sigma
    if abs(innovation) > _GATE_SIGMAS * np.sqrt(s):
        return est, UpdateOutcome.GATED
    k = (est.covariance @ h_row) / s
    mean = est.mean + k * innovation
    ikh = _EYE6 - np.outer(k, h_row)
    cov = ikh @ est.covariance @ ikh.T + np.outer(k, k) * sigma * sigma
    return EstimatorState(mean, _symmetrize(cov)), UpdateOutcome.UPDATED


@dataclass
class RangeEkf:
    """Stateful round-robin estimator driven once per simulation tick."""

    anchors: list[Anchor]
    noise: NoiseModel
    process_noise: float = 0.6
    state: EstimatorState = None  # type: ignore[assignment]
    initial_pos: tuple[float, float, float] = (0.0, 0.0, 0.0)
    initial_pos_var: float = 0.01
    initial_vel_var: float = 0.01
    measurement_count: int = field(default=0)
    update_count: int = field(default=0)
    gated_count: int = field(default=0)
    degenerate_count: int = field(default=0)

    def __post_init__(self) -> None:
        if len(self.anchors) < 4:
            raise ValueError("range localization needs at least 4 anchors")
        if self.state is None:
            mean = np.zeros(6)
            mean[:3] = np.asarray(self.initial_pos, dtype=float)
            cov = np.diag(
                [self.initial_pos_var] * 3 + [self.initial_vel_var] * 3
            ).astype(float)
            self.state = EstimatorState(mean, cov)

    def _rng(self) -> np.random.Generator:
        return np.random.default_rng([self.noise.seed, self.measurement_count])

    def tick(self, true_pos: np.ndarray, t: float, dt: float) -> EstimatorState:
        """Predict, then range one anchor and update. Returns a snapshot."""
        self.state = ekf_predict(self.state, dt, self.process_noise)
        anchor = self.anchors[self.measurement_count % len(self.anchors)]
        rng = self._rng()
        meas = simulate_range(true_pos, anchor, self.noise, rng, t)
        self.measurement_count += 1
        if meas is not None:
            sigma = max(self.noise.range_sigma, 1e-3)
            self.state, outcome = ekf_update_range(self.state, meas, anchor, sigma)
            if outcome is UpdateOutcome.UPDATED:
                self.update_count += 1
            elif outcome is UpdateOutcome.GATED:
                self.gated_count += 1
            else:
                self.degenerate_count += 1
        return self.state.copy()
