"""Pydantic models for the wire protocol and the REST endpoints.

Frame and reply field names are part of the protocol; every field is
present in every message.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..mission import TelemetryRecord

CommandName = Literal["take_off", "land", "start_auto", "pause", "resume", "estop"]


class TelemetryFrame(BaseModel):
    """One telemetry sample published to every connected client."""

    t: float
    true: list[float] = Field(min_length=3, max_length=3)
    est: list[float] = Field(min_length=3, max_length=3)
    yaw: float
    mode: str
    wp: int
    wp_total: int
    dwell: float

    @classmethod
    def from_record(cls, record: TelemetryRecord, wp_total: int) -> "TelemetryFrame":
        return cls(
            t=record.t,
            true=list(record.true_pos),
            est=list(record.est_pos),
            yaw=record.yaw,
            mode=record.mode,
            wp=record.wp,
            wp_total=wp_total,
            dwell=record.dwell,
        )


class CommandMessage(BaseModel):
    """Operator request sent by a client; id is echoed in the reply."""

    cmd: CommandName
    id: int


class CommandReply(BaseModel):
    id: int
    ok: bool
    reason: str


class SceneMessage(BaseModel):
    """One-time layout payload sent right after a client connects."""

    scene: dict


class HealthResponse(BaseModel):
    status: str
    mode: str
    t: float
    clients: int


class SpiralPlanParams(BaseModel):
    standoff: float = 0.6
    z_min: float = 0.3
    z_max: float = 1.2
    vertical_interval: float = 0.3
    points_per_ring: int = 32
    direction: Literal["ccw", "cw"] = "ccw"


class SamplingPlanParams(BaseModel):
    d_min: float = 0.4
    d_max: float = 1.2
    max_incidence_deg: float = 60.0
    samples_per_facet: int = 200
    facet_size: float = 0.5
    resample_rounds: int = 8
    seed: int = 0


class PlanRequest(BaseModel):
    """Plan against an inline world, or the served scenario's world."""

    planner: Literal["spiral", "sampling"]
    world: dict | None = None
    spiral: SpiralPlanParams = SpiralPlanParams()
    sampling: SamplingPlanParams = SamplingPlanParams()


class PlanResponse(BaseModel):
    planner: str
    coverage: float
    waypoints: list[dict]
