"""FastAPI service: live mission over WebSocket plus a small REST
surface for health, defaults, and one-shot planning.

`create_app` binds one scenario to one simulation task; every
WebSocket client watches the same flight and may steer it.
"""

from __future__ import annotations

import asyncio
import json
import math
from contextlib import asynccontextmanager, suppress

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import ValidationError

from ..defaults import default_parameters
from ..errors import InspecsimError
from ..geometry import WorldModel, world_from_dict
from ..mission import OperatorCommand
from ..planner import SpiralParams, ViewpointParams, generate_sampling_path, generate_spiral
from ..scenario import Scenario
from .live import ClientChannel, LiveSim
from .schemas import (
    CommandMessage,
    CommandReply,
    HealthResponse,
    PlanRequest,
    PlanResponse,
)

__all__ = ["ClientChannel", "LiveSim", "create_app"]


async def _handle_command(sim: LiveSim, text: str) -> dict:
    """Parse one inbound message, run it through the mission queue, and
    return the reply payload."""
    request_id = -1
    try:
        raw = json.loads(text)
        if isinstance(raw, dict) and isinstance(raw.get("id"), int):
            request_id = raw["id"]
        msg = CommandMessage.model_validate(raw)
    except (json.JSONDecodeError, ValidationError) as exc:
        reason = f"malformed command: {exc.__class__.__name__}"
        return CommandReply(id=request_id, ok=False, reason=reason).model_dump()
    reply = await sim.submit(OperatorCommand(msg.cmd), msg.id)
    return reply.model_dump()


def _run_plan(request: PlanRequest, fallback_world: WorldModel) -> PlanResponse:
    world = (
        world_from_dict(request.world) if request.world is not None else fallback_world
    )
    if request.planner == "spiral":
        p = request.spiral
        path = generate_spiral(
            world,
            SpiralParams(
                standoff=p.standoff,
                z_min=p.z_min,
                z_max=p.z_max,
                vertical_interval=p.vertical_interval,
                points_per_ring=p.points_per_ring,
                direction=p.direction,
            ),
        )
    else:
        p = request.sampling
        path = generate_sampling_path(
            world,
            ViewpointParams(
                d_min=p.d_min,
                d_max=p.d_max,
                max_incidence=math.radians(p.max_incidence_deg),
                samples_per_facet=p.samples_per_facet,
                facet_size=p.facet_size,
                resample_rounds=p.resample_rounds,
                rng_seed=p.seed,
            ),
        )
    return PlanResponse(
        planner=path.planner_name,
        coverage=path.coverage,
        waypoints=[wp.to_dict() for wp in path.waypoints],
    )


def create_app(scenario: Scenario, speed: float = 1.0) -> FastAPI:
    sim = LiveSim(scenario, speed=speed)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        sim.start()
        yield
        await sim.stop()

    app = FastAPI(title="inspecsim", lifespan=lifespan)
    app.state.sim = sim

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        frame = sim.last_frame
        return HealthResponse(
            status="ok",
            mode=frame.mode if frame is not None else sim.runner.mode.value,
            t=frame.t if frame is not None else 0.0,
            clients=sim.client_count,
        )

    @app.get("/defaults")
    def defaults() -> dict:
        return default_parameters()

    @app.post("/plan", response_model=PlanResponse)
    def plan(request: PlanRequest) -> PlanResponse:
        try:
            return _run_plan(request, sim.scenario.world)
        except InspecsimError as exc:
            raise HTTPException(
                status_code=422,
                detail={"error": exc.code, "message": str(exc)},
            ) from exc

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        cid, channel = sim.attach()

        async def writer() -> None:
            while True:
                await ws.send_json(await channel.get())

        writer_task = asyncio.create_task(writer())
        try:
            while True:
                text = await ws.receive_text()
                channel.push_message(await _handle_command(sim, text))
        except WebSocketDisconnect:
            pass
        finally:
            sim.detach(cid)
            writer_task.cancel()
            with suppress(asyncio.CancelledError):
                await writer_task

    return app
