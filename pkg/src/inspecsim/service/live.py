"""Live simulation engine behind the WebSocket service.

One asyncio task owns the mission runner and advances it at wall-clock
pace (scaled by speed). Client sessions never touch mission state:
commands go in through a queue and are applied at the next tick
boundary; telemetry frames fan out through per-client channels that
drop the oldest frame when a consumer falls behind, so a slow client
can never stall the fixed-dt loop.
"""

from __future__ import annotations

import asyncio
from collections import deque
from dataclasses import dataclass, field

from ..mission import MissionRunner, OperatorCommand
from ..scenario import Scenario, build_runner
from .schemas import CommandReply, TelemetryFrame

# publish every Nth tick so the wire rate is 20 Hz at dt = 0.01
FRAME_RATE_HZ = 20.0
# bounded per-client buffer; beyond this the oldest frame is dropped
CLIENT_QUEUE_LIMIT = 256
# if the loop falls this far behind (wall seconds), re-anchor instead
# of bursting to catch up
_MAX_LAG = 1.0


@dataclass
class _PendingCommand:
    command: OperatorCommand
    request_id: int
    future: asyncio.Future


class ClientChannel:
    """Ordered outbound buffer for one client.

    Frames are droppable (oldest first); scene and reply messages are
    never dropped.
    """

    def __init__(self, limit: int = CLIENT_QUEUE_LIMIT):
        self._items: deque[tuple[bool, dict]] = deque()
        self._wakeup = asyncio.Event()
        self._limit = limit
        self.dropped = 0

    def push_frame(self, payload: dict) -> None:
        if len(self._items) >= self._limit:
            for i, (droppable, _) in enumerate(self._items):
                if droppable:
                    del self._items[i]
                    self.dropped += 1
                    break
            else:
                self.dropped += 1
                return
        self._items.append((True, payload))
        self._wakeup.set()

    def push_message(self, payload: dict) -> None:
        self._items.append((False, payload))
        self._wakeup.set()

    async def get(self) -> dict:
        while not self._items:
            self._wakeup.clear()
            await self._wakeup.wait()
        return self._items.popleft()[1]


class LiveSim:
    """Wall-clock-paced simulation shared by all connected clients."""

    def __init__(self, scenario: Scenario, speed: float = 1.0):
        if speed <= 0.0:
            raise ValueError("speed must be positive")
        self.scenario = scenario
        self.speed = speed
        self.runner: MissionRunner = build_runner(scenario)
        self.decimation = max(1, round(1.0 / (FRAME_RATE_HZ * scenario.dt)))
        self._clients: dict[int, ClientChannel] = {}
        self._next_client_id = 0
        self._commands: deque[_PendingCommand] = deque()
        self._task: asyncio.Task | None = None
        self._stopping = asyncio.Event()
        self.last_frame: TelemetryFrame | None = None

    # -- client bookkeeping -------------------------------------------------

    @property
    def client_count(self) -> int:
        return len(self._clients)

    def attach(self) -> tuple[int, ClientChannel]:
        cid = self._next_client_id
        self._next_client_id += 1
        channel = ClientChannel()
        channel.push_message({"scene": self.scene_payload()})
        self._clients[cid] = channel
        return cid, channel

    def detach(self, cid: int) -> None:
        self._clients.pop(cid, None)

    def scene_payload(self) -> dict:
        scn = self.scenario
        return {
            "name": scn.name,
            "world": scn.world.to_dict(),
            "path": scn.path.to_dict(),
            "dt": scn.dt,
            "box_half_side": scn.box_half_side,
            "dwell_required": scn.dwell_required,
            "takeoff_altitude": scn.takeoff_altitude,
        }

    # -- command intake -----------------------------------------------------

    def submit(self, command: OperatorCommand, request_id: int) -> asyncio.Future:
        """Queue a command; the future resolves to a CommandReply once
        the sim task applies it at a tick boundary."""
        fut = asyncio.get_running_loop().create_future()
        self._commands.append(_PendingCommand(command, request_id, fut))
        return fut

    # -- simulation loop ----------------------------------------------------

    def start(self) -> None:
        if self._task is None:
            self._stopping.clear()
            self._task = asyncio.ensure_future(self._run())

    async def stop(self) -> None:
        self._stopping.set()
        if self._task is not None:
            await self._task
            self._task = None
        while self._commands:
            pending = self._commands.popleft()
            if not pending.future.done():
                pending.future.cancel()

    def _apply_pending(self) -> None:
        while self._commands:
            pending = self._commands.popleft()
            result = self.runner.apply_command(pending.command)
            reply = CommandReply(
                id=pending.request_id, ok=result.accepted, reason=result.reason
            )
            if not pending.future.done():
                pending.future.set_result(reply)

    async def _run(self) -> None:
        loop = asyncio.get_running_loop()
        period = self.scenario.dt / self.speed
        next_deadline = loop.time()
        tick = 0
        while not self._stopping.is_set():
            self._apply_pending()
            record = self.runner.tick()
            tick += 1
            if tick % self.decimation == 0:
                frame = TelemetryFrame.from_record(record, self.runner.wp_total)
                self.last_frame = frame
                payload = frame.model_dump()
                for channel in self._clients.values():
                    channel.push_frame(payload)
            next_deadline += period
            delay = next_deadline - loop.time()
            if delay > 0.0:
                await asyncio.sleep(delay)
            elif delay < -_MAX_LAG:
                next_deadline = loop.time()
                await asyncio.sleep(0)
            else:
                # yield so sessions run even when flat out
                await asyncio.sleep(0)
