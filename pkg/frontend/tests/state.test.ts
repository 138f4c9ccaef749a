import { beforeEach, describe, expect, it } from "vitest";

import {
  ACK_TIMEOUT_MS,
  AIRBORNE_Z,
  ConsoleState,
  STALE_AFTER_MS,
  UNACKNOWLEDGED,
  airborne,
  applyServer,
  dwellFraction,
  emptyState,
  enabledCommands,
  expireCommands,
  historyRows,
  isStale,
  recordSend,
  waypointLabel,
} from "../src/state.js";
import { MissionMode, Scene, TelemetryFrame } from "../src/types.js";

function frame(over: Partial<TelemetryFrame> = {}): TelemetryFrame {
  return {
    t: 1.0,
    true: [0, 0, 0.3],
    est: [0, 0, 0.3],
    yaw: 0,
    mode: "manual_hover",
    wp: 0,
    wp_total: 3,
    dwell: 0,
    ...over,
  };
}

function scene(): Scene {
  return {
    name: "t",
    world: {
      bounds: { min: [-3, -3, 0], max: [3, 3, 2.5] },
      target: [],
      anchors: [],
      safety_margin: 0.2,
    },
    path: { planner: "manual", waypoints: [], coverage: 1 },
    dt: 0.01,
    box_half_side: 0.075,
    dwell_required: 0.5,
    takeoff_altitude: 0.3,
  };
}

function feedFrame(state: ConsoleState, f: TelemetryFrame, nowMs = 0): void {
  applyServer(state, { kind: "frame", frame: f }, nowMs);
}

describe("mode timeline", () => {
  let state: ConsoleState;
  beforeEach(() => {
    state = emptyState();
  });

  it("records first mode and every change, skipping repeats", () => {
    feedFrame(state, frame({ t: 0.0, mode: "idle" }));
    feedFrame(state, frame({ t: 0.1, mode: "idle" }));
    feedFrame(state, frame({ t: 0.2, mode: "taking_off" }));
    feedFrame(state, frame({ t: 0.3, mode: "taking_off" }));
    feedFrame(state, frame({ t: 0.4, mode: "manual_hover" }));
    expect(state.modeTimeline).toEqual([
      { t: 0.0, mode: "idle" },
      { t: 0.2, mode: "taking_off" },
      { t: 0.4, mode: "manual_hover" },
    ]);
  });

  it("keeps bounded position history", () => {
    for (let i = 0; i < 1500; i++) {
      feedFrame(state, frame({ t: i * 0.05 }));
    }
    expect(state.trail.length).toBeLessThanOrEqual(1200);
    expect(state.strip.length).toBeLessThanOrEqual(1200);
  });
});

describe("command bookkeeping", () => {
  it("assigns sequential ids and resolves acks in arrival order", () => {
    const state = emptyState();
    const first = recordSend(state, "take_off", 0);
    const second = recordSend(state, "pause", 0);
    expect(first.id).toBe(1);
    expect(second.id).toBe(2);
    applyServer(state, { kind: "reply", reply: { id: 1, ok: true, reason: "" } }, 0);
    applyServer(
      state,
      { kind: "reply", reply: { id: 2, ok: false, reason: "pause ignored in taking_off" } },
      0,
    );
    expect(state.acks.map((a) => a.id)).toEqual([1, 2]);
    expect(state.acks[0].cmd).toBe("take_off");
    expect(state.acks[1].cmd).toBe("pause");
    expect(state.pending.size).toBe(0);
  });

  it("surfaces the rejection reason verbatim and clears it on success", () => {
    const state = emptyState();
    recordSend(state, "start_auto", 0);
    applyServer(
      state,
      { kind: "reply", reply: { id: 1, ok: false, reason: "not airborne" } },
      0,
    );
    expect(state.notice).toBe("not airborne");
    recordSend(state, "take_off", 0);
    applyServer(state, { kind: "reply", reply: { id: 2, ok: true, reason: "" } }, 0);
    expect(state.notice).toBeNull();
  });

  it("marks a command unacknowledged once the reply deadline passes", () => {
    const state = emptyState();
    recordSend(state, "take_off", 1000);
    expireCommands(state, 1000 + ACK_TIMEOUT_MS);
    expect(state.acks).toEqual([]);
    expireCommands(state, 1001 + ACK_TIMEOUT_MS);
    expect(state.pending.size).toBe(0);
    expect(state.acks).toEqual([
      { id: 1, cmd: "take_off", ok: false, reason: UNACKNOWLEDGED },
    ]);
  });

  it("upgrades an unacknowledged row in place when the reply arrives late", () => {
    const state = emptyState();
    recordSend(state, "pause", 0);
    expireCommands(state, ACK_TIMEOUT_MS + 1);
    applyServer(state, { kind: "reply", reply: { id: 1, ok: true, reason: "" } }, 0);
    expect(state.acks).toEqual([{ id: 1, cmd: "pause", ok: true, reason: "" }]);
  });

  it("renders history rows oldest first with waiting entries last", () => {
    const state = emptyState();
    recordSend(state, "take_off", 0);
    applyServer(state, { kind: "reply", reply: { id: 1, ok: true, reason: "" } }, 0);
    recordSend(state, "start_auto", 0);
    applyServer(
      state,
      { kind: "reply", reply: { id: 2, ok: false, reason: "not airborne" } },
      0,
    );
    recordSend(state, "land", 0);
    expect(historyRows(state, 8)).toEqual([
      "#1 take_off: ok",
      "#2 start_auto: not airborne",
      "#3 land: waiting",
    ]);
    expect(historyRows(state, 2)).toEqual([
      "#2 start_auto: not airborne",
      "#3 land: waiting",
    ]);
  });
});

describe("enabledCommands", () => {
  const cases: Array<{
    mode: MissionMode;
    z: number;
    enabled: string[];
  }> = [
    { mode: "idle", z: 0.0, enabled: ["take_off", "estop"] },
    { mode: "taking_off", z: 0.2, enabled: ["estop"] },
    // airborne requires true z above the threshold, not just the mode
    { mode: "manual_hover", z: 0.0, enabled: ["land", "estop"] },
    { mode: "manual_hover", z: 0.3, enabled: ["start_auto", "land", "estop"] },
    { mode: "autonomous", z: 0.3, enabled: ["pause", "land", "estop"] },
    { mode: "paused", z: 0.3, enabled: ["resume", "land", "estop"] },
    { mode: "landing", z: 0.1, enabled: ["estop"] },
    { mode: "emergency_stop", z: 0.0, enabled: ["estop"] },
    { mode: "complete", z: 0.3, enabled: ["land", "estop"] },
  ];

  for (const { mode, z, enabled } of cases) {
    it(`matches the mission state machine for ${mode} at z=${z}`, () => {
      const state = emptyState();
      feedFrame(state, frame({ mode, true: [0, 0, z] }));
      const got = enabledCommands(state);
      for (const [cmd, on] of Object.entries(got)) {
        expect(on, `${cmd} in ${mode}`).toBe(enabled.includes(cmd));
      }
    });
  }

  it("disables everything before the first frame", () => {
    const got = enabledCommands(emptyState());
    expect(Object.values(got).every((v) => !v)).toBe(true);
  });

  it("uses the true altitude for the airborne gate", () => {
    const state = emptyState();
    feedFrame(state, frame({ mode: "manual_hover", true: [0, 0, AIRBORNE_Z] }));
    expect(airborne(state)).toBe(false);
    expect(enabledCommands(state).start_auto).toBe(false);
    feedFrame(state, frame({ mode: "manual_hover", true: [0, 0, AIRBORNE_Z + 0.01] }));
    expect(enabledCommands(state).start_auto).toBe(true);
  });
});

describe("display helpers", () => {
  it("reports staleness from the last frame wall time", () => {
    const state = emptyState();
    expect(isStale(state, 0)).toBe(true);
    feedFrame(state, frame(), 1000);
    expect(isStale(state, 1000 + STALE_AFTER_MS)).toBe(false);
    expect(isStale(state, 1001 + STALE_AFTER_MS)).toBe(true);
  });

  it("computes the dwell fill fraction against the scene requirement", () => {
    const state = emptyState();
    applyServer(state, { kind: "scene", scene: scene() }, 0);
    expect(dwellFraction(state)).toBe(0);
    feedFrame(state, frame({ dwell: 0.25 }));
    expect(dwellFraction(state)).toBeCloseTo(0.5, 10);
    feedFrame(state, frame({ dwell: 0.7 }));
    expect(dwellFraction(state)).toBe(1);
  });

  it("labels the active waypoint one-based and clamps at the end", () => {
    const state = emptyState();
    expect(waypointLabel(state)).toBe("-/-");
    feedFrame(state, frame({ wp: 0, wp_total: 3 }));
    expect(waypointLabel(state)).toBe("1/3");
    feedFrame(state, frame({ wp: 3, wp_total: 3 }));
    expect(waypointLabel(state)).toBe("3/3");
  });
});
