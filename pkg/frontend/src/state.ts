// Console state and the pure update logic behind every widget.
// Keeping this free of DOM and socket code lets the tests drive it
// with recorded messages.

import {
  CommandMessage,
  CommandName,
  MissionMode,
  Scene,
  ServerMessage,
  TelemetryFrame,
} from "./types.js";

// a vehicle is airborne once its true altitude clears this height (m)
export const AIRBORNE_Z = 0.05;
// with no frame for this long the display is stale (ms)
export const STALE_AFTER_MS = 1000;
// a command with no reply for this long is marked unacknowledged (ms)
export const ACK_TIMEOUT_MS = 2000;
// bounded history lengths for the map trail and altitude strip
const TRAIL_LIMIT = 1200;
const STRIP_LIMIT = 1200;

export interface ModeChange {
  t: number;
  mode: MissionMode;
}

export interface AckEntry {
  id: number;
  cmd: CommandName | null;
  ok: boolean;
  reason: string;
}

export interface PendingCommand {
  cmd: CommandName;
  sentAtMs: number;
}

// history marker for a command whose reply never arrived
export const UNACKNOWLEDGED = "unacknowledged";

export interface StripSample {
  t: number;
  trueZ: number;
  estZ: number;
}

export interface ConsoleState {
  scene: Scene | null;
  frame: TelemetryFrame | null;
  lastFrameAtMs: number | null;
  modeTimeline: ModeChange[];
  trail: [number, number][];
  strip: StripSample[];
  pending: Map<number, PendingCommand>;
  acks: AckEntry[];
  notice: string | null;
  nextId: number;
}

export function emptyState(): ConsoleState {
  return {
    scene: null,
    frame: null,
    lastFrameAtMs: null,
    modeTimeline: [],
    trail: [],
    strip: [],
    pending: new Map(),
    acks: [],
    notice: null,
    nextId: 1,
  };
}

function pushFrame(state: ConsoleState, frame: TelemetryFrame, nowMs: number): void {
  const previous = state.frame;
  state.frame = frame;
  state.lastFrameAtMs = nowMs;
  if (previous === null || previous.mode !== frame.mode) {
    state.modeTimeline.push({ t: frame.t, mode: frame.mode });
  }
  state.trail.push([frame.true[0], frame.true[1]]);
  if (state.trail.length > TRAIL_LIMIT) state.trail.shift();
  state.strip.push({ t: frame.t, trueZ: frame.true[2], estZ: frame.est[2] });
  if (state.strip.length > STRIP_LIMIT) state.strip.shift();
}

function pushReply(state: ConsoleState, id: number, ok: boolean, reason: string): void {
  const entry = state.pending.get(id);
  state.pending.delete(id);
  if (entry === undefined) {
    // a reply after the timeout sweep upgrades the history row in place
    const row = state.acks.find((a) => a.id === id && a.reason === UNACKNOWLEDGED);
    if (row !== undefined) {
      row.ok = ok;
      row.reason = reason;
    } else {
      state.acks.push({ id, cmd: null, ok, reason });
    }
  } else {
    state.acks.push({ id, cmd: entry.cmd, ok, reason });
  }
  // surface rejection reasons verbatim; a success clears the notice
  state.notice = ok ? null : reason;
}

/** Fold one decoded server message into the console state. */
export function applyServer(
  state: ConsoleState,
  msg: ServerMessage,
  nowMs: number,
): void {
  switch (msg.kind) {
    case "scene":
      state.scene = msg.scene;
      break;
    case "frame":
      pushFrame(state, msg.frame, nowMs);
      break;
    case "reply":
      pushReply(state, msg.reply.id, msg.reply.ok, msg.reply.reason);
      break;
  }
}

/** Allocate a request id and remember the command until its reply. */
export function recordSend(
  state: ConsoleState,
  cmd: CommandName,
  nowMs: number,
): CommandMessage {
  const id = state.nextId;
  state.nextId += 1;
  state.pending.set(id, { cmd, sentAtMs: nowMs });
  return { cmd, id };
}

/** Move commands past the reply deadline into the history as unacknowledged. */
export function expireCommands(state: ConsoleState, nowMs: number): void {
  for (const [id, entry] of state.pending) {
    if (nowMs - entry.sentAtMs > ACK_TIMEOUT_MS) {
      state.pending.delete(id);
      state.acks.push({ id, cmd: entry.cmd, ok: false, reason: UNACKNOWLEDGED });
    }
  }
}

/**
 * Most recent command history lines, oldest first: resolved commands
 * show ok or the server's reason verbatim, unresolved ones show as
 * waiting.
 */
export function historyRows(state: ConsoleState, limit: number): string[] {
  const rows: Array<{ id: number; text: string }> = [];
  for (const entry of state.acks) {
    const name = entry.cmd ?? "?";
    const status = entry.ok ? "ok" : entry.reason;
    rows.push({ id: entry.id, text: `#${entry.id} ${name}: ${status}` });
  }
  for (const [id, entry] of state.pending) {
    rows.push({ id, text: `#${id} ${entry.cmd}: waiting` });
  }
  rows.sort((a, b) => a.id - b.id);
  return rows.slice(-limit).map((r) => r.text);
}

export function airborne(state: ConsoleState): boolean {
  return state.frame !== null && state.frame.true[2] > AIRBORNE_Z;
}

/**
 * Which buttons are live. This mirrors the mission state machine: a
 * command is enabled exactly when the server would accept it, so a
 * disabled button and a server rejection always agree.
 */
export function enabledCommands(state: ConsoleState): Record<CommandName, boolean> {
  const mode: MissionMode | null = state.frame ? state.frame.mode : null;
  const up = airborne(state);
  return {
    take_off: mode === "idle",
    start_auto: mode === "manual_hover" && up,
    pause: mode === "autonomous",
    resume: mode === "paused",
    land:
      mode === "manual_hover" ||
      mode === "autonomous" ||
      mode === "paused" ||
      mode === "complete",
    estop: mode !== null,
  };
}

export function isStale(state: ConsoleState, nowMs: number): boolean {
  if (state.lastFrameAtMs === null) return true;
  return nowMs - state.lastFrameAtMs > STALE_AFTER_MS;
}

/** Fraction of the required dwell already accumulated, clamped to [0, 1]. */
export function dwellFraction(state: ConsoleState): number {
  if (state.frame === null || state.scene === null) return 0;
  const required = state.scene.dwell_required;
  if (required <= 0) return 0;
  return Math.min(1, Math.max(0, state.frame.dwell / required));
}

export function waypointLabel(state: ConsoleState): string {
  if (state.frame === null) return "-/-";
  return `${Math.min(state.frame.wp + 1, state.frame.wp_total)}/${state.frame.wp_total}`;
}
