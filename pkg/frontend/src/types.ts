// Wire protocol types. Field names mirror the server's JSON exactly;
// every message on the socket is one of ServerMessage.

export type MissionMode =
  | "idle"
  | "taking_off"
  | "manual_hover"
  | "autonomous"
  | "paused"
  | "landing"
  | "emergency_stop"
  | "complete";

export type CommandName =
  | "take_off"
  | "land"
  | "start_auto"
  | "pause"
  | "resume"
  | "estop";

export const COMMAND_NAMES: CommandName[] = [
  "take_off",
  "land",
  "start_auto",
  "pause",
  "resume",
  "estop",
];

export interface TelemetryFrame {
  t: number;
  true: number[];
  est: number[];
  yaw: number;
  mode: MissionMode;
  wp: number;
  wp_total: number;
  dwell: number;
}

export interface CommandReply {
  id: number;
  ok: boolean;
  reason: string;
}

export interface CommandMessage {
  cmd: CommandName;
  id: number;
}

export interface Box {
  min: number[];
  max: number[];
}

export interface Scene {
  name: string;
  world: {
    bounds: Box;
    target: Box[];
    anchors: { id: number; pos: number[] }[];
    safety_margin: number;
  };
  path: {
    planner: string;
    waypoints: { x: number; y: number; z: number; yaw: number }[];
    coverage: number;
  };
  dt: number;
  box_half_side: number;
  dwell_required: number;
  takeoff_altitude: number;
}

export type ServerMessage =
  | { kind: "scene"; scene: Scene }
  | { kind: "frame"; frame: TelemetryFrame }
  | { kind: "reply"; reply: CommandReply };

/** Classify one raw socket payload; null if it is not a known message. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof doc !== "object" || doc === null) return null;
  const obj = doc as Record<string, unknown>;
  if (typeof obj.scene === "object" && obj.scene !== null) {
    return { kind: "scene", scene: obj.scene as Scene };
  }
  if (
    typeof obj.id === "number" &&
    typeof obj.ok === "boolean" &&
    typeof obj.reason === "string"
  ) {
    return { kind: "reply", reply: obj as unknown as CommandReply };
  }
  if (
    typeof obj.t === "number" &&
    Array.isArray(obj.true) &&
    Array.isArray(obj.est) &&
    typeof obj.mode === "string"
  ) {
    return { kind: "frame", frame: obj as unknown as TelemetryFrame };
  }
  return null;
}
