// Canvas rendering: top-down map, altitude strip, and the dwell bar.
// Pure drawing only; all state comes in through ConsoleState.

import { ConsoleState, dwellFraction } from "./state.js";
import { Box, Scene } from "./types.js";

const COLORS = {
  background: "#10141a",
  grid: "#222a33",
  bounds: "#3d4c5e",
  target: "#7a5230",
  targetEdge: "#c9853f",
  anchor: "#4fc1e9",
  path: "#39597a",
  waypoint: "#5d8cc4",
  activeWaypoint: "#ffd166",
  trail: "#3fb57f",
  truePose: "#48e09a",
  estPose: "#e05c6e",
  text: "#cfd8e3",
  dwellFill: "#ffd166",
  stripTrue: "#48e09a",
  stripEst: "#e05c6e",
};

export interface Projector {
  x(wx: number): number;
  y(wy: number): number;
  scale: number;
}

/**
 * Map world xy onto a canvas of the given size, preserving aspect and
 * leaving a uniform margin. Canvas y runs downward, world y upward.
 */
export function mapProjector(
  bounds: Box,
  width: number,
  height: number,
  margin = 20,
): Projector {
  const spanX = bounds.max[0] - bounds.min[0];
  const spanY = bounds.max[1] - bounds.min[1];
  const scale = Math.min(
    (width - 2 * margin) / spanX,
    (height - 2 * margin) / spanY,
  );
  const offX = (width - scale * spanX) / 2;
  const offY = (height - scale * spanY) / 2;
  return {
    x: (wx) => offX + (wx - bounds.min[0]) * scale,
    y: (wy) => height - offY - (wy - bounds.min[1]) * scale,
    scale,
  };
}

function drawSceneLayers(
  ctx: CanvasRenderingContext2D,
  scene: Scene,
  p: Projector,
): void {
  const b = scene.world.bounds;
  ctx.strokeStyle = COLORS.bounds;
  ctx.lineWidth = 1.5;
  ctx.strokeRect(
    p.x(b.min[0]),
    p.y(b.max[1]),
    (b.max[0] - b.min[0]) * p.scale,
    (b.max[1] - b.min[1]) * p.scale,
  );

  for (const box of scene.world.target) {
    const w = (box.max[0] - box.min[0]) * p.scale;
    const h = (box.max[1] - box.min[1]) * p.scale;
    ctx.fillStyle = COLORS.target;
    ctx.fillRect(p.x(box.min[0]), p.y(box.max[1]), w, h);
    ctx.strokeStyle = COLORS.targetEdge;
    ctx.lineWidth = 1;
    ctx.strokeRect(p.x(box.min[0]), p.y(box.max[1]), w, h);
  }

  ctx.fillStyle = COLORS.anchor;
  for (const anchor of scene.world.anchors) {
    ctx.beginPath();
    ctx.arc(p.x(anchor.pos[0]), p.y(anchor.pos[1]), 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawPath(
  ctx: CanvasRenderingContext2D,
  scene: Scene,
  p: Projector,
  activeWp: number,
): void {
  const wps = scene.path.waypoints;
  if (wps.length === 0) return;
  ctx.strokeStyle = COLORS.path;
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(p.x(wps[0].x), p.y(wps[0].y));
  for (const wp of wps.slice(1)) ctx.lineTo(p.x(wp.x), p.y(wp.y));
  ctx.stroke();
  wps.forEach((wp, i) => {
    ctx.fillStyle = i === activeWp ? COLORS.activeWaypoint : COLORS.waypoint;
    ctx.beginPath();
    ctx.arc(p.x(wp.x), p.y(wp.y), i === activeWp ? 4 : 2.5, 0, 2 * Math.PI);
    ctx.fill();
  });
}

function drawVehicle(
  ctx: CanvasRenderingContext2D,
  state: ConsoleState,
  p: Projector,
): void {
  const frame = state.frame;
  if (frame === null) return;

  if (state.trail.length > 1) {
    ctx.strokeStyle = COLORS.trail;
    ctx.globalAlpha = 0.5;
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.moveTo(p.x(state.trail[0][0]), p.y(state.trail[0][1]));
    for (const [x, y] of state.trail.slice(1)) ctx.lineTo(p.x(x), p.y(y));
    ctx.stroke();
    ctx.globalAlpha = 1;
  }

  // estimate: hollow ring; truth: filled dot with a yaw tick
  ctx.strokeStyle = COLORS.estPose;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(p.x(frame.est[0]), p.y(frame.est[1]), 6, 0, 2 * Math.PI);
  ctx.stroke();

  const tx = p.x(frame.true[0]);
  const ty = p.y(frame.true[1]);
  ctx.fillStyle = COLORS.truePose;
  ctx.beginPath();
  ctx.arc(tx, ty, 5, 0, 2 * Math.PI);
  ctx.fill();
  ctx.strokeStyle = COLORS.truePose;
  ctx.beginPath();
  ctx.moveTo(tx, ty);
  ctx.lineTo(tx + 12 * Math.cos(frame.yaw), ty - 12 * Math.sin(frame.yaw));
  ctx.stroke();
}

export function drawMap(
  ctx: CanvasRenderingContext2D,
  state: ConsoleState,
  width: number,
  height: number,
): void {
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, width, height);
  if (state.scene === null) {
    ctx.fillStyle = COLORS.text;
    ctx.font = "14px sans-serif";
    ctx.fillText("waiting for scene...", 16, 24);
    return;
  }
  const p = mapProjector(state.scene.world.bounds, width, height);
  drawSceneLayers(ctx, state.scene, p);
  drawPath(ctx, state.scene, p, state.frame ? state.frame.wp : -1);
  drawVehicle(ctx, state, p);
}

export function drawAltitudeStrip(
  ctx: CanvasRenderingContext2D,
  state: ConsoleState,
  width: number,
  height: number,
): void {
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, width, height);
  if (state.scene === null || state.strip.length < 2) return;
  const zMax = state.scene.world.bounds.max[2];
  const t1 = state.strip[state.strip.length - 1].t;
  const span = Math.max(10, t1 - state.strip[0].t);
  const t0 = t1 - span;
  const px = (t: number) => ((t - t0) / span) * (width - 10) + 5;
  const py = (z: number) => height - 5 - (z / zMax) * (height - 20);

  ctx.strokeStyle = COLORS.grid;
  ctx.lineWidth = 1;
  for (const z of [0.5, 1.0, 1.5, 2.0]) {
    if (z >= zMax) continue;
    ctx.beginPath();
    ctx.moveTo(0, py(z));
    ctx.lineTo(width, py(z));
    ctx.stroke();
  }

  for (const [key, color] of [
    ["trueZ", COLORS.stripTrue],
    ["estZ", COLORS.stripEst],
  ] as const) {
    ctx.strokeStyle = color;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.moveTo(px(state.strip[0].t), py(state.strip[0][key]));
    for (const s of state.strip.slice(1)) ctx.lineTo(px(s.t), py(s[key]));
    ctx.stroke();
  }

  ctx.fillStyle = COLORS.text;
  ctx.font = "11px sans-serif";
  const last = state.strip[state.strip.length - 1];
  ctx.fillText(`z ${last.trueZ.toFixed(2)} m`, 8, 14);
}

export function drawDwellBar(
  ctx: CanvasRenderingContext2D,
  state: ConsoleState,
  width: number,
  height: number,
): void {
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, width, height);
  ctx.strokeStyle = COLORS.bounds;
  ctx.strokeRect(0.5, 0.5, width - 1, height - 1);
  const frac = dwellFraction(state);
  ctx.fillStyle = COLORS.dwellFill;
  ctx.fillRect(1, 1, (width - 2) * frac, height - 2);
  ctx.fillStyle = COLORS.text;
  ctx.font = "11px sans-serif";
  const dwell = state.frame ? state.frame.dwell : 0;
  const needed = state.scene ? state.scene.dwell_required : 0;
  ctx.fillText(`dwell ${dwell.toFixed(2)} / ${needed.toFixed(1)} s`, 6, height - 5);
}
