// Entry point: wire the socket, the state, the buttons, and the
// render loop together.

import { ConsoleClient, SocketLike, socketUrl } from "./net.js";
import {
  ConsoleState,
  applyServer,
  emptyState,
  enabledCommands,
  expireCommands,
  historyRows,
  isStale,
  recordSend,
  waypointLabel,
} from "./state.js";
import { COMMAND_NAMES, CommandName } from "./types.js";
import { drawAltitudeStrip, drawDwellBar, drawMap } from "./views.js";

const state: ConsoleState = emptyState();

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`element #${id} not found`);
  return el as T;
}

const mapCanvas = byId<HTMLCanvasElement>("map");
const stripCanvas = byId<HTMLCanvasElement>("strip");
const dwellCanvas = byId<HTMLCanvasElement>("dwell");
const modeLabel = byId<HTMLSpanElement>("mode");
const wpLabel = byId<HTMLSpanElement>("wp");
const clockLabel = byId<HTMLSpanElement>("clock");
const noticeLine = byId<HTMLDivElement>("notice");
const staleBanner = byId<HTMLDivElement>("stale");
const historyList = byId<HTMLUListElement>("history");

const buttons = new Map<CommandName, HTMLButtonElement>();
for (const cmd of COMMAND_NAMES) {
  buttons.set(cmd, byId<HTMLButtonElement>(`cmd-${cmd}`));
}

const client = new ConsoleClient(
  new WebSocket(socketUrl(location.host, location.search)) as unknown as SocketLike,
  {
    onMessage: (msg) => applyServer(state, msg, Date.now()),
    onClose: () => {
      staleBanner.textContent = "connection closed";
      staleBanner.hidden = false;
    },
  },
);

for (const [cmd, button] of buttons) {
  button.addEventListener("click", () => {
    client.send(recordSend(state, cmd, Date.now()));
  });
}

function render(): void {
  expireCommands(state, Date.now());
  const mapCtx = mapCanvas.getContext("2d");
  const stripCtx = stripCanvas.getContext("2d");
  const dwellCtx = dwellCanvas.getContext("2d");
  if (mapCtx) drawMap(mapCtx, state, mapCanvas.width, mapCanvas.height);
  if (stripCtx) drawAltitudeStrip(stripCtx, state, stripCanvas.width, stripCanvas.height);
  if (dwellCtx) drawDwellBar(dwellCtx, state, dwellCanvas.width, dwellCanvas.height);

  modeLabel.textContent = state.frame ? state.frame.mode : "-";
  wpLabel.textContent = waypointLabel(state);
  clockLabel.textContent = state.frame ? `${state.frame.t.toFixed(1)} s` : "-";
  noticeLine.textContent = state.notice ?? "";
  noticeLine.hidden = state.notice === null;

  const rows = historyRows(state, 8);
  if (historyList.childElementCount !== rows.length ||
      historyList.dataset.stamp !== rows.join("|")) {
    historyList.replaceChildren(
      ...rows.map((text) => {
        const li = document.createElement("li");
        li.textContent = text;
        return li;
      }),
    );
    historyList.dataset.stamp = rows.join("|");
  }

  const enabled = enabledCommands(state);
  for (const [cmd, button] of buttons) {
    button.disabled = !enabled[cmd];
  }

  const stale = isStale(state, Date.now());
  staleBanner.hidden = !stale;
  if (stale && staleBanner.textContent === "") {
    staleBanner.textContent = "telemetry stale";
  }

  requestAnimationFrame(render);
}

requestAnimationFrame(render);
