// Thin WebSocket wrapper. The socket is injected through a minimal
// structural interface so the browser WebSocket and the `ws` package
// both fit, which keeps the walkthrough tests runnable under node.

import { CommandMessage, ServerMessage, parseServerMessage } from "./types.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(type: "open", cb: () => void): void;
  addEventListener(type: "message", cb: (ev: { data: unknown }) => void): void;
  addEventListener(type: "close", cb: () => void): void;
  readyState: number;
}

export const OPEN = 1;

export interface ClientHandlers {
  onMessage(msg: ServerMessage): void;
  onOpen?(): void;
  onClose?(): void;
}

export class ConsoleClient {
  private socket: SocketLike;

  constructor(socket: SocketLike, handlers: ClientHandlers) {
    this.socket = socket;
    socket.addEventListener("open", () => handlers.onOpen?.());
    socket.addEventListener("close", () => handlers.onClose?.());
    socket.addEventListener("message", (ev) => {
      const msg = parseServerMessage(String(ev.data));
      if (msg !== null) handlers.onMessage(msg);
    });
  }

  send(message: CommandMessage): boolean {
    if (this.socket.readyState !== OPEN) return false;
    this.socket.send(JSON.stringify(message));
    return true;
  }

  close(): void {
    this.socket.close();
  }
}

// where `serve` listens unless told otherwise
const DEFAULT_SERVER = "127.0.0.1:8000";

/** ws:// endpoint for the page host, with ?server=host:port override. */
export function socketUrl(locationHost: string, search: string): string {
  const params = new URLSearchParams(search);
  const host = params.get("server") ?? (locationHost || DEFAULT_SERVER);
  return `ws://${host}/ws`;
}
