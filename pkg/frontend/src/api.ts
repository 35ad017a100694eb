/** Thin client over the documented HTTP + WebSocket endpoints. */

import type { ChunkUpdateResponse, DebugMode, EventFrame } from "./protocol.js";

export async function createSession(): Promise<string> {
  const response = await fetch("/api/sessions", { method: "POST" });
  if (!response.ok) throw new Error(`create session failed: ${response.status}`);
  const body = (await response.json()) as { session_id: string };
  return body.session_id;
}

export async function postMessage(sessionId: string, text: string): Promise<void> {
  const response = await fetch(`/api/sessions/${sessionId}/messages`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ text }),
  });
  if (response.status === 409) throw new Error("busy");
  if (!response.ok) throw new Error(`message rejected: ${response.status}`);
}

export async function putChunk(
  sessionId: string,
  chunkId: string,
  source: string,
): Promise<ChunkUpdateResponse> {
  const response = await fetch(`/api/sessions/${sessionId}/chunks/${chunkId}`, {
    method: "PUT",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ source }),
  });
  if (!response.ok) throw new Error(`chunk update failed: ${response.status}`);
  return (await response.json()) as ChunkUpdateResponse;
}

export async function debugChunk(
  sessionId: string,
  chunkId: string,
  mode: DebugMode,
  ideas?: string,
): Promise<void> {
  const response = await fetch(`/api/sessions/${sessionId}/chunks/${chunkId}/debug`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(ideas === undefined ? { mode } : { mode, ideas }),
  });
  if (response.status === 409) throw new Error("busy");
  if (!response.ok) throw new Error(`debug rejected: ${response.status}`);
}

export interface StreamHandlers {
  onFrame: (frame: EventFrame) => void;
  onStatus: (connected: boolean) => void;
}

/**
 * WebSocket stream with loss-free resume: reconnects carry
 * ?after=<last seq> so frames are never dropped or duplicated.
 */
export class EventStream {
  private lastSeq = 0;
  private socket: WebSocket | null = null;
  private closed = false;
  private retryMs = 250;

  constructor(
    private sessionId: string,
    private handlers: StreamHandlers,
  ) {}

  connect(): void {
    if (this.closed) return;
    const scheme = location.protocol === "https:" ? "wss" : "ws";
    const url = `${scheme}://${location.host}/api/sessions/${this.sessionId}/stream?after=${this.lastSeq}`;
    const socket = new WebSocket(url);
    this.socket = socket;
    socket.onopen = () => {
      this.retryMs = 250;
      this.handlers.onStatus(true);
    };
    socket.onmessage = (raw: MessageEvent) => {
      const frame = JSON.parse(String(raw.data)) as EventFrame;
      if (frame.seq > this.lastSeq) this.lastSeq = frame.seq;
      this.handlers.onFrame(frame);
    };
    socket.onclose = () => {
      this.handlers.onStatus(false);
      if (!this.closed) {
        setTimeout(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 5000);
      }
    };
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
  }
}
