/**
 * Pure transcript reducer: event frames in (any arrival order), ordered
 * view model out. All derivation is recomputed from the sorted frame
 * log, so reconnect replays and duplicate frames are harmless.
 */

import type {
  ClarificationQuestion,
  Diagnostic,
  EventFrame,
  SearchResult,
} from "./protocol.js";

export interface Source {
  title: string;
  url: string;
  docId: string;
  snippet: string;
}

export type MessageKind =
  | "user-text"
  | "plan"
  | "searching"
  | "sources"
  | "clarification"
  | "answer"
  | "apology"
  | "error"
  | "chunk";

export interface UiMessage {
  seq: number;
  direction: "user" | "agent" | "system";
  kind: MessageKind;
  body: string;
  /** rendered above the body; present when the answer follows a search */
  sources: Source[];
  /** non-empty only on clarification messages */
  questions: ClarificationQuestion[];
  chunkRef?: string;
}

export interface ChunkState {
  chunkId: string;
  source: string;
  origin: string;
  revision: number;
  diagnostics: Diagnostic[];
}

export interface TranscriptState {
  messages: UiMessage[];
  chunks: Map<string, ChunkState>;
  lastSeq: number;
}

const USER_SEQ_STEP = 0.5; // local user echoes slot between server frames

export class Transcript {
  private frames = new Map<number, EventFrame>();
  private localEchoes: { seq: number; text: string }[] = [];

  /** Accept a frame in any order; duplicates (same seq) are ignored. */
  ingest(frame: EventFrame): void {
    if (!this.frames.has(frame.seq)) {
      this.frames.set(frame.seq, frame);
    }
  }

  ingestAll(frames: EventFrame[]): void {
    for (const frame of frames) this.ingest(frame);
  }

  /** Locally echo what the user typed, anchored after the latest frame. */
  addUserMessage(text: string): void {
    this.localEchoes.push({ seq: this.lastSeq() + USER_SEQ_STEP, text });
  }

  lastSeq(): number {
    let last = 0;
    for (const seq of this.frames.keys()) if (seq > last) last = seq;
    return last;
  }

  derive(): TranscriptState {
    const ordered = [...this.frames.values()].sort((a, b) => a.seq - b.seq);
    const messages: UiMessage[] = [];
    const chunks = new Map<string, ChunkState>();
    let pendingSources: Source[] = [];
    let answerRun: UiMessage | null = null;

    const push = (message: UiMessage) => {
      messages.push(message);
    };

    for (const frame of ordered) {
      if (frame.type !== "answer-fragment") answerRun = null;
      switch (frame.type) {
        case "plan":
          push(message(frame.seq, "agent", "plan", str(frame.payload.text)));
          break;
        case "searching":
          push(
            message(frame.seq, "system", "searching", `Searching: ${str(frame.payload.query)}`),
          );
          break;
        case "search-results": {
          const results = (frame.payload.results as SearchResult[] | undefined) ?? [];
          const sources = results.map((r) => ({
            title: r.name,
            url: r.url,
            docId: r.doc_id,
            snippet: r.snippet,
          }));
          pendingSources = pendingSources.concat(sources);
          const m = message(frame.seq, "system", "sources", str(frame.payload.query));
          m.sources = sources;
          push(m);
          break;
        }
        case "clarification": {
          const questions =
            (frame.payload.questions as ClarificationQuestion[] | undefined) ?? [];
          const m = message(
            frame.seq,
            "agent",
            "clarification",
            questions.map((q) => q.text).join("\n"),
          );
          m.questions = questions;
          push(m);
          break;
        }
        case "answer-fragment": {
          const text = str(frame.payload.text);
          if (answerRun !== null) {
            answerRun.body += text; // fragments coalesce into one message
          } else {
            answerRun = message(frame.seq, "agent", "answer", text);
            answerRun.sources = pendingSources;
            pendingSources = [];
            push(answerRun);
          }
          break;
        }
        case "code-chunk": {
          const chunkId = str(frame.payload.chunk_id);
          chunks.set(chunkId, {
            chunkId,
            source: str(frame.payload.source),
            origin: str(frame.payload.origin),
            revision: num(frame.payload.revision),
            diagnostics: [],
          });
          const m = message(frame.seq, "agent", "chunk", "");
          m.chunkRef = chunkId;
          push(m);
          break;
        }
        case "diagnostics": {
          const chunkId = str(frame.payload.chunk_id);
          const chunk = chunks.get(chunkId);
          if (chunk) {
            chunk.diagnostics = (frame.payload.diagnostics as Diagnostic[] | undefined) ?? [];
            const revision = num(frame.payload.revision);
            if (revision > chunk.revision) chunk.revision = revision;
          }
          break;
        }
        case "apology":
          push(message(frame.seq, "agent", "apology", str(frame.payload.reason)));
          break;
        case "error":
          push(message(frame.seq, "system", "error", str(frame.payload.message)));
          break;
        default:
          break; // forward-compatible: unknown event types are skipped
      }
    }

    for (const echo of this.localEchoes) {
      const m = message(echo.seq, "user", "user-text", echo.text);
      const at = messages.findIndex((existing) => existing.seq > echo.seq);
      if (at === -1) messages.push(m);
      else messages.splice(at, 0, m);
    }

    return { messages, chunks, lastSeq: this.lastSeq() };
  }
}

function message(
  seq: number,
  direction: UiMessage["direction"],
  kind: MessageKind,
  body: string,
): UiMessage {
  return { seq, direction, kind, body, sources: [], questions: [] };
}

function str(value: unknown): string {
  return typeof value === "string" ? value : value == null ? "" : String(value);
}

function num(value: unknown): number {
  return typeof value === "number" ? value : 0;
}
