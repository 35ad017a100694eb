import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import { describe, expect, it } from "vitest";

import type { EventFrame } from "../src/protocol.js";
import { Transcript } from "../src/transcript.js";

// vitest runs with cwd = frontend/, next to the backend tests
const GOLDEN = resolve(process.cwd(), "../tests/golden/predation_transcript.jsonl");

function goldenFrames(): EventFrame[] {
  return readFileSync(GOLDEN, "utf-8")
    .trim()
    .split("\n")
    .map((line) => JSON.parse(line) as EventFrame);
}

describe("transcript reducer", () => {
  it("renders the predation transcript into ordered messages", () => {
    const transcript = new Transcript();
    transcript.ingestAll(goldenFrames());
    const state = transcript.derive();

    const kinds = state.messages.map((m) => m.kind);
    expect(kinds).toEqual(["plan", "clarification", "plan", "searching", "sources", "plan", "answer", "chunk"]);
    const seqs = state.messages.map((m) => m.seq);
    expect([...seqs].sort((a, b) => a - b)).toEqual(seqs);
  });

  it("keeps ordering under out-of-order and duplicate arrival", () => {
    const frames = goldenFrames();
    const shuffled = [...frames].reverse();
    const transcript = new Transcript();
    transcript.ingestAll(shuffled);
    transcript.ingestAll(frames); // duplicates must be ignored

    const reference = new Transcript();
    reference.ingestAll(frames);
    expect(transcript.derive()).toEqual(reference.derive());
  });

  it("coalesces consecutive answer fragments into one message", () => {
    const transcript = new Transcript();
    transcript.ingestAll(goldenFrames());
    const answers = transcript.derive().messages.filter((m) => m.kind === "answer");
    expect(answers).toHaveLength(1);
    expect(answers[0]!.body).toContain("Here is a minimal wolf-sheep predation model");
    expect(answers[0]!.body).toContain("stability conditions in depth");
  });

  it("attaches the latest search results as the answer's sources", () => {
    const transcript = new Transcript();
    transcript.ingestAll(goldenFrames());
    const answer = transcript.derive().messages.find((m) => m.kind === "answer")!;
    expect(answer.sources.length).toBeGreaterThan(0);
    expect(answer.sources[0]!.title).toBe("Wolf Sheep Predation");
    expect(answer.sources[0]!.url).toMatch(/^https?:\/\//);
  });

  it("exposes clarification questions with suggestion chips only there", () => {
    const transcript = new Transcript();
    transcript.ingestAll(goldenFrames());
    const state = transcript.derive();
    const clarification = state.messages.find((m) => m.kind === "clarification")!;
    expect(clarification.questions[0]!.suggested_answers).toEqual(["Wolf", "Sheep"]);
    for (const message of state.messages) {
      if (message.kind !== "clarification") expect(message.questions).toHaveLength(0);
    }
  });

  it("tracks chunk state and applies diagnostics by chunk id", () => {
    const transcript = new Transcript();
    transcript.ingestAll(goldenFrames());
    const chunk = transcript.derive().chunks.get("chunk-1")!;
    expect(chunk.revision).toBe(1);
    expect(chunk.source).toContain("breed [sheep a-sheep]");
    expect(chunk.diagnostics).toEqual([]);

    transcript.ingest({
      seq: 11,
      type: "diagnostics",
      ts: "t",
      payload: {
        chunk_id: "chunk-1",
        revision: 2,
        diagnostics: [
          {
            code: "UNBALANCED-BRACKET",
            severity: "error",
            span: { start_line: 2, start_column: 1, end_line: 2, end_column: 2 },
            raw_message: "missing ]",
            clarified_message: "A bracket near line 2 has no partner.",
            suggested_doc_ids: [],
          },
        ],
      },
    });
    const updated = transcript.derive().chunks.get("chunk-1")!;
    expect(updated.revision).toBe(2);
    expect(updated.diagnostics[0]!.code).toBe("UNBALANCED-BRACKET");
  });

  it("anchors local user echoes between server frames", () => {
    const transcript = new Transcript();
    const frames = goldenFrames();
    transcript.ingestAll(frames.slice(0, 2)); // plan + clarification
    transcript.addUserMessage("Wolves and sheep.");
    transcript.ingestAll(frames.slice(2));
    const messages = transcript.derive().messages;
    const userAt = messages.findIndex((m) => m.kind === "user-text");
    const clarificationAt = messages.findIndex((m) => m.kind === "clarification");
    const searchAt = messages.findIndex((m) => m.kind === "searching");
    expect(userAt).toBeGreaterThan(clarificationAt);
    expect(userAt).toBeLessThan(searchAt);
  });

  it("ignores unknown event types", () => {
    const transcript = new Transcript();
    transcript.ingest({ seq: 1, type: "mystery", payload: {}, ts: "t" });
    expect(transcript.derive().messages).toEqual([]);
  });
});
