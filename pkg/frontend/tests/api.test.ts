import { afterEach, describe, expect, it, vi } from "vitest";

import { createSession, debugChunk, postMessage, putChunk } from "../src/api.js";

function mockFetch(status: number, body: unknown = {}) {
  const impl = vi.fn(async () => ({
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  }));
  vi.stubGlobal("fetch", impl);
  return impl;
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("api client", () => {
  it("creates sessions via POST /api/sessions", async () => {
    const impl = mockFetch(201, { session_id: "abc" });
    await expect(createSession()).resolves.toBe("abc");
    expect(impl).toHaveBeenCalledWith("/api/sessions", { method: "POST" });
  });

  it("posts messages as JSON and surfaces 409 as busy", async () => {
    const impl = mockFetch(202);
    await postMessage("s1", "hello");
    const [url, init] = impl.mock.calls[0]!;
    expect(url).toBe("/api/sessions/s1/messages");
    expect(JSON.parse((init as RequestInit).body as string)).toEqual({ text: "hello" });

    mockFetch(409);
    await expect(postMessage("s1", "again")).rejects.toThrow("busy");
  });

  it("puts chunk edits and returns fresh diagnostics", async () => {
    const impl = mockFetch(200, { chunk_id: "c1", revision: 2, diagnostics: [] });
    const result = await putChunk("s1", "c1", "to go fd 1 end");
    expect(result.revision).toBe(2);
    const [url, init] = impl.mock.calls[0]!;
    expect(url).toBe("/api/sessions/s1/chunks/c1");
    expect((init as RequestInit).method).toBe("PUT");
  });

  it("sends debug requests with the ideas payload only when given", async () => {
    const impl = mockFetch(202);
    await debugChunk("s1", "c1", "explain");
    expect(JSON.parse((impl.mock.calls[0]![1] as RequestInit).body as string)).toEqual({
      mode: "explain",
    });
    await debugChunk("s1", "c1", "fix-with-ideas", "wolves");
    expect(JSON.parse((impl.mock.calls[1]![1] as RequestInit).body as string)).toEqual({
      mode: "fix-with-ideas",
      ideas: "wolves",
    });
  });
});
