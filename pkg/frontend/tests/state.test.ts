import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api/client";
import { ExplorerState } from "../src/state";
import type { AnalysisReport, AnalysisRequest } from "../src/api/types";
import type { FetchLike } from "../src/api/client";

// Transport stub: session creation answers immediately, every analysis call
// parks as a deferred the test settles by hand, in whatever order it wants.

interface Deferred {
  signal: AbortSignal | null | undefined;
  resolve: (body: unknown, status?: number) => void;
  reject: (error: unknown) => void;
}

function deferredTransport(): { fetchFn: FetchLike; analyses: Deferred[] } {
  const analyses: Deferred[] = [];
  const fetchFn: FetchLike = (input, init) => {
    if (input === "/sessions" && init?.method === "POST") {
      return Promise.resolve(jsonResponse(
        { sessionId: "s1", rowCount: 3, features: [] }, 201));
    }
    if (input.endsWith("/analysis")) {
      return new Promise<Response>((resolve, reject) => {
        analyses.push({
          signal: init?.signal,
          resolve: (body, status = 200) => resolve(jsonResponse(body, status)),
          reject,
        });
      });
    }
    throw new Error(`unexpected request ${input}`);
  };
  return { fetchFn, analyses };
}

function jsonResponse(body: unknown, status: number): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function report(tag: string): AnalysisReport {
  return { reportVersion: 1, outcome: tag } as unknown as AnalysisReport;
}

const REQUEST: AnalysisRequest = {
  filter: { clauses: [{ feature: "T", type: "set", values: ["1"] }] },
  outcome: "H",
};

async function openState(): Promise<{ state: ExplorerState; analyses: Deferred[] }> {
  const { fetchFn, analyses } = deferredTransport();
  const state = new ExplorerState(new ApiClient({ fetchFn }));
  await state.openFixtureSession("any");
  return { state, analyses };
}

describe("ExplorerState stale-response guard", () => {
  it("delivers only the latest of two rapid submissions", async () => {
    const { state, analyses } = await openState();

    const first = state.submitAnalysis(REQUEST);
    const second = state.submitAnalysis(REQUEST);
    expect(analyses).toHaveLength(2);

    // the newer submission lands first; the older straggles in afterwards
    analyses[1].resolve(report("fresh"));
    expect(await second).toMatchObject({ outcome: "fresh" });
    expect(state.lastReport).toMatchObject({ outcome: "fresh" });
    expect(state.pendingRequest).toBe(false);

    analyses[0].resolve(report("stale"));
    expect(await first).toBeNull();
    expect(state.lastReport).toMatchObject({ outcome: "fresh" });
  });

  it("drops a stale response even when it arrives before the fresh one", async () => {
    const { state, analyses } = await openState();

    const first = state.submitAnalysis(REQUEST);
    const second = state.submitAnalysis(REQUEST);

    analyses[0].resolve(report("stale"));
    expect(await first).toBeNull();
    expect(state.lastReport).toBeNull();
    expect(state.pendingRequest).toBe(true); // the latest is still in flight

    analyses[1].resolve(report("fresh"));
    expect(await second).toMatchObject({ outcome: "fresh" });
    expect(state.lastReport).toMatchObject({ outcome: "fresh" });
    expect(state.pendingRequest).toBe(false);
  });

  it("aborts the in-flight request when a newer one is submitted", async () => {
    const { state, analyses } = await openState();

    const first = state.submitAnalysis(REQUEST);
    expect(analyses[0].signal?.aborted).toBe(false);

    const second = state.submitAnalysis(REQUEST);
    expect(analyses[0].signal?.aborted).toBe(true);
    expect(analyses[1].signal?.aborted).toBe(false);

    // a transport that honors the abort rejects; the stale ticket swallows it
    analyses[0].reject(new DOMException("aborted", "AbortError"));
    expect(await first).toBeNull();

    analyses[1].resolve(report("fresh"));
    expect(await second).toMatchObject({ outcome: "fresh" });
  });

  it("still throws transport errors for the latest submission", async () => {
    const { state, analyses } = await openState();

    const only = state.submitAnalysis(REQUEST);
    analyses[0].resolve(
      { detail: { code: "EMPTY_SUBSET", message: "no rows matched" } }, 422);
    await expect(only).rejects.toMatchObject({ code: "EMPTY_SUBSET", status: 422 });
    expect(state.pendingRequest).toBe(false);
    expect(state.lastReport).toBeNull();
  });

  it("refuses to submit without an open session", async () => {
    const { fetchFn } = deferredTransport();
    const state = new ExplorerState(new ApiClient({ fetchFn }));
    await expect(state.submitAnalysis(REQUEST)).rejects.toThrow("no open session");
  });

  it("clears the last report when a new session opens", async () => {
    const { state, analyses } = await openState();
    const only = state.submitAnalysis(REQUEST);
    analyses[0].resolve(report("old-session"));
    await only;
    expect(state.lastReport).not.toBeNull();

    await state.openFixtureSession("another");
    expect(state.lastReport).toBeNull();
    expect(state.sessionId).toBe("s1");
  });
});
