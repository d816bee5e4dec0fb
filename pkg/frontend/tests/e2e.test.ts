/** Round trip against a live service: create a session on synthetic data,
 * render a query, click change points on the canvas, submit, and watch the
 * dashboard update. */

import { type ChildProcess, spawn, spawnSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it, vi } from "vitest";

import { createApp } from "../src/app.js";
import type { App } from "../src/app.js";
import { ApiClient } from "../src/api.js";
import { indexToX } from "../src/chart.js";
import { activeQuery } from "../src/state.js";

const PYTHON = process.env.MURAL_PYTHON ?? "python3";

let workDir: string;
let seriesPath: string;
let server: ChildProcess | null = null;
let base: string;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      probe.close(() => resolve(address.port));
    });
  });
}

async function waitForHealth(client: ApiClient): Promise<void> {
  for (let attempt = 0; attempt < 150; attempt++) {
    try {
      const health = await client.health();
      if (health.status === "ok") return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error("service did not become healthy");
}

function clickCanvasAt(app: App, index: number): void {
  const vp = app.queryViewport;
  if (vp === null) throw new Error("no query rendered");
  const x = indexToX(index, vp);
  app.elements.queryCanvas.dispatchEvent(
    new MouseEvent("click", { clientX: x, bubbles: true }),
  );
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "mural-e2e-"));
  seriesPath = join(workDir, "series.csv");
  const synth = spawnSync(
    PYTHON,
    [
      "-m", "mural.cli", "synth",
      "--n", "2048", "--d", "2", "--segments", "4",
      "--magnitude", "3", "--seed", "7",
      "--out", seriesPath, "--labels", join(workDir, "series.labels"),
    ],
    { encoding: "utf-8" },
  );
  expect(synth.status, synth.stderr).toBe(0);

  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  server = spawn(
    PYTHON,
    [
      "-m", "mural.cli", "serve",
      "--host", "127.0.0.1", "--port", String(port),
      "--data-dir", join(workDir, "sessions"),
      "--levels", "4", "--window", "20", "--eta", "20", "--budget", "30",
    ],
    { stdio: ["ignore", "inherit", "inherit"] },
  );
  await waitForHealth(new ApiClient(base));
});

afterAll(() => {
  if (server !== null) server.kill("SIGTERM");
  rmSync(workDir, { recursive: true, force: true });
});

describe("labeling round trip against a live service", () => {
  it("creates a session, labels a query by clicking, and sees the dashboard update", async () => {
    const root = document.createElement("div");
    document.body.appendChild(root);
    const app = createApp(root, base);

    await app.createSessionFromPath(seriesPath, { seed: 0 });
    const state = app.state;
    expect(state.sessionId).not.toBeNull();
    expect(state.snapshot?.queries_used).toBe(0);
    expect(app.elements.budgetLabelEl.textContent).toBe("0 / 30");
    // baseline detections are shown before any query is answered
    expect(state.snapshot?.detections.length).toBeGreaterThan(0);
    expect(state.scores.length).toBe(2048);

    // a fresh session immediately offers one or two queries
    expect([1, 2]).toContain(state.queries.length);
    const query = activeQuery(state);
    if (query === null) throw new Error("no active query");
    expect(app.queryViewport).not.toBeNull();

    // click two in-window positions -> two snapped markers
    const first = query.start;
    const second = Math.min(query.end, query.start + 3);
    clickCanvasAt(app, first);
    clickCanvasAt(app, second);
    expect(state.markers).toEqual([...new Set([first, second])].sort((a, b) => a - b));

    // clicks outside the shaded window are ignored, with a hint
    const outside = query.start > query.context_start ? query.start - 1 : query.end + 1;
    const before = [...state.markers];
    clickCanvasAt(app, outside);
    expect(state.markers).toEqual(before);
    expect(app.elements.hintLine.textContent).toContain("inside the shaded window");

    // submit through the button, as a user would
    app.elements.submitButton.click();
    await vi.waitFor(() => {
      expect(state.snapshot?.queries_used).toBe(1);
    });
    expect(app.elements.budgetLabelEl.textContent).toBe("1 / 30");

    // the dashboard reflects the service's current detections and threshold
    const client = new ApiClient(base);
    const sid = state.sessionId as string;
    const detections = await client.getDetections(sid);
    expect(state.snapshot?.detections).toEqual(detections.indices);
    expect(state.snapshot?.threshold).toBe(detections.threshold);

    // answer the next query with "no change" and watch the budget move again
    await vi.waitFor(() => {
      expect(activeQuery(state)).not.toBeNull();
    });
    app.elements.noChangeButton.click();
    await vi.waitFor(() => {
      expect(state.snapshot?.queries_used).toBe(2);
    });
    expect(app.elements.budgetLabelEl.textContent).toBe("2 / 30");

    await client.deleteSession(sid);
  });

  it("rejects out-of-window labels at the service boundary too", async () => {
    const client = new ApiClient(base);
    const snap = await client.createSessionFromPath(seriesPath, { seed: 1 });
    const batch = await client.getQueries(snap.id);
    const query = batch.queries[0];
    if (query === undefined) throw new Error("expected a pending query");
    const err = await client
      .submitLabels(snap.id, query.id, [query.end + 500])
      .catch((e: unknown) => e);
    expect(err).toMatchObject({ name: "ApiError", status: 422 });
    await client.deleteSession(snap.id);
  });
});
