/** Wires the API client, view state, and canvases into a working page. */

import { ApiClient, ApiError } from "./api.js";
import type { SessionOverrides, SessionSnapshot } from "./api.js";
import { drawDashboard, drawQueryView, eventToCanvasX, xToIndex } from "./chart.js";
import type { Viewport } from "./chart.js";
import {
  activeQuery,
  applyQueries,
  applySnapshot,
  budgetLabel,
  initialState,
  labelPayload,
  markSubmitted,
  toggleMarker,
} from "./state.js";
import type { ViewState } from "./state.js";

export interface AppElements {
  root: HTMLElement;
  sessionLabel: HTMLElement;
  budgetLabelEl: HTMLElement;
  thresholdLabel: HTMLElement;
  statusLine: HTMLElement;
  hintLine: HTMLElement;
  overview: HTMLCanvasElement;
  queryCanvas: HTMLCanvasElement;
  queryMeta: HTMLElement;
  submitButton: HTMLButtonElement;
  noChangeButton: HTMLButtonElement;
  pathInput: HTMLInputElement;
  openButton: HTMLButtonElement;
  fileInput: HTMLInputElement;
}

export interface App {
  state: ViewState;
  client: ApiClient;
  elements: AppElements;
  queryViewport: Viewport | null;
  createSessionFromPath(path: string, overrides?: SessionOverrides): Promise<void>;
  createSessionFromFile(file: Blob, name?: string): Promise<void>;
  attachSession(id: string): Promise<void>;
  refreshQueries(): Promise<void>;
  refreshDetections(): Promise<void>;
  clickAtIndex(index: number): boolean;
  submit(): Promise<void>;
  submitNoChange(): Promise<void>;
  render(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text) node.textContent = text;
  return node;
}

function buildDom(root: HTMLElement): AppElements {
  root.innerHTML = "";
  const header = el("header", { class: "mural-header" });
  const sessionLabel = el("span", { "data-role": "session" }, "no session");
  const budgetLabelEl = el("span", { "data-role": "budget" }, "-");
  const thresholdLabel = el("span", { "data-role": "threshold" }, "-");
  header.append(
    sessionLabel,
    el("span", {}, " queries used: "),
    budgetLabelEl,
    el("span", {}, " threshold: "),
    thresholdLabel,
  );

  const opener = el("div", { class: "mural-open" });
  const pathInput = el("input", {
    "data-role": "path",
    placeholder: "server-side CSV path",
    type: "text",
  });
  const openButton = el("button", { "data-role": "open" }, "Open");
  const fileInput = el("input", { "data-role": "file", type: "file", accept: ".csv" });
  opener.append(pathInput, openButton, fileInput);

  const overview = el("canvas", {
    "data-role": "overview",
    width: "960",
    height: "160",
  }) as HTMLCanvasElement;
  const queryMeta = el("div", { "data-role": "query-meta" }, "no pending query");
  const queryCanvas = el("canvas", {
    "data-role": "query-canvas",
    width: "960",
    height: "240",
  }) as HTMLCanvasElement;
  const submitButton = el("button", { "data-role": "submit" }, "Submit markers") as HTMLButtonElement;
  const noChangeButton = el(
    "button",
    { "data-role": "no-change" },
    "No change here",
  ) as HTMLButtonElement;
  const hintLine = el("div", { "data-role": "hint" });
  const statusLine = el("div", { "data-role": "status" });

  root.append(
    header,
    opener,
    el("h3", {}, "Detections"),
    overview,
    el("h3", {}, "Current query"),
    queryMeta,
    queryCanvas,
    submitButton,
    noChangeButton,
    hintLine,
    statusLine,
  );
  return {
    root,
    sessionLabel,
    budgetLabelEl,
    thresholdLabel,
    statusLine,
    hintLine,
    overview,
    queryCanvas,
    queryMeta,
    submitButton,
    noChangeButton,
    pathInput,
    openButton,
    fileInput,
  };
}

export function createApp(root: HTMLElement, apiBase: string): App {
  const state = initialState();
  const client = new ApiClient(apiBase);
  const elements = buildDom(root);

  const app: App = {
    state,
    client,
    elements,
    queryViewport: null,

    async createSessionFromPath(path, overrides = {}) {
      await started(client.createSessionFromPath(path, overrides));
    },

    async createSessionFromFile(file, name = "series.csv") {
      await started(client.createSessionFromFile(file, name));
    },

    async attachSession(id) {
      await started(client.getSession(id));
    },

    async refreshQueries() {
      if (state.sessionId === null) return;
      const batch = await client.getQueries(state.sessionId);
      applyQueries(state, batch);
      app.render();
    },

    async refreshDetections() {
      if (state.sessionId === null) return;
      const view = await client.getDetections(state.sessionId);
      state.scores = view.scores;
      if (state.snapshot !== null) {
        state.snapshot.detections = view.indices;
        state.snapshot.threshold = view.threshold;
      }
      app.render();
    },

    clickAtIndex(index) {
      const accepted = toggleMarker(state, index);
      app.render();
      return accepted;
    },

    async submit() {
      await submitLabels(labelPayload(state));
    },

    async submitNoChange() {
      await submitLabels([]);
    },

    render() {
      elements.sessionLabel.textContent = state.sessionId ?? "no session";
      elements.budgetLabelEl.textContent = budgetLabel(state);
      elements.thresholdLabel.textContent =
        state.snapshot === null ? "-" : state.snapshot.threshold.toPrecision(6);
      if (state.snapshot !== null) {
        drawDashboard(
          elements.overview,
          state.scores,
          state.snapshot.threshold,
          state.snapshot.detections,
        );
      }
      const query = activeQuery(state);
      const done = state.complete || query === null;
      elements.submitButton.disabled = done;
      elements.noChangeButton.disabled = done;
      if (query !== null) {
        elements.queryMeta.textContent =
          `score ${query.kind} threshold near sample ${query.center}; ` +
          `window [${query.start}, ${query.end}]; markers: ` +
          (state.markers.length > 0 ? state.markers.join(", ") : "none");
        app.queryViewport = drawQueryView(elements.queryCanvas, query, state.markers);
      } else {
        app.queryViewport = null;
        elements.queryMeta.textContent = state.complete
          ? `session complete: ${state.completeReason ?? "budget spent"}`
          : "no pending query";
      }
      elements.hintLine.textContent = state.hint ?? "";
    },
  };

  async function started(snapPromise: Promise<SessionSnapshot>): Promise<void> {
    try {
      const snap = await snapPromise;
      applySnapshot(state, snap);
      elements.statusLine.textContent = "";
      await app.refreshDetections();
      await app.refreshQueries();
    } catch (err) {
      reportError(err);
      throw err;
    }
  }

  async function submitLabels(confirmed: number[]): Promise<void> {
    const query = activeQuery(state);
    if (query === null || state.sessionId === null) return;
    try {
      const snap = await client.submitLabels(state.sessionId, query.id, confirmed);
      markSubmitted(state, query.id);
      applySnapshot(state, snap);
      elements.statusLine.textContent = snap.optimized
        ? "parameters re-optimized"
        : "";
      await app.refreshDetections();
      await app.refreshQueries();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // someone else answered it first: drop and refresh
        markSubmitted(state, query.id);
        await app.refreshQueries();
        return;
      }
      reportError(err);
      throw err;
    }
  }

  function reportError(err: unknown): void {
    elements.statusLine.textContent =
      err instanceof ApiError && err.status === 0
        ? "service unreachable; retry"
        : `error: ${String(err instanceof Error ? err.message : err)}`;
  }

  elements.queryCanvas.addEventListener("click", (ev) => {
    if (app.queryViewport === null) return;
    const x = eventToCanvasX(elements.queryCanvas, ev as MouseEvent);
    app.clickAtIndex(xToIndex(x, app.queryViewport));
  });
  elements.submitButton.addEventListener("click", () => {
    void app.submit();
  });
  elements.noChangeButton.addEventListener("click", () => {
    void app.submitNoChange();
  });
  elements.openButton.addEventListener("click", () => {
    const path = elements.pathInput.value.trim();
    if (path) void app.createSessionFromPath(path);
  });
  elements.fileInput.addEventListener("change", () => {
    const file = elements.fileInput.files?.[0];
    if (file) void app.createSessionFromFile(file, file.name);
  });

  app.render();
  return app;
}
