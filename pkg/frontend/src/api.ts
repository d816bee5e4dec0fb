/** Typed client for the /v1 annotation API. All state changes go through here. */

export interface SessionSnapshot {
  id: string;
  n: number;
  d: number;
  budget: number;
  queries_used: number;
  threshold: number;
  weights: number[];
  detections: number[];
  optimized?: boolean;
}

export interface QueryView {
  id: string;
  kind: "above" | "below";
  center: number;
  start: number;
  end: number;
  context_start: number;
  values: number[][];
  scores: number[];
  threshold: number;
}

export interface QueryBatch {
  queries: QueryView[];
  complete: boolean;
  reason?: string;
}

export interface DetectionsView {
  indices: number[];
  threshold: number;
  scores: number[];
}

export interface SessionOverrides {
  budget?: number;
  seed?: number;
  eta?: number;
  warmup?: number;
  cadence?: number;
  queries_per_round?: number;
  init_threshold?: "elbow" | "max";
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(base: string, fetchFn?: FetchLike) {
    this.base = base.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchFn(`${this.base}${path}`, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = (await resp.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(resp.status, detail);
    }
    if (resp.status === 204) return undefined as T;
    return (await resp.json()) as T;
  }

  createSessionFromPath(path: string, overrides: SessionOverrides = {}): Promise<SessionSnapshot> {
    return this.request<SessionSnapshot>("/v1/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ path, ...overrides }),
    });
  }

  createSessionFromFile(file: Blob, name = "series.csv"): Promise<SessionSnapshot> {
    const form = new FormData();
    form.append("file", file, name);
    return this.request<SessionSnapshot>("/v1/sessions", { method: "POST", body: form });
  }

  getSession(id: string): Promise<SessionSnapshot> {
    return this.request<SessionSnapshot>(`/v1/sessions/${id}`);
  }

  getQueries(id: string): Promise<QueryBatch> {
    return this.request<QueryBatch>(`/v1/sessions/${id}/queries`);
  }

  submitLabels(id: string, queryId: string, confirmed: number[]): Promise<SessionSnapshot> {
    return this.request<SessionSnapshot>(`/v1/sessions/${id}/queries/${queryId}/labels`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ confirmed }),
    });
  }

  getDetections(id: string): Promise<DetectionsView> {
    return this.request<DetectionsView>(`/v1/sessions/${id}/detections`);
  }

  deleteSession(id: string): Promise<void> {
    return this.request<void>(`/v1/sessions/${id}`, { method: "DELETE" });
  }

  health(): Promise<{ status: string; sessions: number }> {
    return this.request<{ status: string; sessions: number }>("/v1/health");
  }
}
