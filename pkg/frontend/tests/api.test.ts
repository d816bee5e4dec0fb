import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

interface Recorded {
  url: string;
  method: string;
  body: unknown;
}

function fakeFetch(
  status: number,
  payload: unknown,
): { calls: Recorded[]; fetchFn: (input: string, init?: RequestInit) => Promise<Response> } {
  const calls: Recorded[] = [];
  const fetchFn = (input: string, init?: RequestInit): Promise<Response> => {
    calls.push({
      url: input,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : (init?.body ?? null),
    });
    return Promise.resolve(
      new Response(status === 204 ? null : JSON.stringify(payload), {
        status,
        headers: { "content-type": "application/json" },
      }),
    );
  };
  return { calls, fetchFn };
}

describe("ApiClient", () => {
  it("posts label payloads with the confirmed field", async () => {
    const { calls, fetchFn } = fakeFetch(200, { id: "s", queries_used: 1 });
    const client = new ApiClient("http://svc:8000/", fetchFn);
    await client.submitLabels("s", "q", [120, 133]);
    expect(calls[0]?.url).toBe("http://svc:8000/v1/sessions/s/queries/q/labels");
    expect(calls[0]?.method).toBe("POST");
    expect(calls[0]?.body).toEqual({ confirmed: [120, 133] });
  });

  it("creates sessions from a server-side path with overrides", async () => {
    const { calls, fetchFn } = fakeFetch(201, { id: "s" });
    const client = new ApiClient("http://svc:8000", fetchFn);
    await client.createSessionFromPath("/data/series.csv", { budget: 10, seed: 3 });
    expect(calls[0]?.url).toBe("http://svc:8000/v1/sessions");
    expect(calls[0]?.body).toEqual({ path: "/data/series.csv", budget: 10, seed: 3 });
  });

  it("maps HTTP errors onto ApiError with the service detail", async () => {
    const { fetchFn } = fakeFetch(409, { detail: "unknown or already answered query" });
    const client = new ApiClient("http://svc:8000", fetchFn);
    await expect(client.submitLabels("s", "q", [])).rejects.toMatchObject({
      name: "ApiError",
      status: 409,
      message: "unknown or already answered query",
    });
  });

  it("flags unreachable services with status 0", async () => {
    const client = new ApiClient("http://svc:8000", () => Promise.reject(new Error("ECONNREFUSED")));
    const err = await client.health().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(0);
  });

  it("handles 204 responses without parsing a body", async () => {
    const { calls, fetchFn } = fakeFetch(204, null);
    const client = new ApiClient("http://svc:8000", fetchFn);
    await expect(client.deleteSession("s")).resolves.toBeUndefined();
    expect(calls[0]?.method).toBe("DELETE");
  });

  it("hits the documented endpoint paths", async () => {
    const { calls, fetchFn } = fakeFetch(200, {});
    const client = new ApiClient("http://svc:8000", fetchFn);
    await client.getSession("a");
    await client.getQueries("a");
    await client.getDetections("a");
    await client.health();
    expect(calls.map((c) => c.url)).toEqual([
      "http://svc:8000/v1/sessions/a",
      "http://svc:8000/v1/sessions/a/queries",
      "http://svc:8000/v1/sessions/a/detections",
      "http://svc:8000/v1/health",
    ]);
  });
});
