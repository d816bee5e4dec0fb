/** Client-side session state: snapshots, query lifecycle, marker validation.
 *
 * Rendered detections always come from the most recent snapshot; a query id
 * is pending, submitted, or expired -- exactly one at any time.
 */

import type { QueryBatch, QueryView, SessionSnapshot } from "./api.js";

export type QueryStatus = "pending" | "submitted" | "expired";

export interface ViewState {
  sessionId: string | null;
  snapshot: SessionSnapshot | null;
  queries: QueryView[];
  statuses: Map<string, QueryStatus>;
  activeQueryId: string | null;
  markers: number[];
  scores: number[];
  complete: boolean;
  completeReason: string | null;
  hint: string | null;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    snapshot: null,
    queries: [],
    statuses: new Map(),
    activeQueryId: null,
    markers: [],
    scores: [],
    complete: false,
    completeReason: null,
    hint: null,
  };
}

export function applySnapshot(state: ViewState, snap: SessionSnapshot): void {
  state.sessionId = snap.id;
  state.snapshot = snap;
}

/** Register the service's pending queries; reconcile local statuses. */
export function applyQueries(state: ViewState, batch: QueryBatch): void {
  state.complete = batch.complete;
  state.completeReason = batch.reason ?? null;
  const pendingIds = new Set(batch.queries.map((q) => q.id));
  for (const [id, status] of state.statuses) {
    if (status === "pending" && !pendingIds.has(id)) {
      state.statuses.set(id, "expired");
    }
  }
  for (const q of batch.queries) {
    const status = state.statuses.get(q.id);
    if (status === undefined) {
      state.statuses.set(q.id, "pending");
    } else if (status !== "pending") {
      // the service re-offered something we already resolved: stale view
      throw new Error(`query ${q.id} returned to pending after ${status}`);
    }
  }
  state.queries = batch.queries;
  if (state.activeQueryId === null || !pendingIds.has(state.activeQueryId)) {
    state.activeQueryId = batch.queries.length > 0 ? (batch.queries[0] as QueryView).id : null;
    state.markers = [];
  }
  if (batch.complete) {
    state.activeQueryId = null;
    state.markers = [];
  }
}

export function activeQuery(state: ViewState): QueryView | null {
  if (state.activeQueryId === null) return null;
  return state.queries.find((q) => q.id === state.activeQueryId) ?? null;
}

/**
 * Toggle a candidate change-point marker. Only sample indices inside the
 * active query's window are accepted, mirroring the service-side check.
 */
export function toggleMarker(state: ViewState, index: number): boolean {
  const query = activeQuery(state);
  if (query === null) {
    state.hint = "no query is active";
    return false;
  }
  if (!Number.isInteger(index) || index < query.start || index > query.end) {
    state.hint = `click inside the shaded window [${query.start}, ${query.end}]`;
    return false;
  }
  const at = state.markers.indexOf(index);
  if (at >= 0) {
    state.markers.splice(at, 1);
  } else {
    state.markers.push(index);
    state.markers.sort((a, b) => a - b);
  }
  state.hint = null;
  return true;
}

/** The labels payload for the active query; valid by construction. */
export function labelPayload(state: ViewState): number[] {
  return [...state.markers];
}

export function markSubmitted(state: ViewState, queryId: string): void {
  if (state.statuses.get(queryId) !== "pending") {
    throw new Error(`query ${queryId} is not pending`);
  }
  state.statuses.set(queryId, "submitted");
  state.queries = state.queries.filter((q) => q.id !== queryId);
  if (state.activeQueryId === queryId) {
    state.activeQueryId = state.queries.length > 0 ? (state.queries[0] as QueryView).id : null;
    state.markers = [];
  }
}

export function budgetLabel(state: ViewState): string {
  if (state.snapshot === null) return "no session";
  return `${state.snapshot.queries_used} / ${state.snapshot.budget}`;
}

export function remainingBudget(state: ViewState): number {
  if (state.snapshot === null) return 0;
  return state.snapshot.budget - state.snapshot.queries_used;
}
