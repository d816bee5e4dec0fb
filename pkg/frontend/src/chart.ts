/** Canvas rendering and the index<->pixel mapping used for click handling. */

import type { QueryView } from "./api.js";
import { minMaxDownsample } from "./downsample.js";

export interface Viewport {
  /** first sample index shown */
  first: number;
  /** last sample index shown (inclusive) */
  last: number;
  /** drawable width in pixels */
  width: number;
}

export function indexToX(index: number, vp: Viewport): number {
  const span = Math.max(1, vp.last - vp.first);
  return ((index - vp.first) / span) * (vp.width - 1);
}

/** Inverse of indexToX, snapped to the nearest sample index in range. */
export function xToIndex(x: number, vp: Viewport): number {
  const span = Math.max(1, vp.last - vp.first);
  const raw = vp.first + (x / Math.max(1, vp.width - 1)) * span;
  return Math.min(vp.last, Math.max(vp.first, Math.round(raw)));
}

function valueToY(v: number, lo: number, hi: number, height: number): number {
  const span = hi - lo || 1;
  return height - 4 - ((v - lo) / span) * (height - 8);
}

function extent(rows: ArrayLike<number>[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const row of rows) {
    for (let i = 0; i < row.length; i++) {
      const v = row[i] as number;
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (lo === Infinity) return [0, 1];
  return lo === hi ? [lo - 1, hi + 1] : [lo, hi];
}

const CHANNEL_COLORS = ["#4ea1ff", "#ffb54e", "#7ee787", "#ff7b72", "#d2a8ff", "#a5d6ff"];

function context(canvas: HTMLCanvasElement): CanvasRenderingContext2D | null {
  // headless DOM test environments expose canvases without a 2d backend;
  // drawing is display-only so a missing context is a silent no-op
  try {
    return canvas.getContext("2d");
  } catch {
    return null;
  }
}

/** Query view: channels over the context range, shaded window, markers. */
export function drawQueryView(
  canvas: HTMLCanvasElement,
  query: QueryView,
  markers: number[],
  visibleChannels?: boolean[],
): Viewport {
  const samples = query.scores.length;
  const vp: Viewport = {
    first: query.context_start,
    last: query.context_start + samples - 1,
    width: canvas.width,
  };
  const ctx = context(canvas);
  if (ctx === null) return vp;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#0d1117";
  ctx.fillRect(0, 0, width, height);

  ctx.fillStyle = query.kind === "above" ? "rgba(78,161,255,0.18)" : "rgba(255,181,78,0.18)";
  const wx0 = indexToX(query.start, vp);
  const wx1 = indexToX(query.end, vp);
  ctx.fillRect(wx0, 0, Math.max(1, wx1 - wx0), height);

  const [lo, hi] = extent(query.values);
  query.values.forEach((channel, c) => {
    if (visibleChannels && visibleChannels[c] === false) return;
    ctx.strokeStyle = CHANNEL_COLORS[c % CHANNEL_COLORS.length] as string;
    ctx.lineWidth = 1;
    ctx.beginPath();
    const line = minMaxDownsample(channel, 2 * width);
    line.x.forEach((xi, k) => {
      const px = indexToX(vp.first + xi, vp);
      const py = valueToY(line.y[k] as number, lo, hi, height);
      if (k === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.stroke();
  });

  ctx.strokeStyle = "#e6edf3";
  const cx = indexToX(query.center, vp);
  ctx.setLineDash([4, 3]);
  ctx.beginPath();
  ctx.moveTo(cx, 0);
  ctx.lineTo(cx, height);
  ctx.stroke();
  ctx.setLineDash([]);

  ctx.strokeStyle = "#ff4ea1";
  ctx.lineWidth = 2;
  for (const m of markers) {
    const mx = indexToX(m, vp);
    ctx.beginPath();
    ctx.moveTo(mx, 0);
    ctx.lineTo(mx, height);
    ctx.stroke();
  }
  return vp;
}

/** Dashboard: prominence trace, threshold line, detection ticks. */
export function drawDashboard(
  canvas: HTMLCanvasElement,
  scores: ArrayLike<number>,
  threshold: number,
  detections: number[],
): Viewport {
  const vp: Viewport = { first: 0, last: Math.max(1, scores.length - 1), width: canvas.width };
  const ctx = context(canvas);
  if (ctx === null) return vp;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#0d1117";
  ctx.fillRect(0, 0, width, height);
  if (scores.length === 0) return vp;

  let hi = threshold;
  for (let i = 0; i < scores.length; i++) {
    const v = scores[i] as number;
    if (v > hi) hi = v;
  }
  const lo = 0;

  ctx.strokeStyle = "#7ee787";
  ctx.lineWidth = 1;
  ctx.beginPath();
  const line = minMaxDownsample(scores, 8000);
  line.x.forEach((xi, k) => {
    const px = indexToX(xi, vp);
    const py = valueToY(line.y[k] as number, lo, hi, height);
    if (k === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.stroke();

  const ty = valueToY(threshold, lo, hi, height);
  ctx.strokeStyle = "#ffb54e";
  ctx.setLineDash([6, 4]);
  ctx.beginPath();
  ctx.moveTo(0, ty);
  ctx.lineTo(width, ty);
  ctx.stroke();
  ctx.setLineDash([]);

  ctx.strokeStyle = "#ff4ea1";
  ctx.lineWidth = 2;
  for (const d of detections) {
    const dx = indexToX(d, vp);
    ctx.beginPath();
    ctx.moveTo(dx, height - 12);
    ctx.lineTo(dx, height);
    ctx.stroke();
  }
  return vp;
}

/** Translate a mouse event on a canvas into canvas pixel coordinates. */
export function eventToCanvasX(canvas: HTMLCanvasElement, ev: MouseEvent): number {
  const rect = canvas.getBoundingClientRect();
  const scale = rect.width > 0 ? canvas.width / rect.width : 1;
  return (ev.clientX - rect.left) * scale;
}
