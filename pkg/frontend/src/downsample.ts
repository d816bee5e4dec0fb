/** Display-only min-max decimation for long traces; never fed back upstream. */

export interface Polyline {
  x: number[];
  y: number[];
}

/**
 * Reduce a trace to at most maxPoints vertices while keeping every local
 * extreme visible: each bin contributes its minimum and maximum sample in
 * index order. Short inputs pass through unchanged.
 */
export function minMaxDownsample(values: ArrayLike<number>, maxPoints = 8000): Polyline {
  const n = values.length;
  if (maxPoints < 2) throw new Error(`maxPoints must be >= 2, got ${maxPoints}`);
  if (n <= maxPoints) {
    const x = new Array<number>(n);
    const y = new Array<number>(n);
    for (let i = 0; i < n; i++) {
      x[i] = i;
      y[i] = values[i] as number;
    }
    return { x, y };
  }
  const bins = Math.floor(maxPoints / 2);
  const x: number[] = [];
  const y: number[] = [];
  for (let b = 0; b < bins; b++) {
    const lo = Math.floor((b * n) / bins);
    const hi = Math.floor(((b + 1) * n) / bins); // exclusive, non-empty by construction
    let minIdx = lo;
    let maxIdx = lo;
    for (let i = lo + 1; i < hi; i++) {
      const v = values[i] as number;
      if (v < (values[minIdx] as number)) minIdx = i;
      if (v > (values[maxIdx] as number)) maxIdx = i;
    }
    const first = Math.min(minIdx, maxIdx);
    const second = Math.max(minIdx, maxIdx);
    x.push(first);
    y.push(values[first] as number);
    if (second !== first) {
      x.push(second);
      y.push(values[second] as number);
    }
  }
  return { x, y };
}
