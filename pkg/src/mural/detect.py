"""Score aggregation, peak prominence, and threshold detection.

The detector forms a weighted sum of the feature rows, replaces it by its
topographic prominence (height of each peak above the higher of its two
surrounding bases), and reports every index at or above the threshold.
Prominence is positively homogeneous, so scaling weights and threshold by
the same factor leaves the detection set unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discrepancy import FeatureMatrix


@dataclass(frozen=True)
class Hyperparams:
    """Per-band aggregation weights and the detection threshold."""

    weights: tuple[float, ...]
    threshold: float

    def __post_init__(self) -> None:
        weights = tuple(float(v) for v in self.weights)
        if not weights:
            raise ValueError("at least one weight is required")
        if any(v < 0 for v in weights):
            raise ValueError("weights must be non-negative")
        if not any(v > 0 for v in weights):
            raise ValueError("at least one weight must be positive")
        threshold = float(self.threshold)
        if not threshold > 0:
            raise ValueError(f"threshold must be positive, got {threshold}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "threshold", threshold)


@dataclass(frozen=True, eq=False)
class ScoreVector:
    """Aggregated score before and after the prominence transform."""

    raw: np.ndarray
    prominent: np.ndarray


@dataclass(frozen=True)
class Detections:
    """Detected change-point indices, sorted ascending."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "indices", tuple(int(i) for i in sorted(self.indices)))

    def __len__(self) -> int:
        return len(self.indices)


def aggregate(features: FeatureMatrix | np.ndarray, weights) -> np.ndarray:
    """Weighted sum of feature rows."""
    rows = features.features if isinstance(features, FeatureMatrix) else np.atleast_2d(features)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (rows.shape[0],):
        raise ValueError(f"{weights.size} weights for {rows.shape[0]} feature rows")
    return weights @ rows


def _summits(f: np.ndarray) -> np.ndarray:
    """Leftmost index of every interior plateau that is a local maximum."""
    n = f.size
    boundaries = np.flatnonzero(np.diff(f) != 0)
    starts = np.concatenate(([0], boundaries + 1))
    vals = f[starts]
    if starts.size < 3:
        return np.empty(0, dtype=np.int64)
    rises = vals[1:-1] > vals[:-2]
    falls = vals[1:-1] > vals[2:]
    return starts[1:-1][rises & falls]


def _nearest_strictly_greater(f: np.ndarray):
    """For each index, the nearest index with a strictly greater value on
    each side (-1 / n when none exists)."""
    n = f.size
    prev = np.full(n, -1, dtype=np.int64)
    stack: list[int] = []
    for i in range(n):
        v = f[i]
        while stack and f[stack[-1]] <= v:
            stack.pop()
        if stack:
            prev[i] = stack[-1]
        stack.append(i)
    nxt = np.full(n, n, dtype=np.int64)
    stack = []
    for i in range(n - 1, -1, -1):
        v = f[i]
        while stack and f[stack[-1]] <= v:
            stack.pop()
        if stack:
            nxt[i] = stack[-1]
        stack.append(i)
    return prev, nxt


class _RangeMin:
    """Sparse table for O(1) inclusive range-minimum queries."""

    def __init__(self, f: np.ndarray):
        n = f.size
        levels = max(1, int(np.log2(n)) + 1)
        table = [f]
        for j in range(1, levels):
            half = 1 << (j - 1)
            prevt = table[-1]
            if prevt.size <= half:
                break
            table.append(np.minimum(prevt[:-half], prevt[half:]))
        self.table = table

    def query(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        span = hi - lo + 1
        k = np.floor(np.log2(span)).astype(np.int64)
        out = np.empty(lo.shape, dtype=float)
        for level in np.unique(k):
            mask = k == level
            width = 1 << int(level)
            t = self.table[int(level)]
            out[mask] = np.minimum(t[lo[mask]], t[hi[mask] - width + 1])
        return out


def prominence(f: np.ndarray) -> np.ndarray:
    """Topographic prominence of every sample; non-peaks and endpoints get 0.

    A peak's interval extends to the nearest strictly greater value on each
    side (array bounds otherwise); its prominence is the peak height minus
    the higher of the two interval minima.  Equal-height samples do not stop
    the extension, so flat-topped peaks keep their full prominence.
    """
    f = np.asarray(f, dtype=float)
    if f.ndim != 1:
        raise ValueError("prominence expects a 1-D score vector")
    n = f.size
    if n < 3:
        raise ValueError(f"prominence needs at least 3 samples, got {n}")
    out = np.zeros(n)
    peaks = _summits(f)
    if peaks.size == 0:
        return out
    prev, nxt = _nearest_strictly_greater(f)
    left_edge = np.where(prev[peaks] < 0, 0, prev[peaks])
    right_edge = np.where(nxt[peaks] >= n, n - 1, nxt[peaks])
    rmin = _RangeMin(f)
    base_left = rmin.query(left_edge, peaks)
    base_right = rmin.query(peaks, right_edge)
    out[peaks] = f[peaks] - np.maximum(base_left, base_right)
    return out


def detect(features: FeatureMatrix | np.ndarray, params: Hyperparams):
    """Aggregate, transform, and threshold; detection uses >= (inclusive)."""
    raw = aggregate(features, params.weights)
    prominent = prominence(raw)
    indices = np.flatnonzero(prominent >= params.threshold)
    return ScoreVector(raw, prominent), Detections(tuple(int(i) for i in indices))
