"""Detection quality metrics under a positional tolerance.

A predicted change point can only be credited to a true change point
if it lies within the tolerance AND no other prediction is strictly
closer to that truth.  Pairings are one-to-one; among the admissible
pairs a maximum-cardinality assignment is used, so tied distances
never cost a match that a better pairing order would have found.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["MatchReport", "match"]


@dataclass(frozen=True)
class MatchReport:
    """One-to-one matching of predictions to truths plus derived scores."""

    predicted: tuple
    truth: tuple
    tolerance: float
    pairs: tuple
    true_positives: int
    false_positives: int
    false_negatives: int
    precision: float
    recall: float
    f1: float


def _candidate_pairs(pred: np.ndarray, truth: np.ndarray, tolerance: float):
    """Admissible (truth index, pred index) pairs.

    For each truth the candidates are the tied-closest predictions,
    admitted only when that closest distance is within tolerance.
    """
    adjacency: dict[int, list[int]] = {}
    for ti in range(truth.size):
        dist = np.abs(pred - truth[ti])
        dmin = dist.min()
        if dmin <= tolerance:
            adjacency[ti] = [int(pi) for pi in np.flatnonzero(dist == dmin)]
    return adjacency


def _max_matching(adjacency: dict[int, list[int]], n_truth: int) -> dict[int, int]:
    """Maximum bipartite matching via augmenting paths; pred -> truth."""
    owner: dict[int, int] = {}

    def augment(ti: int, seen: set) -> bool:
        for pi in adjacency.get(ti, []):
            if pi in seen:
                continue
            seen.add(pi)
            if pi not in owner or augment(owner[pi], seen):
                owner[pi] = ti
                return True
        return False

    for ti in range(n_truth):
        augment(ti, set())
    return owner


def match(predicted, truth, tolerance: float) -> MatchReport:
    """Score a set of predicted change points against the truth.

    Precision is 0 when there are no predictions, recall is 0 when
    there are no truths, and F1 is 0 whenever precision + recall is.
    """
    if not isinstance(tolerance, (int, float)) or not math.isfinite(tolerance):
        raise ValueError(f"tolerance must be a finite number, got {tolerance!r}")
    if tolerance < 0:
        raise ValueError(f"tolerance must be >= 0, got {tolerance}")
    pred_sorted = tuple(sorted(predicted))
    truth_sorted = tuple(sorted(truth))
    p = np.asarray(pred_sorted, dtype=float)
    t = np.asarray(truth_sorted, dtype=float)
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(t))):
        raise ValueError("positions must be finite")

    if p.size and t.size:
        owner = _max_matching(_candidate_pairs(p, t, float(tolerance)), t.size)
    else:
        owner = {}
    pairs = tuple(
        sorted((pred_sorted[pi], truth_sorted[ti]) for pi, ti in owner.items())
    )
    tp = len(pairs)
    fp = len(pred_sorted) - tp
    fn = len(truth_sorted) - tp
    precision = tp / len(pred_sorted) if pred_sorted else 0.0
    recall = tp / len(truth_sorted) if truth_sorted else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    return MatchReport(
        predicted=pred_sorted,
        truth=truth_sorted,
        tolerance=float(tolerance),
        pairs=pairs,
        true_positives=tp,
        false_positives=fp,
        false_negatives=fn,
        precision=precision,
        recall=recall,
        f1=f1,
    )
