"""Data-driven initialization of detection hyperparameters.

The detection threshold is derived from the shape of the sorted score
curve: scores are sorted in decreasing order, min-max normalized, and
the interior point of maximum discrete curvature marks the transition
between the few genuinely salient peaks and the noise floor.  Band
weights start uniform and are only moved away from one(s) by the
supervised refinement loop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DegenerateScoresError",
    "SortedScoreCurve",
    "ElbowPoint",
    "build_curve",
    "curvature",
    "elbow",
    "init_threshold",
    "init_weights",
]


class DegenerateScoresError(ValueError):
    """Raised when a score vector has no usable curve shape."""


@dataclass(frozen=True, eq=False)
class SortedScoreCurve:
    """Scores sorted in decreasing order over the unit interval.

    Attributes
    ----------
    t : np.ndarray
        Uniform grid on [0, 1], one point per score.
    gamma : np.ndarray
        Sorted scores min-max normalized so gamma[0] == 1, gamma[-1] == 0.
    values : np.ndarray
        Sorted raw scores; values[0] is the maximum.
    """

    t: np.ndarray
    gamma: np.ndarray
    values: np.ndarray

    @property
    def n(self) -> int:
        return int(self.t.size)


@dataclass(frozen=True)
class ElbowPoint:
    """Location of the maximum-curvature point on a sorted score curve."""

    index: int
    t: float
    gamma: float
    value: float


def _as_scores(scores) -> np.ndarray:
    s = np.asarray(scores, dtype=float)
    if s.ndim != 1:
        raise ValueError(f"scores must be 1-D, got shape {s.shape}")
    if s.size == 0:
        raise ValueError("scores must be non-empty")
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    return s


def build_curve(scores) -> SortedScoreCurve:
    """Sort scores in decreasing order and normalize them to [0, 1].

    Raises
    ------
    DegenerateScoresError
        If all scores are equal, so min-max normalization is undefined.
    """
    s = _as_scores(scores)
    if s.size < 2:
        raise ValueError("need at least 2 scores to build a curve")
    values = np.sort(s)[::-1]
    lo, hi = values[-1], values[0]
    if hi == lo:
        raise DegenerateScoresError("all scores are equal")
    gamma = (values - lo) / (hi - lo)
    t = np.linspace(0.0, 1.0, values.size)
    return SortedScoreCurve(t=t, gamma=gamma, values=values)


def curvature(values, spacing: str = "grid") -> np.ndarray:
    """Discrete curvature |y''| / (1 + y'^2)^(3/2) at interior samples.

    Derivatives are central differences.  With ``spacing="grid"`` the
    samples are taken to sit on a uniform grid over [0, 1] (step
    1/(n-1)); with ``spacing="index"`` the step is 1, i.e. curvature of
    the curve plotted against sample index.

    Returns an array of length n - 2; entry j corresponds to sample
    j + 1 of ``values``.
    """
    v = _as_scores(values)
    if v.size < 3:
        raise ValueError("need at least 3 samples for curvature")
    if spacing == "grid":
        dt = 1.0 / (v.size - 1)
    elif spacing == "index":
        dt = 1.0
    else:
        raise ValueError(f"spacing must be 'grid' or 'index', got {spacing!r}")
    first = (v[2:] - v[:-2]) / (2.0 * dt)
    second = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (dt * dt)
    return np.abs(second) / np.power(1.0 + first * first, 1.5)


def elbow(curve: SortedScoreCurve, spacing: str = "index") -> ElbowPoint:
    """Interior point of maximum curvature that still sits above the floor.

    Candidates are interior samples with gamma > 0; points already on
    the floor carry no shape information, and on heavy-tailed score
    vectors (most samples at zero) the junction onto the floor would
    otherwise dominate the curvature.  Ties resolve to the smallest
    index, i.e. the highest score.
    """
    kappa = curvature(curve.gamma, spacing=spacing)
    interior = np.arange(1, curve.n - 1)
    candidates = interior[curve.gamma[interior] > 0.0]
    if candidates.size == 0:
        raise DegenerateScoresError("no interior point above the score floor")
    m = int(candidates[np.argmax(kappa[candidates - 1])])
    return ElbowPoint(
        index=m,
        t=float(curve.t[m]),
        gamma=float(curve.gamma[m]),
        value=float(curve.values[m]),
    )


def init_threshold(scores, mode: str = "elbow") -> float:
    """Starting detection threshold derived from a score vector.

    ``mode="elbow"`` places the threshold at the maximum-curvature
    point of the sorted score curve.  ``mode="max"`` starts at the
    largest score, so detections begin empty-or-singleton and only
    supervision can lower the bar.

    Degenerate vectors fall back to values that keep the threshold
    strictly positive: all-equal scores yield max + 1 (detect nothing),
    and a two-level vector yields the midpoint of the two levels.
    """
    s = _as_scores(scores)
    if mode == "max":
        top = float(s.max())
        return top if top > 0.0 else 1.0
    if mode != "elbow":
        raise ValueError(f"mode must be 'elbow' or 'max', got {mode!r}")
    distinct = np.unique(s)
    if distinct.size == 1:
        return float(distinct[0]) + 1.0
    if distinct.size == 2:
        return float(0.5 * (distinct[0] + distinct[1]))
    return elbow(build_curve(s), spacing="index").value


def init_weights(levels: int) -> np.ndarray:
    """Uniform starting weights, one per detail band plus approximation."""
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    return np.ones(levels + 1)
