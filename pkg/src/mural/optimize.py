"""Budgeted hyperparameter refinement against annotated windows.

The objective is 1 - F1 computed only where supervision exists:
predictions outside every annotated window are discarded before
scoring, and the truth set is the union of confirmed positives.  The
search evaluates the incumbent, then a seeded Latin hypercube sample
of the (weights, threshold) box, then greedy Gaussian perturbations
around the best point found, never returning anything worse than the
incumbent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .annotations import AnnotationSet
from .detect import Hyperparams, detect
from .discrepancy import FeatureMatrix
from .metrics import match

__all__ = [
    "ObjectiveValue",
    "SearchSpace",
    "OptimizeResult",
    "evaluate",
    "candidate_pool",
    "optimize",
]

# fraction of the non-incumbent budget spent on the hypercube sample
# when the budget cannot cover the whole pool
GLOBAL_FRACTION = 0.6
# local Gaussian steps use this fraction of each dimension's range
LOCAL_SIGMA_FRACTION = 0.1


@dataclass(frozen=True)
class ObjectiveValue:
    """Supervised detection quality of one hyperparameter setting."""

    f1: float
    precision: float
    recall: float

    @property
    def loss(self) -> float:
        return 1.0 - self.f1

    def key(self) -> tuple:
        """Sort key: lower loss first, higher recall breaks ties."""
        return (self.loss, -self.recall)


@dataclass(frozen=True)
class SearchSpace:
    """Bounds and budget for the refinement search.

    ``threshold_range`` of None derives the range from the incumbent:
    [0.5 * threshold, 2 * max prominent score].
    """

    weight_max: float = 2.0
    threshold_range: tuple | None = None
    grid_size: int = 5000
    evaluations: int = 50

    def __post_init__(self):
        if self.weight_max <= 0:
            raise ValueError(f"weight_max must be > 0, got {self.weight_max}")
        if self.grid_size < 2:
            raise ValueError(f"grid_size must be >= 2, got {self.grid_size}")
        if self.evaluations < 1:
            raise ValueError(f"evaluations must be >= 1, got {self.evaluations}")
        if self.threshold_range is not None:
            lo, hi = self.threshold_range
            if not 0 < lo < hi:
                raise ValueError(f"bad threshold_range ({lo}, {hi})")


@dataclass(frozen=True)
class OptimizeResult:
    params: Hyperparams
    objective: ObjectiveValue
    evaluations_used: int


def evaluate(
    features: FeatureMatrix,
    params: Hyperparams,
    annotations: AnnotationSet,
    tolerance: float,
) -> ObjectiveValue:
    """Score params on the annotated region only."""
    _, found = detect(features, params)
    kept = annotations.filter_inside(found.indices)
    report = match(kept, annotations.positives, tolerance)
    return ObjectiveValue(
        f1=report.f1, precision=report.precision, recall=report.recall
    )


def _threshold_bounds(incumbent: Hyperparams, score_ceiling: float) -> tuple:
    lo = 0.5 * incumbent.threshold
    hi = 2.0 * score_ceiling
    if hi <= lo:
        hi = 2.0 * lo
    return lo, hi


def _latin_hypercube(rng: np.random.Generator, count: int, dims: int) -> np.ndarray:
    """count x dims sample in [0, 1) with one point per axis stratum."""
    u = rng.random((count, dims))
    out = np.empty_like(u)
    for j in range(dims):
        out[:, j] = (rng.permutation(count) + u[:, j]) / count
    return out


def _from_row(row: np.ndarray, space: SearchSpace, lo: float, hi: float) -> Hyperparams:
    return Hyperparams(
        weights=tuple(space.weight_max * row[:-1]),
        threshold=lo + (hi - lo) * row[-1],
    )


def candidate_pool(
    incumbent: Hyperparams,
    score_ceiling: float,
    space: SearchSpace,
    seed: int,
) -> tuple:
    """Deterministic evaluation pool: the incumbent plus grid_size - 1
    Latin hypercube points over the (weights, threshold) box."""
    dims = len(incumbent.weights) + 1
    lo, hi = (
        space.threshold_range
        if space.threshold_range is not None
        else _threshold_bounds(incumbent, score_ceiling)
    )
    rng = np.random.default_rng(seed)
    unit = _latin_hypercube(rng, space.grid_size - 1, dims)
    return (incumbent,) + tuple(_from_row(row, space, lo, hi) for row in unit)


def optimize(
    features: FeatureMatrix,
    incumbent: Hyperparams,
    annotations: AnnotationSet,
    tolerance: float,
    space: SearchSpace = SearchSpace(),
    seed: int = 0,
) -> OptimizeResult:
    """Refine hyperparameters within a fixed evaluation budget.

    The budget covers every objective evaluation including the
    incumbent's.  When it cannot cover the whole pool, a 60/40 split
    sends the remainder to the hypercube sample and then to greedy
    Gaussian steps around the running best.  Results are deterministic
    in (seed, space) and never worse than the incumbent.
    """
    scores, _ = detect(features, incumbent)
    ceiling = float(scores.prominent.max())
    lo, hi = (
        space.threshold_range
        if space.threshold_range is not None
        else _threshold_bounds(incumbent, ceiling)
    )
    # the pool is always drawn in full so the same seed gives the same
    # candidates no matter the budget
    rng = np.random.default_rng(seed)
    dims = len(incumbent.weights) + 1
    unit = _latin_hypercube(rng, space.grid_size - 1, dims)

    best = incumbent
    best_val = evaluate(features, incumbent, annotations, tolerance)
    used = 1

    remaining = space.evaluations - 1
    if remaining >= space.grid_size - 1:
        n_global = space.grid_size - 1
    else:
        n_global = int(round(GLOBAL_FRACTION * remaining))
    n_local = remaining - n_global

    for row in unit[:n_global]:
        cand = _from_row(row, space, lo, hi)
        val = evaluate(features, cand, annotations, tolerance)
        used += 1
        if val.key() < best_val.key():
            best, best_val = cand, val

    sigma_w = LOCAL_SIGMA_FRACTION * space.weight_max
    sigma_z = LOCAL_SIGMA_FRACTION * (hi - lo)
    for _ in range(n_local):
        w = np.clip(
            np.asarray(best.weights) + rng.normal(0.0, sigma_w, size=dims - 1),
            0.0,
            space.weight_max,
        )
        z = float(np.clip(best.threshold + rng.normal(0.0, sigma_z), lo, hi))
        used += 1
        if not np.any(w > 0):
            continue
        cand = Hyperparams(weights=tuple(w), threshold=z)
        val = evaluate(features, cand, annotations, tolerance)
        if val.key() < best_val.key():
            best, best_val = cand, val

    return OptimizeResult(params=best, objective=best_val, evaluations_used=used)
