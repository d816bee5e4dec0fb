"""End-to-end unsupervised detection: signal in, change points out.

Wires the stages together: channel standardization, multilevel
decomposition, per-band discrepancy features, uniform starting
weights, data-driven threshold, peak detection.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import Config
from .detect import Detections, Hyperparams, ScoreVector, aggregate, detect, prominence
from .discrepancy import FeatureMatrix, extract_features
from .init import init_threshold, init_weights
from .io import TimeSeries, standardize
from .wavelet import mdwd

__all__ = ["PipelineResult", "prepare", "initial_params", "run_unsupervised"]


@dataclass(frozen=True, eq=False)
class PipelineResult:
    features: FeatureMatrix
    params: Hyperparams
    score: ScoreVector
    detections: Detections


def prepare(x: TimeSeries, config: Config) -> FeatureMatrix:
    """Standardize, decompose to config.levels, and score every band.

    Both normalize modes coincide for a single sequence; the statistics
    are always taken over the sequence itself.
    """
    xs = standardize(x)
    bands = mdwd(xs, config.levels)
    return extract_features(bands, config.window, n=x.n, eps=config.eps)


def initial_params(features: FeatureMatrix, config: Config) -> Hyperparams:
    """Uniform band weights plus the threshold read off the score curve."""
    weights = init_weights(config.levels)
    scores = prominence(aggregate(features, weights))
    zeta = init_threshold(scores, mode=config.init_threshold)
    return Hyperparams(weights=tuple(weights), threshold=zeta)


def run_unsupervised(x: TimeSeries, config: Config) -> PipelineResult:
    features = prepare(x, config)
    params = initial_params(features, config)
    score, found = detect(features, params)
    return PipelineResult(
        features=features, params=params, score=score, detections=found
    )
