"""Windowed covariance discrepancy features over wavelet sub-bands.

At each admissible index i of a band the score compares the Gaussian fit of
the 2w samples around i against separate fits of the w samples ending at i
and the w samples starting at i+1; a change in mean, scale, or correlation
inflates the pooled covariance and yields a positive score.  Scores from all
bands are resampled to the input length so they can be aggregated per index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.signal import resample as _fourier_resample

from .wavelet import SubbandSet


class WindowSizeError(ValueError):
    """A band is too short for the requested half-window."""


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Per-band discrepancy scores aligned to the input grid, one row per band."""

    features: np.ndarray
    window_size: int
    regularization: tuple[float, ...]

    def __post_init__(self) -> None:
        arr = np.atleast_2d(np.asarray(self.features, dtype=float))
        if arr.shape[0] != len(self.regularization):
            raise ValueError("one regularization value per feature row is required")
        if not np.all(np.isfinite(arr)):
            raise ValueError("features contain NaN or infinite values")
        if arr.min() < 0:
            raise ValueError("features must be non-negative")
        object.__setattr__(self, "features", arr)

    @property
    def bands(self) -> int:
        return self.features.shape[0]

    @property
    def n(self) -> int:
        return self.features.shape[1]


def windows(xbar: np.ndarray, i: int, w: int):
    """Left/right/center comparison windows at index i.

    Left holds the w samples ending at i, right the w samples starting at
    i+1, center their concatenation (2w samples).
    """
    x = np.atleast_2d(np.asarray(xbar, dtype=float))
    length = x.shape[1]
    if w < 2:
        raise ValueError(f"half-window must be >= 2, got {w}")
    if i < w - 1 or i > length - w - 1:
        raise ValueError(f"index {i} inadmissible for w={w} on length {length}")
    return x[:, i - w + 1 : i + 1], x[:, i + 1 : i + w + 1], x[:, i - w + 1 : i + w + 1]


def _sliding_covariances(x: np.ndarray, m: int) -> np.ndarray:
    """MLE covariance of every length-m window; shape (count, d, d).

    Centered two-pass form keeps each matrix positive semidefinite by
    construction.  Chunked to bound the centered-copy memory.
    """
    d, length = x.shape
    count = length - m + 1
    out = np.empty((count, d, d))
    view = sliding_window_view(x, m, axis=1)  # (d, count, m)
    step = max(1, 2**22 // (d * m))
    for lo in range(0, count, step):
        hi = min(lo + step, count)
        block = view[:, lo:hi, :]
        centered = block - block.mean(axis=2, keepdims=True)
        out[lo:hi] = np.einsum("akm,bkm->kab", centered, centered) / m
    return out


def _ridged_logdet(covs: np.ndarray, eps: float) -> np.ndarray:
    ridged = covs + eps * np.eye(covs.shape[-1])
    try:
        chol = np.linalg.cholesky(ridged)
    except np.linalg.LinAlgError:
        raise ValueError(
            "covariance not positive definite despite ridge; increase eps"
        ) from None
    diag = np.diagonal(chol, axis1=-2, axis2=-1)
    return 2.0 * np.sum(np.log(diag), axis=-1)


def normal_discrepancy(
    xbar: np.ndarray, w: int, eps: float, clip: bool = True
) -> np.ndarray:
    """Score every index of a band; boundary indices without full windows get 0.

    With exact arithmetic the score is non-negative; `clip=False` exposes the
    raw value (useful to bound the floating-point error).
    """
    x = np.atleast_2d(np.asarray(xbar, dtype=float))
    d, length = x.shape
    if w < 2:
        raise ValueError(f"half-window must be >= 2, got {w}")
    if eps <= 0:
        raise ValueError(f"ridge must be positive, got {eps}")
    if length < 2 * w:
        raise WindowSizeError(
            f"band of length {length} cannot fit two windows of w={w}; "
            f"max admissible w is {length // 2}"
        )
    ld_w = _ridged_logdet(_sliding_covariances(x, w), eps)
    ld_2w = _ridged_logdet(_sliding_covariances(x, 2 * w), eps)
    m = length - 2 * w + 1
    raw = w * (ld_2w - 0.5 * (ld_w[:m] + ld_w[w : w + m]))
    scores = np.zeros(length)
    scores[w - 1 : length - w] = np.maximum(raw, 0.0) if clip else raw
    return scores


def fourier_resample(v: np.ndarray, target_len: int) -> np.ndarray:
    """Resample by spectral zero-padding/truncation; preserves the mean."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError("fourier_resample expects a 1-D vector")
    if v.size < 2 or target_len < 2:
        raise ValueError("resampling needs at least 2 samples on both sides")
    return _fourier_resample(v, int(target_len))


def default_ridge(band: np.ndarray) -> float:
    """Scale-aware covariance ridge: 1e-6 * mean channel variance + 1e-12."""
    x = np.atleast_2d(np.asarray(band, dtype=float))
    return 1e-6 * float(np.mean(x.var(axis=1))) + 1e-12


def extract_features(
    bands: SubbandSet, w: int, n: int, eps: float | None = None
) -> FeatureMatrix:
    """Discrepancy-score every sub-band and align all scores to length n.

    `eps` overrides the per-band default ridge.  Resampling can undershoot
    zero, so values are clipped at 0 afterwards.
    """
    rows = []
    ridges = []
    for level, band in enumerate(bands.bands, start=1):
        if band.shape[1] < 2 * w:
            label = "approximation" if level == len(bands.bands) else f"detail {level}"
            raise WindowSizeError(
                f"sub-band {label} has {band.shape[1]} samples, needs >= {2 * w} "
                f"for w={w}; reduce depth or window"
            )
        ridge = default_ridge(band) if eps is None else float(eps)
        scores = normal_discrepancy(band, w, ridge)
        rows.append(np.maximum(fourier_resample(scores, n), 0.0))
        ridges.append(ridge)
    return FeatureMatrix(np.vstack(rows), window_size=w, regularization=tuple(ridges))
