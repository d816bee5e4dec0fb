"""Multilevel discrete wavelet decomposition with periodic boundary handling.

Each analysis step circularly convolves the signal with a low-pass and a
high-pass filter and keeps the even-indexed outputs, halving the length.
Odd-length inputs are first extended by repeating the last sample, so the
length at depth k is ceil(n / 2**k).  For even lengths at every level the
step is orthogonal and conserves energy exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .io import TimeSeries


class DecompositionDepthError(ValueError):
    """Requested depth leaves the coarsest band shorter than the filter."""

    def __init__(self, message: str, max_levels: int):
        super().__init__(message)
        self.max_levels = max_levels


@dataclass(frozen=True)
class WaveletFilters:
    """An orthogonal analysis filter pair."""

    low_pass: tuple[float, ...]
    high_pass: tuple[float, ...]
    name: str = ""

    def __post_init__(self) -> None:
        if len(self.low_pass) != len(self.high_pass):
            raise ValueError("low-pass and high-pass filters must have equal length")
        if len(self.low_pass) < 2:
            raise ValueError("filters need at least 2 taps")
        if abs(sum(self.high_pass)) > 1e-12:
            raise ValueError("high-pass taps must sum to zero")

    @property
    def taps(self) -> int:
        return len(self.low_pass)

    @classmethod
    def from_low_pass(cls, low_pass, name: str = "") -> "WaveletFilters":
        """Build the quadrature-mirror pair h[k] = (-1)^k * l[L-1-k]."""
        low = tuple(float(v) for v in low_pass)
        high = tuple((-1.0) ** k * low[len(low) - 1 - k] for k in range(len(low)))
        return cls(low, high, name)


def db2() -> WaveletFilters:
    s3 = math.sqrt(3.0)
    s2 = 4.0 * math.sqrt(2.0)
    low = ((1.0 + s3) / s2, (3.0 + s3) / s2, (3.0 - s3) / s2, (1.0 - s3) / s2)
    return WaveletFilters.from_low_pass(low, name="db2")


@dataclass(frozen=True, eq=False)
class SubbandSet:
    """Detail bands 1..K (fine to coarse) plus the depth-K approximation."""

    details: tuple[np.ndarray, ...]
    approximation: np.ndarray
    level_lengths: tuple[int, ...]

    @property
    def levels(self) -> int:
        return len(self.details)

    @property
    def bands(self) -> tuple[np.ndarray, ...]:
        """All K+1 sub-bands, details first, approximation last."""
        return self.details + (self.approximation,)


def max_decomposition_level(n: int, taps: int = 4) -> int:
    """Largest depth K with ceil(n / 2**K) >= taps."""
    level = 0
    length = n
    while math.ceil(length / 2) >= taps:
        length = math.ceil(length / 2)
        level += 1
    return level


def dwt_step(signal: np.ndarray, filters: WaveletFilters | None = None):
    """One analysis step: returns (approximation, detail) at half length.

    Keeps even-indexed outputs of the circular convolution; an odd-length
    input is extended by repeating its last sample first.
    """
    if filters is None:
        filters = db2()
    x = np.asarray(signal, dtype=float)
    squeeze = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] < 2:
        raise ValueError(f"dwt_step needs at least 2 samples, got {x.shape[1]}")
    if x.shape[1] % 2:
        x = np.concatenate([x, x[:, -1:]], axis=1)
    n = x.shape[1]
    # y[2j] = sum_k f[k] * x[(2j - k) mod n], accumulated tap by tap in a
    # fixed order so each channel sees the same arithmetic regardless of d
    out_idx = 2 * np.arange(n // 2)
    approx = np.zeros((x.shape[0], n // 2))
    detail = np.zeros_like(approx)
    for k in range(filters.taps):
        shifted = x[:, (out_idx - k) % n]
        approx += filters.low_pass[k] * shifted
        detail += filters.high_pass[k] * shifted
    if squeeze:
        return approx[0], detail[0]
    return approx, detail


def mdwd(x: TimeSeries | np.ndarray, levels: int, filters: WaveletFilters | None = None) -> SubbandSet:
    """Decompose every channel to the given depth.

    Channels are processed independently; band k has length ceil(n / 2**k).
    """
    if filters is None:
        filters = db2()
    values = x.values if isinstance(x, TimeSeries) else np.atleast_2d(np.asarray(x, dtype=float))
    n = values.shape[1]
    if levels < 1:
        raise ValueError(f"decomposition depth must be >= 1, got {levels}")
    admissible = max_decomposition_level(n, filters.taps)
    if levels > admissible:
        raise DecompositionDepthError(
            f"depth {levels} leaves fewer than {filters.taps} samples in the coarsest band "
            f"(n={n}); max admissible depth is {admissible}",
            max_levels=admissible,
        )
    details: list[np.ndarray] = []
    lengths: list[int] = []
    approx = values
    for _ in range(levels):
        approx, detail = dwt_step(approx, filters)
        details.append(detail)
        lengths.append(detail.shape[1])
    return SubbandSet(tuple(details), approx, tuple(lengths))
