"""Seeded piecewise-stationary series generators for tests and experiments.

Each generated series is Gaussian noise around a per-segment regime;
frequency regimes add a phase-continuous sinusoid on top.  Boundary
positions are evenly spaced up to a seeded jitter and reported as the
ground-truth label set.  Two independent PCG64 streams, split from one
seed sequence, drive (a) the regime structure and (b) the sample
noise, so the same seed reproduces the series bit for bit on any
platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .io import LabelSet, TimeSeries

__all__ = ["CHANGE_KINDS", "SynthSpec", "generate"]

CHANGE_KINDS = ("mean", "variance", "frequency")

# sinusoid period, in samples, of the low-frequency regime
_BASE_PERIOD = 32.0


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one synthetic series.

    ``kinds`` holds one change kind per boundary (a single string is
    broadcast to every boundary).  ``magnitude`` is interpreted per
    kind: mean regimes step by magnitude * noise, variance regimes
    toggle the noise scale between 1x and (1 + magnitude)x, and
    frequency regimes toggle the tone frequency by the same factor.
    A magnitude of 0 yields a stationary series whose nominal
    boundaries are still reported, for false-positive testing.
    """

    n: int
    d: int = 1
    segments: int = 2
    kinds: tuple = "mean"
    magnitude: float = 3.0
    noise: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.segments < 2:
            raise ValueError(f"segments must be >= 2, got {self.segments}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        # spacing >= 8x the jitter radius keeps jittered boundaries
        # distinct and strictly inside (0, n)
        if self.n < 8 * self.segments:
            raise ValueError(
                f"n must be >= 8 * segments = {8 * self.segments}, got {self.n}"
            )
        kinds = self.kinds
        if isinstance(kinds, str):
            kinds = (kinds,) * (self.segments - 1)
        kinds = tuple(kinds)
        if len(kinds) != self.segments - 1:
            raise ValueError(
                f"need {self.segments - 1} change kinds, got {len(kinds)}"
            )
        for k in kinds:
            if k not in CHANGE_KINDS:
                raise ValueError(f"unknown change kind {k!r}")
        object.__setattr__(self, "kinds", kinds)
        if self.magnitude < 0:
            raise ValueError(f"magnitude must be >= 0, got {self.magnitude}")
        if self.noise < 0:
            raise ValueError(f"noise must be >= 0, got {self.noise}")


def _boundaries(spec: SynthSpec, structure: np.random.Generator) -> list:
    jitter_max = spec.n // (8 * spec.segments)
    ideal = [round(j * spec.n / spec.segments) for j in range(1, spec.segments)]
    jitter = structure.integers(-jitter_max, jitter_max + 1, size=spec.segments - 1)
    return [int(b + j) for b, j in zip(ideal, jitter)]


def generate(spec: SynthSpec):
    """Draw the series described by spec.

    Returns (TimeSeries, LabelSet); the labels are the segment
    boundaries (first index of each new regime).
    """
    root = np.random.SeedSequence(spec.seed)
    struct_seq, noise_seq = root.spawn(2)
    structure = np.random.default_rng(struct_seq)
    noise_rng = np.random.default_rng(noise_seq)

    bounds = _boundaries(spec, structure)
    has_tone = "frequency" in spec.kinds
    mean = np.zeros(spec.d)
    sigma = spec.noise
    freq = 1.0 / _BASE_PERIOD
    variance_high = False
    frequency_high = False
    phase = structure.uniform(0.0, 2.0 * np.pi, size=spec.d) if has_tone else None

    x = np.empty((spec.d, spec.n))
    edges = [0, *bounds, spec.n]
    for seg in range(spec.segments):
        if seg > 0:
            kind = spec.kinds[seg - 1]
            if kind == "mean":
                signs = structure.choice([-1.0, 1.0], size=spec.d)
                mean = mean + spec.magnitude * spec.noise * signs
            elif kind == "variance":
                variance_high = not variance_high
                sigma = spec.noise * (1.0 + spec.magnitude if variance_high else 1.0)
            else:
                frequency_high = not frequency_high
                freq = (1.0 + spec.magnitude if frequency_high else 1.0) / _BASE_PERIOD
        start, stop = edges[seg], edges[seg + 1]
        m = stop - start
        block = mean[:, None] + sigma * noise_rng.normal(size=(spec.d, m))
        if has_tone:
            steps = 2.0 * np.pi * freq * np.arange(1, m + 1)
            block = block + np.sin(phase[:, None] + steps[None, :])
            phase = phase + 2.0 * np.pi * freq * m
        x[:, start:stop] = block
    return TimeSeries(x), LabelSet(change_points=tuple(bounds))
