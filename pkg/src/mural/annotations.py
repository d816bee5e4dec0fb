"""Containers for human-confirmed labels on sample index windows.

An annotated window is a closed index range [start, end] that an
annotator has fully inspected, together with every change point they
confirmed inside it.  Absence of a positive inside an annotated window
is therefore a meaningful negative, while samples outside any window
carry no information at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["AnnotatedWindow", "AnnotationSet"]


@dataclass(frozen=True)
class AnnotatedWindow:
    """A fully inspected closed index range and its confirmed positives."""

    start: int
    end: int
    positives: tuple = ()

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"bad window bounds [{self.start}, {self.end}]")
        pos = tuple(sorted(set(int(p) for p in self.positives)))
        for p in pos:
            if not self.start <= p <= self.end:
                raise ValueError(
                    f"positive {p} outside window [{self.start}, {self.end}]"
                )
        object.__setattr__(self, "positives", pos)

    def __contains__(self, index) -> bool:
        return self.start <= index <= self.end


@dataclass(frozen=True)
class AnnotationSet:
    """Immutable collection of annotated windows."""

    windows: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "windows", tuple(self.windows))

    def __len__(self) -> int:
        return len(self.windows)

    def add(self, window: AnnotatedWindow) -> "AnnotationSet":
        return AnnotationSet(windows=self.windows + (window,))

    @property
    def positives(self) -> tuple:
        out = set()
        for w in self.windows:
            out.update(w.positives)
        return tuple(sorted(out))

    def covered_mask(self, n: int) -> np.ndarray:
        """Boolean mask over n samples, True where some window covers."""
        mask = np.zeros(n, dtype=bool)
        for w in self.windows:
            if w.start < n:
                mask[w.start : min(w.end, n - 1) + 1] = True
        return mask

    def filter_inside(self, indices) -> tuple:
        """Keep only the indices that fall inside some annotated window."""
        return tuple(i for i in indices if any(i in w for w in self.windows))
