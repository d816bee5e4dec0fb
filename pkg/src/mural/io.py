"""Series and label file handling.

Series are CSV files with one sample per row and one channel per column,
decimal point `.`, optionally preceded by a single header row.  Label files
hold one 0-based change-point index per line; `#` starts a comment.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class SignalFormatError(ValueError):
    """An input file does not parse as a valid series or label set."""


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A real-valued multichannel signal, stored channels x samples."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.atleast_2d(np.asarray(self.values, dtype=float))
        if arr.ndim != 2:
            raise ValueError(f"expected a channels x samples array, got {arr.ndim} dimensions")
        if arr.shape[1] < 2:
            raise ValueError(f"a series needs at least 2 samples, got {arr.shape[1]}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("series contains NaN or infinite values")
        # fixed memory layout so numerics are bit-reproducible regardless of
        # whether the data arrived transposed (e.g. from a CSV round trip)
        object.__setattr__(self, "values", np.ascontiguousarray(arr))

    @property
    def d(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class LabelSet:
    """Change-point indices, kept sorted and deduplicated."""

    change_points: tuple[int, ...]

    def __post_init__(self) -> None:
        pts = tuple(sorted({int(i) for i in self.change_points}))
        if any(i < 0 for i in pts):
            raise ValueError("change-point indices must be non-negative")
        object.__setattr__(self, "change_points", pts)

    def __len__(self) -> int:
        return len(self.change_points)


def load_csv(path: str | Path, has_header: bool = False) -> TimeSeries:
    """Parse a CSV series file.  Row/column numbers in errors are 1-based."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if has_header and rows:
        rows = rows[1:]
    rows = [r for r in rows if r and not all(c.strip() == "" for c in r)]
    if not rows:
        raise SignalFormatError(f"{path}: no data rows")
    offset = 2 if has_header else 1  # physical line number of the first data row
    width = len(rows[0])
    data = np.empty((len(rows), width), dtype=float)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise SignalFormatError(
                f"{path}: row {i + offset} has {len(row)} columns, expected {width}"
            )
        for j, cell in enumerate(row):
            try:
                data[i, j] = float(cell)
            except ValueError:
                raise SignalFormatError(
                    f"{path}: row {i + offset}, column {j + 1}: {cell!r} is not a number"
                ) from None
    bad = np.argwhere(~np.isfinite(data))
    if bad.size:
        i, j = bad[0]
        raise SignalFormatError(
            f"{path}: row {int(i) + offset}, column {int(j) + 1}: value is not finite"
        )
    if data.shape[0] < 2:
        raise SignalFormatError(f"{path}: a series needs at least 2 samples, got {data.shape[0]}")
    return TimeSeries(data.T)


def save_csv(x: TimeSeries, path: str | Path, header: Sequence[str] | None = None) -> None:
    """Write a series back to CSV (one sample per row).  Mirror of load_csv."""
    path = Path(path)
    if header is not None and len(header) != x.d:
        raise ValueError(f"header has {len(header)} names for {x.d} channels")
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        if header is not None:
            writer.writerow(header)
        for row in x.values.T:
            writer.writerow([f"{v:.17g}" for v in row])


def load_labels(path: str | Path, n: int | None = None) -> LabelSet:
    """Parse a label file; indices must lie in [0, n) when n is given."""
    path = Path(path)
    points: list[int] = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                value = int(text)
            except ValueError:
                raise SignalFormatError(
                    f"{path}: line {lineno}: {text!r} is not an integer index"
                ) from None
            if value < 0 or (n is not None and value >= n):
                bound = f"[0, {n})" if n is not None else "[0, inf)"
                raise SignalFormatError(f"{path}: line {lineno}: index {value} outside {bound}")
            points.append(value)
    return LabelSet(tuple(points))


def save_labels(labels: LabelSet | Iterable[int], path: str | Path) -> None:
    """Write one change-point index per line."""
    if not isinstance(labels, LabelSet):
        labels = LabelSet(tuple(labels))
    Path(path).write_text("".join(f"{i}\n" for i in labels.change_points))


def standardize(x: TimeSeries) -> TimeSeries:
    """Shift/scale each channel to zero mean and unit population variance.

    Constant channels map to all zeros.  Idempotent up to rounding.
    """
    values = x.values
    mean = values.mean(axis=1, keepdims=True)
    std = values.std(axis=1, keepdims=True)
    constant = np.ptp(values, axis=1, keepdims=True) == 0.0
    out = np.where(constant, 0.0, (values - mean) / np.where(std == 0.0, 1.0, std))
    return TimeSeries(out)
