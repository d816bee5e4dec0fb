"""Run configuration: defaults, named presets, and a key=value file format.

The file format is one ``key = value`` assignment per line, with ``#``
comments and blank lines ignored.  Keys mirror Config field names;
optimizer settings may be written dotted (``optimizer.evaluations``)
or flat (``optimizer_evaluations``).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

__all__ = ["Config", "PRESETS", "load_config"]


@dataclass(frozen=True)
class Config:
    """Everything needed to run detection and an annotation session.

    ``eps`` of None selects the scale-aware per-band covariance ridge;
    ``normalize`` is kept for symmetry with multi-recording corpora but
    both modes coincide on a single sequence.
    """

    levels: int = 4
    window: int = 20
    eta: int = 20
    budget: int = 30
    warmup: int = 10
    cadence: int = 2
    queries_per_round: int = 2
    seed: int = 0
    init_threshold: str = "elbow"
    normalize: str = "per-sequence"
    eps: float | None = None
    optimizer_evaluations: int = 50
    optimizer_grid_size: int = 5000
    optimizer_weight_max: float = 2.0

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")
        if self.window < 2:
            raise ValueError(f"window must be >= 2, got {self.window}")
        if self.eta < 0:
            raise ValueError(f"eta must be >= 0, got {self.eta}")
        if self.budget < 0:
            raise ValueError(f"budget must be >= 0, got {self.budget}")
        if self.warmup < 0:
            raise ValueError(f"warmup must be >= 0, got {self.warmup}")
        if self.cadence < 1:
            raise ValueError(f"cadence must be >= 1, got {self.cadence}")
        if self.queries_per_round not in (1, 2):
            raise ValueError(
                f"queries_per_round must be 1 or 2, got {self.queries_per_round}"
            )
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")
        if self.init_threshold not in ("elbow", "max"):
            raise ValueError(
                f"init_threshold must be 'elbow' or 'max', got {self.init_threshold!r}"
            )
        if self.normalize not in ("per-sequence", "global"):
            raise ValueError(
                f"normalize must be 'per-sequence' or 'global', got {self.normalize!r}"
            )
        if self.eps is not None and self.eps <= 0:
            raise ValueError(f"eps must be positive or None, got {self.eps}")
        if self.optimizer_evaluations < 1:
            raise ValueError("optimizer_evaluations must be >= 1")
        if self.optimizer_grid_size < 2:
            raise ValueError("optimizer_grid_size must be >= 2")
        if self.optimizer_weight_max <= 0:
            raise ValueError("optimizer_weight_max must be > 0")


# sampling-rate-appropriate depths / windows / tolerances per dataset family
PRESETS = {
    "babyecg": Config(levels=5, window=15, eta=15),
    "ucihar": Config(levels=2, window=12, eta=8),
    "honeybee": Config(levels=5, window=30, eta=15),
    "uschad": Config(levels=6, window=100, eta=100),
}

_FIELDS = {f.name: f for f in dataclasses.fields(Config)}
_STR_FIELDS = ("init_threshold", "normalize")
_FLOAT_FIELDS = ("optimizer_weight_max",)


def _coerce(name: str, raw: str):
    if name == "eps":
        return None if raw.lower() in ("none", "adaptive") else float(raw)
    if name in _STR_FIELDS:
        return raw
    if name in _FLOAT_FIELDS:
        return float(raw)
    return int(raw)


def load_config(path, base: Config | None = None) -> Config:
    """Parse a key=value file, overriding fields of ``base``."""
    base = base if base is not None else Config()
    overrides = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, raw = stripped.partition("=")
        name = key.strip().replace(".", "_")
        raw = raw.strip()
        if name not in _FIELDS:
            raise ValueError(f"line {lineno}: unknown key {key.strip()!r}")
        try:
            overrides[name] = _coerce(name, raw)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad value for {key.strip()!r}: {exc}")
    return dataclasses.replace(base, **overrides)
