"""Threshold-proximity annotation sessions with budgeted re-optimization.

Each round queries the most ambiguous uncovered samples: the scores
closest to the detection threshold from above and from below.  An
annotator inspects the window around each query center and confirms
the change points inside it; covered windows leave the query pool, and
after a warm-up the hyperparameters are re-fit to the accumulated
annotations on a fixed cadence.  Every state change is recorded as a
JSON-ready event, so a session can be replayed bit for bit from its
transcript.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .annotations import AnnotatedWindow, AnnotationSet
from .config import Config
from .detect import Detections, Hyperparams, ScoreVector, detect
from .discrepancy import FeatureMatrix
from .io import LabelSet, TimeSeries
from .metrics import match
from .optimize import ObjectiveValue, SearchSpace, optimize
from .pipeline import initial_params, prepare

__all__ = [
    "SessionComplete",
    "UnknownQueryError",
    "ReplayError",
    "Query",
    "Session",
    "SimulationResult",
    "build_session",
    "run_simulated",
    "replay",
]


class SessionComplete(Exception):
    """No further queries can be issued: budget spent or pool empty."""


class UnknownQueryError(ValueError):
    """The submitted query was not issued by this session or was answered."""


class ReplayError(ValueError):
    """A transcript does not reproduce on the session it was fed to."""


@dataclass(frozen=True)
class Query:
    """One annotation request: inspect [start, end] around the center."""

    kind: str
    center: int
    start: int
    end: int

    def __post_init__(self):
        if self.kind not in ("above", "below"):
            raise ValueError(f"kind must be 'above' or 'below', got {self.kind!r}")
        if not self.start <= self.center <= self.end:
            raise ValueError(
                f"center {self.center} outside window [{self.start}, {self.end}]"
            )


@dataclass(eq=False)
class Session:
    """Mutable state of one annotation session over a fixed feature matrix.

    The query half-width equals the evaluation tolerance ``eta``; both
    describe how far an annotated change point may sit from the sample
    that triggered the question.
    """

    features: FeatureMatrix
    params: Hyperparams
    score: ScoreVector
    annotations: AnnotationSet = field(default_factory=AnnotationSet)
    budget: int = 30
    eta: int = 20
    warmup: int = 10
    cadence: int = 2
    queries_per_round: int = 2
    seed: int = 0
    space: SearchSpace = SearchSpace()
    queries_used: int = 0
    pending: tuple = ()
    events: list = field(default_factory=list)

    @property
    def p(self) -> int:
        """Query window half-width."""
        return self.eta

    @property
    def n(self) -> int:
        return self.features.n

    def detections(self) -> Detections:
        _, found = detect(self.features, self.params)
        return found

    def transcript_lines(self) -> list:
        return [json.dumps(e, sort_keys=True) for e in self.events]

    def _window(self, center: int, covered: np.ndarray) -> tuple:
        # maximal contiguous uncovered run containing the center,
        # intersected with [center - p, center + p] and the array bounds
        lo = center
        while lo > 0 and not covered[lo - 1]:
            lo -= 1
        hi = center
        while hi < self.n - 1 and not covered[hi + 1]:
            hi += 1
        return max(lo, center - self.p), min(hi, center + self.p)

    def next_queries(self) -> list:
        """Issue the next round of queries, or return the unanswered ones.

        Raises SessionComplete when the budget is spent or no uncovered
        sample remains.
        """
        if self.pending:
            return list(self.pending)
        remaining = self.budget - self.queries_used
        if remaining <= 0:
            raise SessionComplete("query budget exhausted")
        covered = self.annotations.covered_mask(self.n)
        uncovered = np.flatnonzero(~covered)
        if uncovered.size == 0:
            raise SessionComplete("every sample is already covered")
        s = self.score.prominent
        zeta = self.params.threshold
        centers = []
        if min(self.queries_per_round, remaining) == 1:
            # single-query rounds take the most ambiguous sample overall
            c = int(uncovered[np.argmin(np.abs(s[uncovered] - zeta))])
            centers.append((c, "above" if s[c] >= zeta else "below"))
        else:
            above = uncovered[s[uncovered] >= zeta]
            below = uncovered[s[uncovered] < zeta]
            if above.size:
                centers.append((int(above[np.argmin(s[above] - zeta)]), "above"))
            if below.size:
                centers.append((int(below[np.argmin(zeta - s[below])]), "below"))
        queries = []
        for center, kind in centers:
            if covered[center]:
                # swallowed by the window issued just before it; skip
                # without charging the budget
                continue
            start, end = self._window(center, covered)
            queries.append(Query(kind=kind, center=center, start=start, end=end))
            covered[start : end + 1] = True
            self.events.append(
                {
                    "event": "query",
                    "center": center,
                    "kind": kind,
                    "window": [start, end],
                }
            )
        self.pending = tuple(queries)
        return list(queries)

    def submit_labels(self, query: Query, confirmed) -> "Session":
        """Record the annotator's verdict for one pending query."""
        if query not in self.pending:
            raise UnknownQueryError(f"query at {query.center} is not pending")
        if self.queries_used >= self.budget:
            raise SessionComplete("query budget exhausted")
        confirmed = tuple(sorted({int(i) for i in confirmed}))
        for i in confirmed:
            if not query.start <= i <= query.end:
                raise ValueError(
                    f"label {i} outside window [{query.start}, {query.end}]"
                )
        self.annotations = self.annotations.add(
            AnnotatedWindow(start=query.start, end=query.end, positives=confirmed)
        )
        self.pending = tuple(q for q in self.pending if q != query)
        self.queries_used += 1
        self.events.append(
            {
                "event": "labels",
                "center": query.center,
                "confirmed": list(confirmed),
                "queries_used": self.queries_used,
            }
        )
        if (
            self.queries_used >= self.warmup
            and (self.queries_used - self.warmup) % self.cadence == 0
        ):
            self._optimize()
        return self

    def _optimize(self):
        # one deterministic sub-seed per optimization round
        seed = int(
            np.random.SeedSequence([self.seed, self.queries_used]).generate_state(1)[0]
        )
        result = optimize(
            self.features,
            self.params,
            self.annotations,
            self.eta,
            space=self.space,
            seed=seed,
        )
        self.params = result.params
        self.score, _ = detect(self.features, self.params)
        self.events.append(
            {
                "event": "optimize",
                "queries_used": self.queries_used,
                "seed": seed,
                "weights": [float(w) for w in self.params.weights],
                "threshold": float(self.params.threshold),
                "f1": result.objective.f1,
                "precision": result.objective.precision,
                "recall": result.objective.recall,
            }
        )


def build_session(x: TimeSeries, config: Config) -> Session:
    """Prepare features, initialize hyperparameters, and open a session."""
    features = prepare(x, config)
    params = initial_params(features, config)
    score, _ = detect(features, params)
    session = Session(
        features=features,
        params=params,
        score=score,
        budget=config.budget,
        eta=config.eta,
        warmup=config.warmup,
        cadence=config.cadence,
        queries_per_round=config.queries_per_round,
        seed=config.seed,
        space=SearchSpace(
            weight_max=config.optimizer_weight_max,
            grid_size=config.optimizer_grid_size,
            evaluations=config.optimizer_evaluations,
        ),
    )
    session.events.append(
        {
            "event": "start",
            "n": x.n,
            "d": x.d,
            "levels": config.levels,
            "window": config.window,
            "eta": config.eta,
            "budget": config.budget,
            "warmup": config.warmup,
            "cadence": config.cadence,
            "queries_per_round": config.queries_per_round,
            "seed": config.seed,
            "init_threshold": config.init_threshold,
            "weights": [float(w) for w in params.weights],
            "threshold": float(params.threshold),
        }
    )
    return session


@dataclass(frozen=True)
class SimulationResult:
    """Learning curve of a simulated session; curve[0] is unsupervised."""

    curve: tuple
    session: Session


def _objective_against(session: Session, truth: LabelSet) -> ObjectiveValue:
    report = match(session.detections().indices, truth.change_points, session.eta)
    return ObjectiveValue(
        f1=report.f1, precision=report.precision, recall=report.recall
    )


def run_simulated(
    x: TimeSeries, truth: LabelSet, config: Config
) -> SimulationResult:
    """Drive a full session with an oracle annotator.

    The oracle confirms exactly the true change points inside each
    query window.  After every answered query the current detections
    are scored against the full truth, giving a curve of budget + 1
    points when the query pool never runs dry.
    """
    session = build_session(x, config)
    curve = [_objective_against(session, truth)]
    while session.queries_used < session.budget:
        try:
            queries = session.next_queries()
        except SessionComplete:
            break
        for q in queries:
            confirmed = [t for t in truth.change_points if q.start <= t <= q.end]
            session.submit_labels(q, confirmed)
            curve.append(_objective_against(session, truth))
    return SimulationResult(curve=tuple(curve), session=session)


def replay(session: Session, events: list) -> Session:
    """Re-run a transcript on a freshly built session.

    Only the annotator's decisions are taken from the transcript; the
    queries and optimizations are regenerated, and the rebuilt event
    log must equal the transcript exactly.
    """
    if session.queries_used or session.pending:
        raise ReplayError("replay needs a fresh session")
    for ev in events:
        if ev.get("event") != "labels":
            continue
        if not session.pending:
            try:
                session.next_queries()
            except SessionComplete:
                raise ReplayError("transcript has more labels than the session allows")
        target = next(
            (q for q in session.pending if q.center == ev["center"]), None
        )
        if target is None:
            raise ReplayError(f"no pending query at center {ev['center']}")
        session.submit_labels(target, ev["confirmed"])
    # an issued-but-unanswered round may trail the last labels event
    while (
        len(session.events) < len(events)
        and events[len(session.events)].get("event") == "query"
    ):
        before = len(session.events)
        try:
            session.next_queries()
        except SessionComplete:
            break
        if len(session.events) == before:
            break
    if session.events != list(events):
        for i, (got, want) in enumerate(zip(session.events, events)):
            if got != want:
                raise ReplayError(f"transcript diverges at event {i}: {want} != {got}")
        raise ReplayError(
            f"transcript length mismatch: {len(events)} logged, "
            f"{len(session.events)} regenerated"
        )
    return session
