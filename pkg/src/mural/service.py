"""HTTP annotation service.

Sessions live in memory, one lock each; every event is appended to a
JSONL transcript under the data directory, so a restarted server can
rebuild its state by replaying those files.  The first transcript line
is a header naming the series file; the rest are session events.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .active import Query, Session, SessionComplete, UnknownQueryError, build_session, replay
from .config import Config
from .io import TimeSeries, load_csv

__all__ = ["create_app"]

CONTEXT_FACTOR = 3  # plot context extends this many half-windows past the query
MAX_UPLOAD_BYTES = 50 * 1024 * 1024


@dataclass(eq=False)
class _Record:
    session: Session
    series: TimeSeries
    series_path: str
    transcript_path: Path
    lock: threading.Lock = field(default_factory=threading.Lock)
    queries: dict[str, Query] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)
    written: int = 0

    def flush(self) -> None:
        events = self.session.transcript_lines()
        if len(events) > self.written:
            with self.transcript_path.open("a") as fh:
                for line in events[self.written:]:
                    fh.write(line + "\n")
            self.written = len(events)


def _status_payload(sid: str, rec: _Record) -> dict:
    session = rec.session
    detections = session.detections()
    return {
        "id": sid,
        "n": session.n,
        "d": rec.series.d,
        "budget": session.budget,
        "queries_used": session.queries_used,
        "threshold": session.params.threshold,
        "weights": [float(w) for w in session.params.weights],
        "detections": [int(i) for i in detections.indices],
    }


def _query_payload(rec: _Record, qid: str, query: Query) -> dict:
    session = rec.session
    lo = max(0, query.start - CONTEXT_FACTOR * session.p)
    hi = min(session.n - 1, query.end + CONTEXT_FACTOR * session.p)
    values = rec.series.values[:, lo : hi + 1]
    scores = session.score.prominent[lo : hi + 1]
    return {
        "id": qid,
        "kind": query.kind,
        "center": query.center,
        "start": query.start,
        "end": query.end,
        "context_start": int(lo),
        "values": [[float(v) for v in channel] for channel in values],
        "scores": [float(s) for s in scores],
        "threshold": session.params.threshold,
    }


def _issue_queries(rec: _Record) -> dict:
    """Return pending queries, issuing a new round if none are pending."""
    session = rec.session
    try:
        pending = session.next_queries()
    except SessionComplete as exc:
        rec.flush()
        return {"queries": [], "complete": True, "reason": str(exc)}
    fresh = set(pending) - {rec.queries[q] for q in rec.order}
    for query in pending:
        if query in fresh:
            qid = uuid.uuid4().hex
            rec.queries[qid] = query
            rec.order.append(qid)
    rec.flush()
    live = [qid for qid in rec.order if rec.queries[qid] in set(pending)]
    return {
        "queries": [_query_payload(rec, qid, rec.queries[qid]) for qid in live],
        "complete": False,
    }


def create_app(
    data_dir: str | Path,
    config: Config | None = None,
    max_upload_bytes: int = MAX_UPLOAD_BYTES,
) -> FastAPI:
    config = config or Config()
    root = Path(data_dir)
    root.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="mural annotation service")
    # the labeling UI may be served from another origin (or file://)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, _Record] = {}
    app.state.sessions = sessions
    app.state.config = config
    registry_lock = threading.Lock()

    def _restore() -> None:
        for path in sorted(root.glob("*.jsonl")):
            sid = path.stem
            lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
            if not lines:
                continue
            header = json.loads(lines[0])
            series_path = header["series"]
            try:
                series = load_csv(series_path)
            except (OSError, ValueError):
                continue
            cfg = Config(**header["config"])
            session = build_session(series, cfg)
            replay(session, [json.loads(ln) for ln in lines[1:]])
            rec = _Record(
                session=session,
                series=series,
                series_path=series_path,
                transcript_path=path,
                written=len(lines) - 1,
            )
            for query in session.pending:
                qid = uuid.uuid4().hex
                rec.queries[qid] = query
                rec.order.append(qid)
            sessions[sid] = rec

    _restore()

    def _get(sid: str) -> _Record:
        rec = sessions.get(sid)
        if rec is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return rec

    def _create(series: TimeSeries, series_path: str, overrides: dict) -> JSONResponse:
        cfg = config
        if overrides:
            import dataclasses

            cfg = dataclasses.replace(config, **overrides)
        sid = uuid.uuid4().hex
        try:
            session = build_session(series, cfg)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        rec = _Record(
            session=session,
            series=series,
            series_path=series_path,
            transcript_path=root / f"{sid}.jsonl",
        )
        header = {"series": series_path, "config": _config_dict(cfg)}
        with rec.transcript_path.open("w") as fh:
            fh.write(json.dumps(header, sort_keys=True) + "\n")
        rec.flush()
        with registry_lock:
            sessions[sid] = rec
        return JSONResponse(_status_payload(sid, rec), status_code=201)

    @app.post("/v1/sessions")
    async def create_session(request: Request, file: UploadFile | None = None):
        overrides: dict = {}
        if file is not None:
            blob = await file.read()
            if len(blob) > max_upload_bytes:
                raise HTTPException(status_code=413, detail="upload too large")
            sid_name = uuid.uuid4().hex
            dest = root / f"{sid_name}.csv"
            dest.write_bytes(blob)
            form = await request.form()
            overrides = _parse_overrides(
                {k: v for k, v in form.items() if isinstance(v, str)}
            )
            try:
                series = load_csv(dest)
            except ValueError as exc:
                dest.unlink(missing_ok=True)
                raise HTTPException(status_code=422, detail=str(exc))
            return _create(series, str(dest), overrides)
        try:
            body = await request.json()
        except Exception:
            raise HTTPException(status_code=422, detail="expected multipart file or JSON body")
        if "path" not in body:
            raise HTTPException(status_code=422, detail="missing 'path'")
        overrides = _parse_overrides({k: v for k, v in body.items() if k != "path"})
        try:
            series = load_csv(body["path"])
        except OSError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return _create(series, str(body["path"]), overrides)

    @app.get("/v1/sessions/{sid}")
    def get_session(sid: str):
        rec = _get(sid)
        with rec.lock:
            return _status_payload(sid, rec)

    @app.get("/v1/sessions/{sid}/queries")
    def get_queries(sid: str):
        rec = _get(sid)
        with rec.lock:
            return _issue_queries(rec)

    @app.post("/v1/sessions/{sid}/queries/{qid}/labels")
    async def post_labels(sid: str, qid: str, request: Request):
        rec = _get(sid)
        try:
            body = await request.json()
        except Exception:
            raise HTTPException(status_code=422, detail="expected JSON body")
        confirmed = body.get("confirmed", [])
        if not isinstance(confirmed, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in confirmed
        ):
            raise HTTPException(status_code=422, detail="'confirmed' must be a list of ints")
        with rec.lock:
            query = rec.queries.get(qid)
            if query is None or query not in set(rec.session.pending):
                raise HTTPException(status_code=409, detail="unknown or already answered query")
            before = len(rec.session.events)
            try:
                rec.session.submit_labels(query, confirmed)
            except UnknownQueryError:
                raise HTTPException(status_code=409, detail="unknown or already answered query")
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            rec.flush()
            optimized = any(
                e.get("event") == "optimize" for e in rec.session.events[before:]
            )
            payload = _status_payload(sid, rec)
            payload["optimized"] = optimized
            return payload

    @app.get("/v1/sessions/{sid}/detections")
    def get_detections(sid: str):
        rec = _get(sid)
        with rec.lock:
            detections = rec.session.detections()
            return {
                "indices": [int(i) for i in detections.indices],
                "threshold": rec.session.params.threshold,
                "scores": [float(s) for s in rec.session.score.prominent],
            }

    @app.delete("/v1/sessions/{sid}", status_code=204)
    def delete_session(sid: str):
        rec = _get(sid)
        with registry_lock:
            sessions.pop(sid, None)
        rec.transcript_path.unlink(missing_ok=True)
        return None

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "sessions": len(sessions)}

    return app


def _config_dict(cfg: Config) -> dict:
    import dataclasses

    return dataclasses.asdict(cfg)


def _parse_overrides(raw: dict) -> dict:
    """Session-creation overrides: a safe subset of config fields."""
    allowed = {
        "budget": int,
        "seed": int,
        "eta": int,
        "warmup": int,
        "cadence": int,
        "queries_per_round": int,
        "init_threshold": str,
    }
    out = {}
    for key, value in raw.items():
        if key not in allowed:
            raise HTTPException(status_code=422, detail=f"unknown field {key!r}")
        try:
            out[key] = allowed[key](value)
        except (TypeError, ValueError):
            raise HTTPException(status_code=422, detail=f"bad value for {key!r}")
    return out
