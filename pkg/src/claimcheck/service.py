"""HTTP service: submit checks, read traces, stream live step events (SSE).

Traces are stored one JSON file per trace plus an append-only JSONL index;
files are written temp-then-rename and fsync'd before a trace is reported
done, so finished traces survive restarts.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from importlib import resources
from pathlib import Path
from typing import Iterator, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from .core import QA_BACKEND_NAMES, Claim, ReasoningTrace, utc_now_rfc3339

MAX_CLAIM_CHARS = 2000


class CheckRequest(BaseModel):
    claim_text: str
    qa_backend: str = "reciter_reader"
    max_depth: Optional[int] = None


class TraceStore:
    """File-per-trace persistence with a JSONL listing index."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._index_path = self.root / "index.jsonl"
        self._lock = threading.Lock()
        # Fail at startup, not on first write.
        probe = self.root / f".probe-{secrets.token_hex(4)}"
        probe.write_text("ok", encoding="utf-8")
        probe.unlink()

    def new_trace_id(self) -> str:
        return secrets.token_hex(16)

    def add_index_row(self, trace_id: str, claim_text: str, status: str, started_at: str) -> None:
        row = {
            "trace_id": trace_id,
            "claim_text": claim_text,
            "status": status,
            "started_at": started_at,
        }
        with self._lock:
            with open(self._index_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def save(self, trace: ReasoningTrace) -> None:
        final = self.root / f"{trace.trace_id}.json"
        tmp = self.root / f".{trace.trace_id}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(trace.to_json())
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, final)

    def load(self, trace_id: str) -> Optional[ReasoningTrace]:
        path = self.root / f"{trace_id}.json"
        if not path.exists():
            return None
        return ReasoningTrace.from_json(path.read_text(encoding="utf-8"))

    def list_rows(self, limit: int = 50) -> list[dict]:
        if not self._index_path.exists():
            return []
        with open(self._index_path, encoding="utf-8") as fh:
            rows = [json.loads(line) for line in fh if line.strip()]
        rows.reverse()  # newest first
        return rows[:limit]


class _RunState:
    """Per-run event log shared between the worker and SSE readers."""

    def __init__(self) -> None:
        self.events: list[tuple[str, dict]] = []
        self.snapshot: Optional[ReasoningTrace] = None
        self.finished = False
        self.cond = threading.Condition()

    def publish(self, kind: str, payload: dict, snapshot: Optional[ReasoningTrace] = None) -> None:
        with self.cond:
            self.events.append((kind, payload))
            if snapshot is not None:
                self.snapshot = snapshot
            if kind in ("done", "error"):
                self.finished = True
            self.cond.notify_all()


def load_example_claims() -> list[dict]:
    data = resources.files("claimcheck.data").joinpath("example_claims.json")
    return json.loads(data.read_text(encoding="utf-8"))


def create_app(
    store_dir: str | Path,
    pipeline_factory,
    cors_origins: tuple[str, ...] = ("*",),
    static_dir: Optional[str | Path] = None,
) -> FastAPI:
    """Build the API app.

    `pipeline_factory(qa_backend_name, max_depth)` returns a configured
    pipeline; the factory owns backend wiring so tests can inject scripted
    ones.
    """
    store = TraceStore(store_dir)
    runs: dict[str, _RunState] = {}
    runs_lock = threading.Lock()

    app = FastAPI(title="claimcheck")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _run_state(trace_id: str) -> Optional[_RunState]:
        with runs_lock:
            return runs.get(trace_id)

    def _worker(trace_id: str, claim: Claim, qa_backend: str, max_depth: Optional[int]) -> None:
        state = _run_state(trace_id)
        pipeline = pipeline_factory(qa_backend, max_depth)
        partial_steps: list = []

        def on_event(kind: str, payload) -> None:
            if kind == "step":
                partial_steps.append(payload)
                state.publish("step", payload.to_dict())
            elif kind == "verdict":
                state.publish("verdict", payload.to_dict())
            elif kind == "error":
                pass  # surfaced via the final trace below

        trace = pipeline.run_check(claim, trace_id=trace_id, on_event=on_event)
        store.save(trace)
        if trace.status == "error":
            state.publish("error", {"detail": trace.error_detail}, snapshot=trace)
        else:
            state.publish("done", {"trace_id": trace_id}, snapshot=trace)

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/api/backends")
    def backends() -> list[str]:
        return list(QA_BACKEND_NAMES)

    @app.get("/api/examples")
    def examples() -> list[dict]:
        return load_example_claims()

    @app.post("/api/check", status_code=202)
    def submit_check(req: CheckRequest) -> dict:
        text = req.claim_text.strip()
        if not text or len(req.claim_text) > MAX_CLAIM_CHARS:
            raise HTTPException(status_code=400, detail="claim_text must be non-empty and <= 2000 chars")
        if req.qa_backend not in QA_BACKEND_NAMES:
            raise HTTPException(
                status_code=422,
                detail=f"unknown qa_backend {req.qa_backend!r}; valid: {', '.join(QA_BACKEND_NAMES)}",
            )
        trace_id = store.new_trace_id()
        claim = Claim(id=trace_id, text=text)
        state = _RunState()
        with runs_lock:
            runs[trace_id] = state
        store.add_index_row(trace_id, text, "running", utc_now_rfc3339())
        thread = threading.Thread(
            target=_worker, args=(trace_id, claim, req.qa_backend, req.max_depth), daemon=True
        )
        thread.start()
        return {"trace_id": trace_id}

    @app.get("/api/trace/{trace_id}")
    def get_trace(trace_id: str) -> JSONResponse:
        state = _run_state(trace_id)
        if state is not None and state.snapshot is not None:
            return JSONResponse(state.snapshot.to_dict())
        stored = store.load(trace_id)
        if stored is not None:
            return JSONResponse(stored.to_dict())
        if state is not None:
            # Submitted but still running: minimal running snapshot.
            with state.cond:
                steps = [p for k, p in state.events if k == "step"]
            return JSONResponse({"trace_id": trace_id, "status": "running", "steps": steps, "verdict": None})
        raise HTTPException(status_code=404, detail="unknown trace id")

    @app.get("/api/traces")
    def list_traces(limit: int = 50) -> list[dict]:
        return store.list_rows(limit=limit)

    @app.get("/api/trace/{trace_id}/events")
    def stream_events(trace_id: str) -> StreamingResponse:
        state = _run_state(trace_id)
        if state is None:
            # Finished in a previous process: replay from the stored trace.
            stored = store.load(trace_id)
            if stored is None:
                raise HTTPException(status_code=404, detail="unknown trace id")
            state = _RunState()
            for step in stored.steps:
                state.events.append(("step", step.to_dict()))
            if stored.verdict is not None:
                state.events.append(("verdict", stored.verdict.to_dict()))
            if stored.status == "error":
                state.events.append(("error", {"detail": stored.error_detail}))
            else:
                state.events.append(("done", {"trace_id": trace_id}))
            state.finished = True

        def event_stream() -> Iterator[str]:
            # Replay-then-follow: emit everything so far, then wait for more.
            cursor = 0
            while True:
                with state.cond:
                    while cursor >= len(state.events) and not state.finished:
                        state.cond.wait(timeout=30)
                    batch = state.events[cursor:]
                    cursor = len(state.events)
                    finished = state.finished
                for kind, payload in batch:
                    yield f"event: {kind}\ndata: {json.dumps(payload, ensure_ascii=False)}\n\n"
                if finished and cursor >= len(state.events):
                    return

        return StreamingResponse(event_stream(), media_type="text/event-stream")

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
