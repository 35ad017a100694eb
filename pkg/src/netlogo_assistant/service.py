"""HTTP + WebSocket front of the assistant.

Message and debug exchanges run in worker threads and stream their
events through the session; clients follow along over the WebSocket or
by polling /events?after=N. One exchange at a time per session: a
second POST while one is in flight gets 409.
"""

from __future__ import annotations

import asyncio
import logging
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .clarify import Clarifier, load_table
from .config import ServiceConfig
from .corpus import ingest
from .dictionary import load_dictionary
from .gateway import (
    Backend,
    BackendUnavailable,
    CompletionRequest,
    Gateway,
    HttpBackend,
    ScriptedBackend,
    load_scenario,
)
from .linting import Linter
from .orchestrator import DEBUG_MODES, ChunkNotFound, Engine, SessionNotFound
from .search import build_index, search
from .session import Clock, Session
from .storage import SessionStore, StorageError

logger = logging.getLogger(__name__)


class NullBackend:
    """Stands in when no model backend is configured."""

    def complete(self, request: CompletionRequest) -> str:
        raise BackendUnavailable("no model backend configured")


def build_engine(config: ServiceConfig, clock: Clock | None = None) -> Engine:
    corpus = ingest(config.corpus_path)
    index = build_index(corpus)
    dictionary = load_dictionary(corpus)
    clarifier = Clarifier(load_table(config.clarification_table_path), dictionary)
    linter = Linter(dictionary, clarifier)

    from .templates import load_template_set

    templates = load_template_set(config.template_dir)

    backends: dict[str, Backend] = {}
    for backend_id, bc in config.backends.items():
        if bc.type == "scripted":
            backends[backend_id] = ScriptedBackend(load_scenario(bc.scenario_path))
        else:
            backends[backend_id] = HttpBackend(
                bc.base_url, bc.model, bc.api_key_env, bc.timeout_s
            )
    routing = dict(config.routing)
    if not backends:
        backends["null"] = NullBackend()
        routing = {"default": "null"}
    gateway = Gateway(backends, routing)
    return Engine(
        gateway=gateway,
        index=index,
        linter=linter,
        templates=templates,
        clock=clock,
        max_iterations=config.max_iterations,
        search_k=config.search_k,
    )


class ServiceState:
    def __init__(self, config: ServiceConfig, engine: Engine, store: SessionStore):
        self.config = config
        self.engine = engine
        self.store = store
        self.sessions: dict[str, Session] = {}
        self.in_flight: set[str] = set()
        self._lock = threading.Lock()

    def get_session(self, session_id: str) -> Session | None:
        with self._lock:
            session = self.sessions.get(session_id)
        if session is not None:
            return session
        session = self.store.load(session_id)
        if session is not None:
            with self._lock:
                self.sessions.setdefault(session_id, session)
                session = self.sessions[session_id]
        return session

    def require_session(self, session_id: str) -> Session:
        session = self.get_session(session_id)
        if session is None:
            raise SessionNotFound(session_id)
        return session

    def try_begin(self, session_id: str) -> bool:
        with self._lock:
            if session_id in self.in_flight:
                return False
            self.in_flight.add(session_id)
            return True

    def finish(self, session_id: str) -> None:
        with self._lock:
            self.in_flight.discard(session_id)


class MessageIn(BaseModel):
    text: str = Field(min_length=1)


class LintIn(BaseModel):
    code: str


class DebugIn(BaseModel):
    mode: str
    ideas: str | None = None


class ChunkIn(BaseModel):
    source: str


def create_app(config: ServiceConfig, engine: Engine | None = None) -> FastAPI:
    engine = engine or build_engine(config)
    store = SessionStore(config.data_dir)
    state = ServiceState(config, engine, store)
    app = FastAPI(title="netlogo-assistant")
    app.state.service = state

    def _session_or_404(session_id: str) -> Session:
        try:
            return state.require_session(session_id)
        except SessionNotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    def _run_exchange(session: Session, iterator) -> None:
        # Worker thread: drain the event generator; events become visible
        # to readers as they are appended to the session.
        try:
            for _ in iterator:
                pass
        except Exception:
            logger.exception("exchange failed for session %s", session.session_id)
        finally:
            try:
                state.store.save(session)
            except StorageError:
                logger.exception("cannot persist session %s", session.session_id)
            state.finish(session.session_id)

    @app.post("/api/sessions", status_code=201)
    def create_session():
        session = Session.create(str(uuid.uuid4()), engine.clock)
        try:
            state.store.save(session)
        except StorageError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        with state._lock:
            state.sessions[session.session_id] = session
        return {"session_id": session.session_id}

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_or_404(session_id).to_dict()

    @app.post("/api/sessions/{session_id}/messages", status_code=202)
    async def post_message(session_id: str, body: MessageIn):
        session = _session_or_404(session_id)
        if not state.try_begin(session_id):
            raise HTTPException(status_code=409, detail="exchange already in flight")
        iterator = engine.handle_user_message(session, body.text)
        loop = asyncio.get_running_loop()
        loop.run_in_executor(None, _run_exchange, session, iterator)
        return {"accepted": True, "after": session.last_seq}

    @app.get("/api/sessions/{session_id}/events")
    def get_events(session_id: str, after: int = Query(default=0, ge=0)):
        session = _session_or_404(session_id)
        return {
            "events": [e.to_frame() for e in session.events_after(after)],
            "exchange_in_flight": session_id in state.in_flight,
        }

    @app.post("/api/lint")
    def lint_endpoint(body: LintIn):
        diagnostics = engine.linter.check_source(body.code)
        return {"diagnostics": [d.to_dict() for d in diagnostics]}

    @app.get("/api/docs/search")
    def search_endpoint(q: str, k: int = Query(default=3, ge=1, le=50)):
        hits = search(engine.index, q, k)
        results = []
        for hit in hits:
            entry = engine.index.entry(hit.doc_id)
            results.append(
                {
                    "doc_id": hit.doc_id,
                    "name": entry.name,
                    "url": entry.url,
                    "score": hit.score,
                    "snippet": hit.snippet,
                }
            )
        return {"query": q, "hits": results}

    @app.post("/api/sessions/{session_id}/chunks/{chunk_id}/debug", status_code=202)
    async def debug_endpoint(session_id: str, chunk_id: str, body: DebugIn):
        session = _session_or_404(session_id)
        if body.mode not in DEBUG_MODES:
            raise HTTPException(status_code=400, detail=f"mode must be one of {DEBUG_MODES}")
        if chunk_id not in session.code_chunks:
            raise HTTPException(status_code=404, detail="unknown chunk")
        if not state.try_begin(session_id):
            raise HTTPException(status_code=409, detail="exchange already in flight")
        try:
            iterator = engine.debug_action(session, chunk_id, body.mode, body.ideas)
        except ChunkNotFound as exc:
            state.finish(session_id)
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        loop = asyncio.get_running_loop()
        loop.run_in_executor(None, _run_exchange, session, iterator)
        return {"accepted": True, "after": session.last_seq}

    @app.put("/api/sessions/{session_id}/chunks/{chunk_id}")
    def update_chunk_endpoint(session_id: str, chunk_id: str, body: ChunkIn):
        session = _session_or_404(session_id)
        try:
            diagnostics = engine.update_chunk(session, chunk_id, body.source)
        except ChunkNotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        try:
            state.store.save(session)
        except StorageError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        chunk = session.code_chunks[chunk_id]
        return {
            "chunk_id": chunk_id,
            "revision": chunk.revision,
            "diagnostics": [d.to_dict() for d in diagnostics],
        }

    @app.post("/api/sessions/{session_id}/chunks/{chunk_id}/run")
    def run_chunk_endpoint(session_id: str, chunk_id: str):
        # Execution belongs to an external runtime; this hook forwards the
        # chunk there when one is configured and otherwise says so.
        session = _session_or_404(session_id)
        chunk = session.code_chunks.get(chunk_id)
        if chunk is None:
            raise HTTPException(status_code=404, detail="unknown chunk")
        if not config.runtime_url:
            return {
                "status": "not-configured",
                "detail": "no model runtime configured; static checking is available via lint",
            }
        import httpx

        try:
            response = httpx.post(
                config.runtime_url, json={"code": chunk.source_text}, timeout=10.0
            )
        except httpx.HTTPError as exc:
            return JSONResponse(
                status_code=502,
                content={"status": "error", "detail": f"runtime unreachable: {type(exc).__name__}"},
            )
        return {"status": "forwarded", "runtime_status": response.status_code}

    @app.websocket("/api/sessions/{session_id}/stream")
    async def stream_events(websocket: WebSocket, session_id: str, after: int = 0):
        session = state.get_session(session_id)
        await websocket.accept()
        if session is None:
            await websocket.close(code=4404)
            return
        cursor = after
        try:
            while True:
                for event in session.events_after(cursor):
                    await websocket.send_json(event.to_frame())
                    cursor = event.seq
                # Cheap readiness poll; desk-scale latency budget.
                await asyncio.sleep(0.025)
        except WebSocketDisconnect:
            pass

    @app.exception_handler(StorageError)
    async def storage_error_handler(request, exc):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    if config.static_ui_dir is not None:
        app.mount("/", StaticFiles(directory=Path(config.static_ui_dir), html=True), name="ui")

    return app
