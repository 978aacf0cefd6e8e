"""HTTP facade over the workflow engine and analyses.

Sessions are stored as the same ``.aic.json`` documents the CLI uses, one
file per session id. Per-session mutations are serialized by an in-process
lock; callers coordinate across writers with ``expected_version`` — a
mismatch yields 409 with the current version and nothing is applied.
"""

from __future__ import annotations

import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import engine, factors, persistence, steps
from .errors import NotFoundError, VersionConflictError, WorkbenchError
from .validation import validate_session

# Engine error code -> HTTP status. Anything not listed is a rule
# violation on a well-formed request: 422.
STATUS_FOR_CODE = {
    "NOT_FOUND": 404,
    "VERSION_CONFLICT": 409,
    "PARSE": 400,
    "FORMAT_VERSION": 400,
}
DEFAULT_ERROR_STATUS = 422


class SessionStore:
    """Directory of session documents with per-session write locks."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _path(self, session_id: str) -> Path:
        if not session_id.isalnum():
            raise NotFoundError(f"no session with id {session_id!r}")
        return self.directory / f"{session_id}{persistence.DOCUMENT_EXTENSION}"

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def load(self, session_id: str) -> engine.Session:
        path = self._path(session_id)
        if not path.exists():
            raise NotFoundError(f"no session with id {session_id!r}")
        return persistence.load_session_from_path(path)

    def save(self, session: engine.Session) -> None:
        persistence.save_session_to_path(session, self._path(session.id))

    def create(self, name: str, red_flag_threshold: int) -> engine.Session:
        session = engine.create_session(
            name,
            red_flag_threshold=red_flag_threshold,
            session_id=uuid.uuid4().hex,
        )
        self.save(session)
        return session


class CreateSessionBody(BaseModel):
    name: str
    red_flag_threshold: int = factors.DEFAULT_RED_FLAG_THRESHOLD


class SubmitAssertionBody(BaseModel):
    text: str
    referenced_entities: list[str] = []
    expected_version: int | None = None


class MutateBody(BaseModel):
    expected_version: int | None = None


class ReviseBody(BaseModel):
    text: str
    rationale: str
    referenced_entities: list[str] | None = None
    expected_version: int | None = None


def _document(session: engine.Session) -> dict:
    return {"format_version": persistence.FORMAT_VERSION, "session": session.to_dict()}


def create_app(storage_dir: str | Path, cors_origins: list[str] | None = None) -> FastAPI:
    store = SessionStore(storage_dir)
    app = FastAPI(title="AIC articulation workbench")
    app.state.store = store
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins if cors_origins is not None else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(WorkbenchError)
    async def workbench_error(request: Request, exc: WorkbenchError):
        body = {"code": exc.code, "message": exc.message}
        if isinstance(exc, VersionConflictError):
            body["expected_version"] = exc.expected
            body["current_version"] = exc.current
        status = STATUS_FOR_CODE.get(exc.code, DEFAULT_ERROR_STATUS)
        return JSONResponse(status_code=status, content=body)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "MALFORMED", "message": str(exc.errors())},
        )

    @app.get("/steps")
    def get_steps():
        return {"steps": [vars(step) for step in steps.list_steps()]}

    @app.post("/sessions", status_code=201)
    def post_session(body: CreateSessionBody):
        session = store.create(body.name, body.red_flag_threshold)
        return _document(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _document(store.load(session_id))

    def _mutate(session_id: str, apply):
        with store.lock(session_id):
            session = store.load(session_id)
            result = apply(session)
            store.save(session)
            return session, result

    @app.post("/sessions/{session_id}/steps/{step_index}/assertions", status_code=201)
    def post_assertion(session_id: str, step_index: int, body: SubmitAssertionBody):
        session, assertion = _mutate(
            session_id,
            lambda s: engine.submit_assertion(
                s,
                step_index,
                body.text,
                referenced_entities=body.referenced_entities,
                expected_version=body.expected_version,
            ),
        )
        return {"assertion": assertion.to_dict(), "version": session.version}

    @app.post("/sessions/{session_id}/steps/{step_index}/complete")
    def post_complete(session_id: str, step_index: int, body: MutateBody):
        session, status = _mutate(
            session_id,
            lambda s: engine.complete_step(
                s, step_index, expected_version=body.expected_version
            ),
        )
        return {
            "step": {"index": step_index, "status": status},
            "version": session.version,
        }

    @app.post("/sessions/{session_id}/steps/{step_index}/reconfirm")
    def post_reconfirm(session_id: str, step_index: int, body: MutateBody):
        session, status = _mutate(
            session_id,
            lambda s: engine.reconfirm_step(
                s, step_index, expected_version=body.expected_version
            ),
        )
        return {
            "step": {"index": step_index, "status": status},
            "version": session.version,
        }

    @app.post("/sessions/{session_id}/assertions/{assertion_id}/revise")
    def post_revise(session_id: str, assertion_id: str, body: ReviseBody):
        def apply(session: engine.Session):
            old = session.find_assertion(assertion_id)
            return engine.revise_step(
                session,
                old.step_index,
                assertion_id,
                body.text,
                body.rationale,
                referenced_entities=body.referenced_entities,
                expected_version=body.expected_version,
            )

        session, assertion = _mutate(session_id, apply)
        return {"assertion": assertion.to_dict(), "version": session.version}

    @app.get("/sessions/{session_id}/validation")
    def get_validation(session_id: str):
        session = store.load(session_id)
        return {
            "findings": [f.to_dict() for f in validate_session(session)],
            "version": session.version,
        }

    @app.get("/sessions/{session_id}/factors")
    def get_factors(session_id: str, threshold: int | None = None):
        session = store.load(session_id)
        return factors.compute_factor_report(session, threshold).to_dict()

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str):
        session = store.load(session_id)
        return PlainTextResponse(
            persistence.render_report(session), media_type="text/markdown"
        )

    @app.get("/sessions/{session_id}/graph")
    def get_graph(session_id: str):
        session = store.load(session_id)
        return persistence.export_graph(session)

    return app
