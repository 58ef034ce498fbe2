"""HTTP service exposing the assessment pipeline for interactive use.

Sessions are in-memory: each uploaded chart gets an id and a monotonically
increasing revision. Reports are cached per revision and recomputed when
edits or scope changes invalidate them. Every response states the revision
it was computed against; edits must name the revision they were based on and
conflict (409) when it is stale.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import report as report_mod
from .advisor import Suggestion, apply_suggestion, generate_suggestions
from .chart.edit import apply_edit
from .chart.parse import parse_chart
from .chart.types import ChartDocument
from .effects import extract_features
from .errors import (
    EmptyScope,
    NotFound,
    PsightError,
    StaleSuggestion,
    UnknownElementId,
)
from .model import PerceptionModel

_HTTP_STATUS = {
    "bad_request": 400,
    "not_found": 404,
    "conflict": 409,
    "unprocessable": 422,
    "internal": 500,
}


@dataclass
class Session:
    chart_id: str
    document: ChartDocument
    revision: int = 0
    excluded: list[str] = field(default_factory=list)
    selection: list[str] = field(default_factory=list)
    report_cache: dict[int, bytes] = field(default_factory=dict)
    suggestion_cache: dict[int, list[Suggestion]] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


class ChartUpload(BaseModel):
    svg: str


class ScopeUpdate(BaseModel):
    excluded: list[str] = []


class SelectionRequest(BaseModel):
    elements: list[str]


class EditRequest(BaseModel):
    base_revision: int
    edit_command: dict | None = None
    suggestion_id: int | None = None
    svg: str | None = None  # full-text replacement from the editor panel


def create_app(model: PerceptionModel, static_dir: str | None = None,
               session_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="psight", docs_url=None, redoc_url=None)
    sessions: dict[str, Session] = {}

    def get_session(chart_id: str) -> Session:
        if chart_id not in sessions:
            raise NotFound(f"unknown chart {chart_id!r}")
        return sessions[chart_id]

    def persist(session: Session, payload: bytes | None = None) -> None:
        if session_dir is None:
            return
        root = Path(session_dir) / session.chart_id
        root.mkdir(parents=True, exist_ok=True)
        (root / f"rev{session.revision}.svg").write_text(session.document.source_text)
        if payload is not None:
            (root / f"rev{session.revision}.report.json").write_bytes(payload)

    def report_bytes(session: Session) -> bytes:
        if session.revision not in session.report_cache:
            payload = report_mod.serialize_json(report_mod.assess(
                model, session.document, session.excluded, session.revision))
            session.report_cache = {session.revision: payload}
            persist(session, payload)
        return session.report_cache[session.revision]

    @app.exception_handler(PsightError)
    async def psight_error_handler(_request: Request, exc: PsightError):
        return JSONResponse(
            status_code=_HTTP_STATUS.get(exc.api_code, 500),
            content={"code": exc.api_code, "message": str(exc),
                     "detail": type(exc).__name__})

    @app.post("/api/charts")
    def upload_chart(body: ChartUpload) -> JSONResponse:
        document = parse_chart(body.svg)
        chart_id = uuid.uuid4().hex[:12]
        session = Session(chart_id=chart_id, document=document)
        sessions[chart_id] = session
        persist(session)
        return JSONResponse({
            "chart_id": chart_id,
            "revision": session.revision,
            "canvas": {"width": document.canvas_width,
                       "height": document.canvas_height},
            "elements": [_element_to_dict(e) for e in document.elements],
            "warnings": list(document.warnings),
        })

    @app.get("/api/charts/{chart_id}/patterns")
    def get_patterns(chart_id: str) -> Response:
        session = get_session(chart_id)
        with session.lock:
            return Response(content=report_bytes(session),
                            media_type="application/json")

    @app.put("/api/charts/{chart_id}/scope")
    def put_scope(chart_id: str, body: ScopeUpdate) -> Response:
        session = get_session(chart_id)
        with session.lock:
            report_mod.scope_elements(session.document, body.excluded)
            session.excluded = list(body.excluded)
            session.report_cache.clear()
            return Response(content=report_bytes(session),
                            media_type="application/json")

    @app.post("/api/charts/{chart_id}/selection")
    def post_selection(chart_id: str, body: SelectionRequest) -> Response:
        session = get_session(chart_id)
        with session.lock:
            if not body.elements:
                raise EmptyScope("selection is empty")
            scope = report_mod.scope_elements(session.document, session.excluded)
            for eid in body.elements:
                if not session.document.has_element(eid):
                    raise UnknownElementId(f"no element with id {eid!r}")
            session.selection = list(body.elements)
            features = extract_features(session.document, scope)
            payload = report_mod.selection_to_dict(
                model, features, session.selection, session.revision)
            return Response(content=report_mod.serialize_json(payload),
                            media_type="application/json")

    @app.get("/api/charts/{chart_id}/effects")
    def get_effects(chart_id: str) -> Response:
        session = get_session(chart_id)
        with session.lock:
            scope = report_mod.scope_elements(session.document, session.excluded)
            features = extract_features(session.document, scope)
            payload = {"revision": session.revision}
            payload.update(report_mod.effect_histograms(
                features, session.selection or None))
            return Response(content=report_mod.serialize_json(payload),
                            media_type="application/json")

    @app.post("/api/charts/{chart_id}/suggestions")
    def post_suggestions(chart_id: str, body: SelectionRequest) -> Response:
        session = get_session(chart_id)
        with session.lock:
            scope = report_mod.scope_elements(session.document, session.excluded)
            features = extract_features(session.document, scope)
            suggestions = generate_suggestions(
                model, session.document, features, frozenset(body.elements))
            session.suggestion_cache = {session.revision: suggestions}
            payload = report_mod.suggestions_to_dict(suggestions, session.revision)
            return Response(content=report_mod.serialize_json(payload),
                            media_type="application/json")

    @app.post("/api/charts/{chart_id}/edits")
    def post_edit(chart_id: str, body: EditRequest) -> Response:
        session = get_session(chart_id)
        with session.lock:
            if body.base_revision != session.revision:
                raise StaleSuggestion(
                    f"base_revision {body.base_revision} is stale; "
                    f"current revision is {session.revision}")
            if body.suggestion_id is not None:
                cached = session.suggestion_cache.get(session.revision, [])
                if not 0 <= body.suggestion_id < len(cached):
                    raise NotFound(f"no suggestion {body.suggestion_id} "
                                   f"at revision {session.revision}")
                new_doc = apply_suggestion(session.document,
                                           cached[body.suggestion_id])
            elif body.edit_command is not None:
                command = report_mod.edit_command_from_dict(body.edit_command)
                new_doc = apply_edit(session.document, [command])
            elif body.svg is not None:
                new_doc = parse_chart(body.svg)
            else:
                raise EmptyScope("edit request carries no command")
            session.document = new_doc
            session.revision += 1
            session.report_cache.clear()
            session.suggestion_cache.clear()
            session.selection = [eid for eid in session.selection
                                 if new_doc.has_element(eid)]
            session.excluded = [eid for eid in session.excluded
                                if new_doc.has_element(eid)]
            persist(session)
            payload = {"new_revision": session.revision,
                       "svg": new_doc.source_text,
                       "invalidated": True}
            return Response(content=report_mod.serialize_json(payload),
                            media_type="application/json")

    @app.get("/api/charts/{chart_id}/svg")
    def get_svg(chart_id: str) -> PlainTextResponse:
        session = get_session(chart_id)
        return PlainTextResponse(session.document.source_text,
                                 media_type="image/svg+xml",
                                 headers={"X-Revision": str(session.revision)})

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="static")
    return app


def _element_to_dict(element) -> dict:
    def paint(p):
        return None if p is None else [p[0], p[1], p[2], p[3]]

    return {
        "id": element.id,
        "kind": element.kind,
        "closed": element.closed,
        "bbox": {"left": element.bbox.left, "right": element.bbox.right,
                 "top": element.bbox.top, "bottom": element.bbox.bottom},
        "style": {
            "fill": paint(element.style.fill),
            "stroke": paint(element.style.stroke),
            "stroke_width": element.style.stroke_width,
            "opacity": element.style.opacity,
        },
    }
