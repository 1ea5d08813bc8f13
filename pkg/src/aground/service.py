"""HTTP JSON service for incident sessions.

All endpoints return structured errors: {"error": {"code", "reason"}} for
domain failures and {"error": {"code": "ValidationError", "fields": [...]}}
for malformed bodies.
"""

from __future__ import annotations

import contextlib
import json
import logging
import socket
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import session as sess
from .assemble import observable_nodes
from .errors import (
    AgroundError,
    DataDirUnwritable,
    ImpossibleEvidence,
    OutOfRangeValue,
    PortInUse,
    UnknownEvidenceId,
    UnknownNode,
)
from .ship import incident_from_json, model_from_json, ship_from_json

log = logging.getLogger(__name__)


class EvidenceBody(BaseModel):
    node: str
    value: float | str
    timestamp: str = ""
    source: str = ""


class WhatIfBody(BaseModel):
    overlay: list[EvidenceBody] = Field(default_factory=list)


class CreateBody(BaseModel):
    ship: dict
    incident: dict
    model: dict | None = None
    id: str | None = None


_STATUS = {
    UnknownNode: 404,
    UnknownEvidenceId: 404,
    OutOfRangeValue: 422,
    ImpossibleEvidence: 409,
}


def _node_catalog(session: sess.IncidentSession) -> list[dict]:
    out = []
    for nid in observable_nodes(session.network):
        node = session.network.nodes[nid]
        entry: dict = {"node": nid}
        if node.is_interval:
            edges = node.edges
            entry.update(kind="interval", unit=node.states[0].unit,
                         lo=float(edges[0]), hi=float(edges[-1]))
        else:
            entry.update(kind="categorical", states=[s.label for s in node.states])
        out.append(entry)
    return out


def _summary(session: sess.IncidentSession) -> dict:
    return {
        "id": session.id,
        "structure_hash": session.structure_hash,
        "log_hash": session.log_hash(),
        "evidence": session.log,
        "notes": session.notes,
        "observables": _node_catalog(session),
        "query_nodes": [n for n in ("D_t", "D_v", "Y_D") if n in session.network.nodes],
    }


class SessionStore:
    """In-memory sessions persisted as JSON files under the data directory."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self.sessions: dict[str, sess.IncidentSession] = {}
        self.lock = threading.Lock()

    def path(self, sid: str) -> Path:
        return self.data_dir / f"{sid}.json"

    def get(self, sid: str) -> sess.IncidentSession:
        with self.lock:
            if sid in self.sessions:
                return self.sessions[sid]
        if self.path(sid).exists():
            loaded = sess.load(self.path(sid))
            with self.lock:
                self.sessions.setdefault(sid, loaded)
                return self.sessions[sid]
        raise UnknownNode(f"no incident with id {sid!r}")

    def put(self, session: sess.IncidentSession) -> None:
        with self.lock:
            self.sessions[session.id] = session
        self.persist(session)

    def persist(self, session: sess.IncidentSession) -> None:
        sess.save(session, self.path(session.id))

    def flush(self) -> None:
        with self.lock:
            live = list(self.sessions.values())
        for s in live:
            self.persist(s)


def create_app(data_dir: str | Path = "data", ui_dir: str | Path | None = None) -> FastAPI:
    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    store = SessionStore(data_dir)

    @contextlib.asynccontextmanager
    async def lifespan(_app: FastAPI):
        yield
        store.flush()  # graceful shutdown writes every live session out

    app = FastAPI(title="aground", version="0.1.0", lifespan=lifespan)
    app.state.store = store

    @app.exception_handler(AgroundError)
    async def domain_error(_req: Request, exc: AgroundError):
        status = _STATUS.get(type(exc), 400)
        return JSONResponse(status_code=status,
                            content={"error": {"code": type(exc).__name__, "reason": str(exc)}})

    @app.exception_handler(RequestValidationError)
    async def validation_error(_req: Request, exc: RequestValidationError):
        fields = [{"field": ".".join(str(p) for p in e["loc"]), "reason": e["msg"]}
                  for e in exc.errors()]
        return JSONResponse(status_code=422,
                            content={"error": {"code": "ValidationError", "fields": fields}})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/incidents", status_code=201)
    def create_incident(body: CreateBody):
        ship = ship_from_json(body.ship)
        model = model_from_json(body.model or {})
        incident = incident_from_json(body.incident)
        session = sess.create_session(ship, model, incident, session_id=body.id)
        store.put(session)
        return {"id": session.id, "structure_hash": session.structure_hash,
                "report": session.report()}

    @app.get("/incidents/{sid}")
    def get_incident(sid: str):
        return _summary(store.get(sid))

    @app.get("/incidents/{sid}/posteriors")
    def get_posteriors(sid: str, nodes: str = "D_t,D_v,Y_D"):
        session = store.get(sid)
        query = [n.strip() for n in nodes.split(",") if n.strip()]
        query = [n for n in query if n in session.network.nodes]
        return session.report(query)

    @app.post("/incidents/{sid}/evidence")
    def post_evidence(sid: str, body: EvidenceBody):
        session = store.get(sid)
        sess.add_evidence(session, sess.Evidence(
            node=body.node, value=body.value, timestamp=body.timestamp, source=body.source))
        store.persist(session)
        return {"evidence_id": session.log[-1]["eid"], "log_hash": session.log_hash(),
                "report": session.report()}

    @app.delete("/incidents/{sid}/evidence/{eid}")
    def delete_evidence(sid: str, eid: str):
        session = store.get(sid)
        sess.retract_evidence(session, eid)
        store.persist(session)
        return {"log_hash": session.log_hash(), "report": session.report()}

    @app.post("/incidents/{sid}/what-if")
    def post_what_if(sid: str, body: WhatIfBody):
        session = store.get(sid)
        overlay = [sess.Evidence(node=e.node, value=e.value, timestamp=e.timestamp,
                                 source=e.source) for e in body.overlay]
        posteriors = sess.what_if(session, overlay)
        return {"log_hash": session.log_hash(),
                "report": session.report(posteriors=posteriors)}

    if ui_dir is not None and Path(ui_dir).joinpath("index.html").exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=Path(ui_dir), html=True), name="ui")

    return app


def serve(port: int = 8800, data_dir: str | Path = "data", host: str = "127.0.0.1",
          ui_dir: str | Path | None = None) -> None:
    """Run the service; fails fast on a busy port or unwritable data directory."""
    data_dir = Path(data_dir)
    try:
        data_dir.mkdir(parents=True, exist_ok=True)
        probe = data_dir / ".write-probe"
        probe.write_text("ok")
        probe.unlink()
    except OSError as exc:
        raise DataDirUnwritable(f"cannot write to {data_dir}: {exc}") from None

    with contextlib.closing(socket.socket(socket.AF_INET, socket.SOCK_STREAM)) as sock:
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            sock.bind((host, port))
        except OSError as exc:
            raise PortInUse(f"port {port} unavailable: {exc}") from None

    import uvicorn

    uvicorn.run(create_app(data_dir, ui_dir=ui_dir), host=host, port=port,
                log_level="warning")
