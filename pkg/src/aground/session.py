"""Incident sessions: configuration, append-only evidence log, cached
inference and persistence.

The evidence log is append-only; retraction appends a tombstone record rather
than deleting. Replaying a log against the same configuration reproduces the
posteriors bitwise, because network synthesis and inference are deterministic.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .assemble import QUERY_NODES, build_network, observable_nodes
from .bn import JunctionTree, Network, compile_network, infer_marginals
from .errors import (
    CorruptFile,
    OutOfRangeValue,
    UnknownEvidenceId,
    UnknownNode,
    VersionMismatch,
)
from .report import build_report
from .ship import (
    IncidentConfig,
    ModelConfig,
    ShipParticulars,
    incident_from_json,
    incident_to_json,
    model_from_json,
    model_to_json,
    ship_from_json,
    ship_to_json,
)

log = logging.getLogger(__name__)

FORMAT_VERSION = "1.1"
_COMPATIBLE_MINORS = ("1.0",)

_jt_cache: dict[str, tuple[Network, JunctionTree]] = {}
_jt_cache_lock = threading.Lock()
_JT_CACHE_MAX = 8


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _compiled(ship: ShipParticulars, model: ModelConfig, incident: IncidentConfig,
              structure_hash: str) -> tuple[Network, JunctionTree]:
    with _jt_cache_lock:
        hit = _jt_cache.get(structure_hash)
    if hit is not None:
        return hit
    net = build_network(ship, model, incident)
    jt = compile_network(net)
    with _jt_cache_lock:
        if len(_jt_cache) >= _JT_CACHE_MAX:
            _jt_cache.pop(next(iter(_jt_cache)))
        _jt_cache[structure_hash] = (net, jt)
    return net, jt


@dataclass(frozen=True)
class Evidence:
    node: str
    value: float | str
    timestamp: str = ""
    source: str = ""


@dataclass
class IncidentSession:
    id: str
    ship: ShipParticulars
    model: ModelConfig
    incident: IncidentConfig
    network: Network
    jt: JunctionTree
    structure_hash: str
    log: list[dict] = field(default_factory=list)   # add and retract records
    posteriors: dict[str, np.ndarray] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    _seq: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    # -- log views ---------------------------------------------------------------

    def active_evidence(self) -> list[dict]:
        retracted = {r["target"] for r in self.log if r["kind"] == "retract"}
        return [r for r in self.log if r["kind"] == "add" and r["eid"] not in retracted]

    def assignment(self, extra: list[Evidence] = ()) -> dict[str, int]:
        """Hard-evidence map; for repeated observations of one node the latest
        (by timestamp, then entry id) wins."""
        chosen: dict[str, dict] = {}
        records = list(self.active_evidence())
        for ev in extra:
            records.append({"node": ev.node, "value": ev.value,
                            "timestamp": ev.timestamp or _now(), "eid": "overlay-z"})
        records.sort(key=lambda r: (r["timestamp"], r["eid"]))
        for rec in records:
            if rec["node"] in chosen:
                log.warning("evidence on %s replaced by a later observation", rec["node"])
            chosen[rec["node"]] = rec
        out = {}
        for nid, rec in chosen.items():
            out[nid] = self._state_index(nid, rec["value"])
        return out

    def log_hash(self) -> str:
        return hashlib.sha256(_canonical(self.log).encode()).hexdigest()

    # -- evidence binding ----------------------------------------------------------

    def _state_index(self, node_id: str, value) -> int:
        if node_id not in self.network.nodes:
            raise UnknownNode(f"node {node_id!r} is not part of this model")
        if node_id not in observable_nodes(self.network):
            raise UnknownNode(f"node {node_id!r} is not observable")
        node = self.network.nodes[node_id]
        if node.is_interval:
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise OutOfRangeValue(f"{node_id} expects a numeric value") from None
            edges = node.edges
            if value < edges[0] or value > edges[-1]:
                raise OutOfRangeValue(
                    f"{node_id}={value} outside the admissible range "
                    f"[{edges[0]:g}, {edges[-1]:g}]"
                )
            return node.bin_of(value)
        if not isinstance(value, str):
            raise OutOfRangeValue(f"{node_id} expects one of {[s.label for s in node.states]}")
        try:
            return node.state_index(value)
        except KeyError:
            raise OutOfRangeValue(
                f"{node_id}={value!r} not among states {[s.label for s in node.states]}"
            ) from None

    # -- queries ---------------------------------------------------------------------

    def _query_nodes(self) -> list[str]:
        q = [n for n in QUERY_NODES if n in self.network.nodes]
        if "IHB" in self.network.nodes:
            q.append("IHB")
        return q

    def _infer(self, extra: list[Evidence] = ()) -> dict[str, np.ndarray]:
        return infer_marginals(self.jt, self.assignment(extra), self._query_nodes())

    def refresh(self) -> dict[str, np.ndarray]:
        self.posteriors = self._infer()
        return self.posteriors

    def report(self, nodes: list[str] | None = None,
               posteriors: dict[str, np.ndarray] | None = None) -> dict:
        post = posteriors if posteriors is not None else self.posteriors
        query = [n for n in (nodes or QUERY_NODES) if n in post]
        missing = [n for n in (nodes or []) if n not in post]
        if missing:
            extra = infer_marginals(self.jt, self.assignment(), missing)
            post = {**post, **extra}
            query = [n for n in nodes if n in post]
        return build_report(self.network, post, query)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def create_session(ship: ShipParticulars, model: ModelConfig, incident: IncidentConfig,
                   session_id: str | None = None) -> IncidentSession:
    """Build the network for the configuration and cache the prior posteriors."""
    config = {
        "ship": ship_to_json(ship),
        "model": model_to_json(model),
        "incident": incident_to_json(incident),
    }
    structure_hash = hashlib.sha256(_canonical(config).encode()).hexdigest()
    net, jt = _compiled(ship, model, incident, structure_hash)
    session = IncidentSession(
        id=session_id or uuid.uuid4().hex[:12],
        ship=ship, model=model, incident=incident,
        network=net, jt=jt, structure_hash=structure_hash,
    )
    session.refresh()
    return session


def add_evidence(session: IncidentSession, evidence: Evidence) -> dict[str, np.ndarray]:
    """Append one observation and return the refreshed posteriors.

    Impossible evidence is rejected: the error propagates, the log and cached
    posteriors are left untouched.
    """
    with session._lock:
        session._state_index(evidence.node, evidence.value)  # validate before logging
        record = {
            "kind": "add",
            "eid": f"e{session._seq + 1:04d}",
            "node": evidence.node,
            "value": evidence.value,
            "timestamp": evidence.timestamp or _now(),
            "source": evidence.source,
        }
        session.log.append(record)
        try:
            posteriors = session._infer()
        except Exception:
            session.log.pop()
            raise
        session._seq += 1
        session.posteriors = posteriors
        return posteriors


def retract_evidence(session: IncidentSession, eid: str) -> dict[str, np.ndarray]:
    with session._lock:
        active = {r["eid"] for r in session.active_evidence()}
        if eid not in active:
            raise UnknownEvidenceId(f"no active evidence with id {eid!r}")
        session.log.append({"kind": "retract", "target": eid, "timestamp": _now()})
        return session.refresh()


def what_if(session: IncidentSession, overlay: list[Evidence]) -> dict[str, np.ndarray]:
    """Posteriors under the log plus an overlay; the session is not mutated."""
    for ev in overlay:
        session._state_index(ev.node, ev.value)
    return session._infer(extra=list(overlay))


# --- persistence ---------------------------------------------------------------------

def save(session: IncidentSession, path) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "id": session.id,
        "ship": ship_to_json(session.ship),
        "model": model_to_json(session.model),
        "incident": incident_to_json(session.incident),
        "log": session.log,
        "seq": session._seq,
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True))


def load(path) -> IncidentSession:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptFile(f"cannot read session file {path}: {exc}") from None
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise CorruptFile(f"{path} is not a session file")
    version = str(doc["format_version"])
    notes = []
    if version != FORMAT_VERSION:
        if version in _COMPATIBLE_MINORS:
            notes.append(f"migrated session from format {version} to {FORMAT_VERSION}")
        else:
            raise VersionMismatch(
                f"session format {version} not supported (current {FORMAT_VERSION})"
            )
    try:
        ship = ship_from_json(doc["ship"])
        model = model_from_json(doc["model"])
        incident = incident_from_json(doc["incident"])
        session = create_session(ship, model, incident, session_id=doc["id"])
        session.log = list(doc["log"])
        session._seq = int(doc.get("seq", len(session.log)))
    except KeyError as exc:
        raise CorruptFile(f"session file missing field {exc}") from None
    session.notes.extend(notes)
    session.refresh()
    return session
