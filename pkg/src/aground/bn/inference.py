"""Exact posterior marginals: Hugin-style propagation and a brute-force oracle.

Potentials are kept in the linear domain; each message is renormalized and the
log normalization constant accumulated, so evidence with vanishing probability
is detected rather than silently renormalized away.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ImpossibleEvidence, StateSpaceTooLarge, UnknownNode
from .junction import JunctionTree, _align
from .network import Network

LOG_ZERO_EVIDENCE = math.log(1e-300)

Evidence = dict[str, int]


def _check_evidence(net: Network, evidence: Evidence) -> None:
    for nid, k in evidence.items():
        if nid not in net.nodes:
            raise UnknownNode(f"evidence on unknown node {nid!r}")
        if not 0 <= int(k) < net.card(nid):
            raise ValueError(f"evidence state {k} out of range for node {nid!r}")


def _check_query(net: Network, query) -> list[str]:
    query = list(query)
    for nid in query:
        if nid not in net.nodes:
            raise UnknownNode(f"query on unknown node {nid!r}")
    return query


def _marginalize(pot: np.ndarray, clique: tuple[str, ...], keep: tuple[str, ...]) -> np.ndarray:
    axes = tuple(i for i, n in enumerate(clique) if n not in keep)
    return pot.sum(axis=axes) if axes else pot


def infer_marginals(jt: JunctionTree, evidence: Evidence, query) -> dict[str, np.ndarray]:
    """Exact posterior marginals of the query nodes given hard evidence.

    Raises ImpossibleEvidence when the evidence has zero prior probability.
    """
    net = jt.network
    _check_evidence(net, evidence)
    query = _check_query(net, query)

    pots = [p.copy() for p in jt.base_potentials()]
    for nid, k in evidence.items():
        idx = jt.evidence_clique[nid]
        clique = jt.cliques[idx]
        indicator = np.zeros(net.card(nid))
        indicator[int(k)] = 1.0
        shape = tuple(net.card(n) if n == nid else 1 for n in clique)
        pots[idx] *= indicator.reshape(shape)

    seps: dict[int, np.ndarray] = {}
    log_z = 0.0

    visited = [False] * len(jt.cliques)
    for root in range(len(jt.cliques)):
        if visited[root]:
            continue
        # DFS order for this component
        order: list[tuple[int, int, int]] = []  # (clique, parent, edge idx)
        stack = [(root, -1, -1)]
        while stack:
            c, par, eidx = stack.pop()
            if visited[c]:
                continue
            visited[c] = True
            order.append((c, par, eidx))
            for nbr, ne in sorted(jt.neighbors[c], reverse=True):
                if not visited[nbr]:
                    stack.append((nbr, c, ne))

        # collect: leaves toward root
        for c, par, eidx in reversed(order):
            if par < 0:
                continue
            sep = jt.edges[eidx][2]
            msg = _marginalize(pots[c], jt.cliques[c], sep)
            s = float(msg.sum())
            if s <= 0.0:
                raise ImpossibleEvidence("evidence has zero probability")
            msg = msg / s
            log_z += math.log(s)
            seps[eidx] = msg
            pots[par] *= _align(msg, sep, jt.cliques[par], net)

        z_root = float(pots[root].sum())
        if z_root <= 0.0:
            raise ImpossibleEvidence("evidence has zero probability")
        log_z += math.log(z_root)
        pots[root] /= z_root

        # distribute: root toward leaves
        for c, par, eidx in order:
            if par < 0:
                continue
            sep = jt.edges[eidx][2]
            msg = _marginalize(pots[par], jt.cliques[par], sep)
            old = seps[eidx]
            ratio = np.divide(msg, old, out=np.zeros_like(msg), where=old > 0)
            pots[c] *= _align(ratio, sep, jt.cliques[c], net)
            seps[eidx] = msg

    if log_z < LOG_ZERO_EVIDENCE:
        raise ImpossibleEvidence(f"evidence probability underflow (log p = {log_z:.1f})")

    out: dict[str, np.ndarray] = {}
    for nid in query:
        idx = jt.evidence_clique[nid]
        vec = _marginalize(pots[idx], jt.cliques[idx], (nid,))
        out[nid] = vec / vec.sum()
    return out


def brute_force_marginals(net: Network, evidence: Evidence, query) -> dict[str, np.ndarray]:
    """Marginals by full enumeration of the joint; oracle for infer_marginals."""
    if net.joint_size() > 1e7:
        raise StateSpaceTooLarge(f"joint state space has {net.joint_size():.3g} entries")
    _check_evidence(net, evidence)
    query = _check_query(net, query)

    order = net.order
    joint = np.ones(tuple(net.card(n) for n in order))
    for nid in order:
        fam = net.family(nid)
        joint *= _align(net.cpt_array(nid), fam, order, net)
    for nid, k in evidence.items():
        indicator = np.zeros(net.card(nid))
        indicator[int(k)] = 1.0
        shape = tuple(net.card(n) if n == nid else 1 for n in order)
        joint *= indicator.reshape(shape)

    z = float(joint.sum())
    if z < 1e-300:
        raise ImpossibleEvidence("evidence has zero probability")

    out: dict[str, np.ndarray] = {}
    for nid in query:
        axes = tuple(i for i, n in enumerate(order) if n != nid)
        vec = joint.sum(axis=axes)
        out[nid] = vec / vec.sum()
    return out
