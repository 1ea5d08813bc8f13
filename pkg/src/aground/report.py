"""Posterior reports: histogram data plus summary statistics per query node.

Means and standard deviations use the bin-midpoint convention with the
within-bin uniform variance included, so moments of a discretized uniform law
reproduce the continuous values.
"""

from __future__ import annotations

import numpy as np

from .bn.network import Network


def node_report(net: Network, node_id: str, masses: np.ndarray) -> dict:
    node = net.nodes[node_id]
    masses = np.asarray(masses, dtype=float)
    if abs(masses.sum() - 1.0) > 1e-9 or np.any(masses < 0):
        raise ValueError(f"posterior for {node_id!r} is not a probability vector")
    out: dict = {
        "node": node_id,
        "kind": "interval" if node.is_interval else "categorical",
        "labels": [s.label for s in node.states],
        "masses": [float(m) for m in masses],
        "mode_index": int(np.argmax(masses)),
    }
    out["mode_label"] = node.states[out["mode_index"]].label
    if node.is_interval:
        edges = node.edges
        mids = 0.5 * (edges[:-1] + edges[1:])
        widths = np.diff(edges)
        mean = float(np.dot(masses, mids))
        var = float(np.dot(masses, (mids - mean) ** 2) + np.dot(masses, widths ** 2 / 12.0))
        out["unit"] = node.states[0].unit
        out["edges"] = [float(e) for e in edges]
        out["mean"] = mean
        out["sd"] = float(np.sqrt(var))
        tail = np.concatenate([np.cumsum(masses[::-1])[::-1], [0.0]])
        out["exceedance"] = [{"x": float(e), "p": float(p)} for e, p in zip(edges, tail)]
    return out


def build_report(net: Network, posteriors: dict[str, np.ndarray],
                 query: list[str]) -> dict:
    """JSON-ready posterior report for the query nodes; the vertical damage
    entry carries the inner-hull-breach probability when IHB is in the model."""
    nodes: dict[str, dict] = {}
    for nid in query:
        nodes[nid] = node_report(net, nid, posteriors[nid])
    if "D_v" in nodes and "IHB" in posteriors:
        nodes["D_v"]["p_inner_hull_breach"] = float(posteriors["IHB"][0])
    return {"nodes": nodes}
