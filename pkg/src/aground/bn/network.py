"""Discrete Bayesian network representation and validation.

Nodes carry ordered states that are either labeled categories or contiguous
half-open numeric intervals [lo, hi). Each node owns one conditional table
whose rows are indexed row-major over the parent states (first parent varies
slowest) and whose columns span the child states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..errors import CycleDetected, MissingTable, NonStochasticRow, UnknownNode

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True)
class State:
    """One state of a discrete node: a category label or an interval [lo, hi)."""

    label: str
    lo: float | None = None
    hi: float | None = None
    unit: str = ""

    @property
    def is_interval(self) -> bool:
        return self.lo is not None

    @property
    def midpoint(self) -> float:
        if not self.is_interval:
            raise ValueError(f"state {self.label!r} is categorical")
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        if not self.is_interval:
            raise ValueError(f"state {self.label!r} is categorical")
        return self.hi - self.lo


def interval_states(edges: Sequence[float], unit: str = "", labels: Sequence[str] | None = None) -> tuple[State, ...]:
    """Build contiguous interval states from ascending bin edges."""
    edges = list(map(float, edges))
    if len(edges) < 3:
        raise ValueError("need at least 2 bins (3 edges)")
    out = []
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        if not hi > lo:
            raise ValueError(f"edges not strictly ascending at index {i}")
        label = labels[i] if labels is not None else f"[{lo:g}, {hi:g})"
        out.append(State(label=label, lo=lo, hi=hi, unit=unit))
    return tuple(out)


def category_states(labels: Sequence[str]) -> tuple[State, ...]:
    return tuple(State(label=str(lbl)) for lbl in labels)


@dataclass(frozen=True)
class DiscreteNode:
    id: str
    states: tuple[State, ...]
    parents: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.states) < 2:
            raise ValueError(f"node {self.id!r} needs >= 2 states")
        if len(set(self.parents)) != len(self.parents):
            raise ValueError(f"node {self.id!r} has duplicate parents")
        kinds = {s.is_interval for s in self.states}
        if len(kinds) > 1:
            raise ValueError(f"node {self.id!r} mixes interval and categorical states")
        if self.states[0].is_interval:
            for a, b in zip(self.states[:-1], self.states[1:]):
                if not np.isclose(a.hi, b.lo, rtol=0, atol=1e-9):
                    raise ValueError(
                        f"node {self.id!r}: interval states not contiguous at {a.hi} / {b.lo}"
                    )

    @property
    def cardinality(self) -> int:
        return len(self.states)

    @property
    def is_interval(self) -> bool:
        return self.states[0].is_interval

    @property
    def edges(self) -> np.ndarray:
        """Bin edges for interval nodes."""
        if not self.is_interval:
            raise ValueError(f"node {self.id!r} is categorical")
        return np.array([self.states[0].lo] + [s.hi for s in self.states])

    def state_index(self, label: str) -> int:
        for i, s in enumerate(self.states):
            if s.label == label:
                return i
        raise KeyError(f"node {self.id!r} has no state {label!r}")

    def bin_of(self, value: float) -> int:
        """Index of the interval containing value; the top edge is inclusive."""
        edges = self.edges
        if value < edges[0] or value > edges[-1]:
            raise ValueError(
                f"value {value} outside range [{edges[0]}, {edges[-1]}] of node {self.id!r}"
            )
        idx = int(np.searchsorted(edges, value, side="right")) - 1
        return min(idx, self.cardinality - 1)


@dataclass(frozen=True)
class ConditionalTable:
    """p(child | parents) with rows indexed row-major over parent states."""

    child: str
    probs: np.ndarray  # shape (prod parent cards, child card)

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim == 1:
            probs = probs[None, :]
        object.__setattr__(self, "probs", probs)
        if np.any(probs < -1e-15) or np.any(probs > 1 + 1e-12):
            raise NonStochasticRow(f"table for {self.child!r} has entries outside [0, 1]")
        sums = probs.sum(axis=1)
        bad = np.nonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)[0]
        if bad.size:
            raise NonStochasticRow(
                f"table for {self.child!r}: row {bad[0]} sums to {sums[bad[0]]!r}"
            )

    @property
    def n_rows(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True)
class Network:
    nodes: dict[str, DiscreteNode]
    tables: dict[str, ConditionalTable]
    order: tuple[str, ...] = field(default=())  # topological

    def card(self, node_id: str) -> int:
        return self.nodes[node_id].cardinality

    def family(self, node_id: str) -> tuple[str, ...]:
        node = self.nodes[node_id]
        return node.parents + (node_id,)

    def joint_size(self) -> float:
        size = 1.0
        for n in self.nodes.values():
            size *= n.cardinality
        return size

    def cpt_array(self, node_id: str) -> np.ndarray:
        """CPT reshaped to (card(p1), ..., card(pk), card(child))."""
        node = self.nodes[node_id]
        shape = tuple(self.card(p) for p in node.parents) + (node.cardinality,)
        return self.tables[node_id].probs.reshape(shape)


def _topological_order(nodes: Mapping[str, DiscreteNode]) -> tuple[str, ...]:
    indeg = {nid: len(n.parents) for nid, n in nodes.items()}
    children: dict[str, list[str]] = {nid: [] for nid in nodes}
    for nid, n in nodes.items():
        for p in n.parents:
            children[p].append(nid)
    ready = sorted(nid for nid, d in indeg.items() if d == 0)
    order: list[str] = []
    while ready:
        nid = ready.pop(0)
        order.append(nid)
        for c in sorted(children[nid]):
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
        ready.sort()
    if len(order) != len(nodes):
        stuck = sorted(set(nodes) - set(order))
        raise CycleDetected(f"directed cycle through nodes: {', '.join(stuck)}")
    return tuple(order)


def construct_network(nodes: Iterable[DiscreteNode], tables: Iterable[ConditionalTable]) -> Network:
    """Validate and assemble a network; rejects cycles, dangling parents and
    malformed tables."""
    node_map: dict[str, DiscreteNode] = {}
    for n in nodes:
        if n.id in node_map:
            raise ValueError(f"duplicate node id {n.id!r}")
        node_map[n.id] = n
    for n in node_map.values():
        for p in n.parents:
            if p not in node_map:
                raise UnknownNode(f"node {n.id!r} references unknown parent {p!r}")
    order = _topological_order(node_map)

    table_map: dict[str, ConditionalTable] = {}
    for t in tables:
        if t.child not in node_map:
            raise UnknownNode(f"table for unknown node {t.child!r}")
        if t.child in table_map:
            raise ValueError(f"duplicate table for node {t.child!r}")
        table_map[t.child] = t
    for nid, n in node_map.items():
        if nid not in table_map:
            raise MissingTable(f"node {nid!r} has no conditional table")
        expected_rows = int(np.prod([node_map[p].cardinality for p in n.parents], dtype=object)) if n.parents else 1
        t = table_map[nid]
        if t.probs.shape != (expected_rows, n.cardinality):
            raise ValueError(
                f"table for {nid!r} has shape {t.probs.shape}, expected ({expected_rows}, {n.cardinality})"
            )
    return Network(nodes=node_map, tables=table_map, order=order)


def to_dot(net: Network) -> str:
    """Render the DAG as DOT text (debug/documentation export)."""
    lines = ["digraph bn {", "  rankdir=TB;"]
    for nid in net.order:
        n = net.nodes[nid]
        kind = "interval" if n.is_interval else "categorical"
        lines.append(f'  "{nid}" [label="{nid}\\n{n.cardinality} states ({kind})"];')
    for nid in net.order:
        for p in net.nodes[nid].parents:
            lines.append(f'  "{p}" -> "{nid}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
