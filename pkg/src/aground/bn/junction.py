"""Junction tree compilation: moralize, triangulate, extract cliques, span.

Triangulation uses greedy min-fill with lexicographic tie-breaking on node id,
so compilation is deterministic. The result may be a forest when the network
has disconnected components; message passing treats each tree independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .network import Network


def moral_graph(net: Network) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = {nid: set() for nid in net.nodes}
    for nid, node in net.nodes.items():
        fam = list(node.parents) + [nid]
        for i, a in enumerate(fam):
            for b in fam[i + 1:]:
                adj[a].add(b)
                adj[b].add(a)
    return adj


def _fill_count(adj: dict[str, set[str]], v: str) -> int:
    nbrs = sorted(adj[v])
    count = 0
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1:]:
            if b not in adj[a]:
                count += 1
    return count


def min_fill_elimination(adj: dict[str, set[str]]) -> tuple[list[str], list[frozenset[str]]]:
    """Eliminate all nodes greedily by fill count; returns the ordering and the
    elimination cliques ({v} plus its neighborhood at elimination time)."""
    adj = {v: set(nb) for v, nb in adj.items()}
    order: list[str] = []
    cliques: list[frozenset[str]] = []
    remaining = set(adj)
    while remaining:
        best = min(remaining, key=lambda v: (_fill_count(adj, v), v))
        nbrs = sorted(adj[best])
        cliques.append(frozenset([best] + nbrs))
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                adj[a].add(b)
                adj[b].add(a)
        for nb in nbrs:
            adj[nb].discard(best)
        del adj[best]
        remaining.discard(best)
        order.append(best)
    return order, cliques


def _maximal(cliques: list[frozenset[str]]) -> list[frozenset[str]]:
    keep: list[frozenset[str]] = []
    for c in cliques:
        if not any(c < other for other in cliques if other is not c):
            if c not in keep:
                keep.append(c)
    return keep


@dataclass
class JunctionTree:
    """Compiled junction tree (or forest) over a validated network."""

    network: Network
    cliques: list[tuple[str, ...]]                      # sorted node tuples
    edges: list[tuple[int, int, tuple[str, ...]]]       # (i, j, separator)
    family_clique: dict[str, int]                       # child id -> clique index
    evidence_clique: dict[str, int]                     # node id -> clique index
    neighbors: dict[int, list[tuple[int, int]]] = field(default_factory=dict)  # clique -> [(nbr, edge idx)]
    _base_potentials: list[np.ndarray] | None = None

    def clique_weight(self, idx: int) -> float:
        w = 1.0
        for nid in self.cliques[idx]:
            w *= self.network.card(nid)
        return w

    def containing_clique(self, node_id: str) -> int:
        return self.evidence_clique[node_id]

    def verify_running_intersection(self) -> None:
        """Every node must induce a connected subtree of cliques."""
        for nid in self.network.nodes:
            holders = [i for i, c in enumerate(self.cliques) if nid in c]
            if not holders:
                raise AssertionError(f"node {nid!r} appears in no clique")
            parent = {h: h for h in holders}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for i, j, sep in self.edges:
                if nid in sep:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[ri] = rj
            roots = {find(h) for h in holders}
            if len(roots) != 1:
                raise AssertionError(f"running intersection violated for node {nid!r}")

    def base_potentials(self) -> list[np.ndarray]:
        """Clique tables with all CPTs multiplied in, cached; callers must copy."""
        if self._base_potentials is None:
            pots = []
            for idx, clique in enumerate(self.cliques):
                shape = tuple(self.network.card(n) for n in clique)
                pots.append(np.ones(shape))
            for child, idx in self.family_clique.items():
                clique = self.cliques[idx]
                fam = self.network.family(child)
                arr = self.network.cpt_array(child)  # axes: parents..., child
                pots[idx] *= _align(arr, fam, clique, self.network)
            self._base_potentials = pots
        return self._base_potentials


def _align(arr: np.ndarray, scope: tuple[str, ...], clique: tuple[str, ...], net: Network) -> np.ndarray:
    """Reorder/broadcast an array with axes `scope` to the clique's axes."""
    missing = [n for n in clique if n not in scope]
    perm = [scope.index(n) for n in clique if n in scope]
    extra = [i for i in range(len(scope)) if scope[i] not in clique]
    if extra:
        raise ValueError("scope not contained in clique")
    moved = np.transpose(arr, perm)
    shape = tuple(net.card(n) if n in scope else 1 for n in clique)
    return moved.reshape(shape)


def compile_network(net: Network) -> JunctionTree:
    """Moralize, triangulate (min-fill) and build a maximum-spanning junction
    tree over separator sizes; verifies the running-intersection property."""
    adj = moral_graph(net)
    _, elim_cliques = min_fill_elimination(adj)
    maximal = _maximal(elim_cliques)
    cliques = sorted(tuple(sorted(c)) for c in maximal)

    # maximum spanning forest over |intersection| via Kruskal
    candidates = []
    for i in range(len(cliques)):
        for j in range(i + 1, len(cliques)):
            sep = tuple(sorted(set(cliques[i]) & set(cliques[j])))
            if sep:
                candidates.append((-len(sep), i, j, sep))
    candidates.sort()
    parent = list(range(len(cliques)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges: list[tuple[int, int, tuple[str, ...]]] = []
    for _, i, j, sep in candidates:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            edges.append((i, j, sep))

    def _weight(idx: int) -> float:
        w = 1.0
        for nid in cliques[idx]:
            w *= net.card(nid)
        return w

    family_clique: dict[str, int] = {}
    for nid in net.order:
        fam = set(net.family(nid))
        holders = [i for i, c in enumerate(cliques) if fam <= set(c)]
        if not holders:
            raise AssertionError(f"family of {nid!r} not covered by any clique")
        family_clique[nid] = min(holders, key=lambda i: (_weight(i), i))

    evidence_clique: dict[str, int] = {}
    for nid in net.nodes:
        holders = [i for i, c in enumerate(cliques) if nid in c]
        evidence_clique[nid] = min(holders, key=lambda i: (_weight(i), i))

    neighbors: dict[int, list[tuple[int, int]]] = {i: [] for i in range(len(cliques))}
    for eidx, (i, j, _) in enumerate(edges):
        neighbors[i].append((j, eidx))
        neighbors[j].append((i, eidx))
    for lst in neighbors.values():
        lst.sort()

    jt = JunctionTree(
        network=net,
        cliques=cliques,
        edges=edges,
        family_clique=family_clique,
        evidence_clique=evidence_clique,
        neighbors=neighbors,
    )
    jt.verify_running_intersection()
    return jt
