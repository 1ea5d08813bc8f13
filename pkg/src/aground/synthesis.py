"""CPT synthesis: priors over interval bins and deterministic-map-plus-noise
conditional tables.

Parent cells are sampled with a latin-hypercube scheme driven by a counter-based
Philox stream keyed on (seed, node tag), so tables are reproducible bitwise and
independent of the order in which nodes are synthesized. Noise is applied with
the error distribution's exact cdf across child-bin edges rather than by Monte
Carlo on the child side, which keeps variance low at small sample counts.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bn.network import ConditionalTable
from .dists import Distribution
from .errors import DegenerateCell, InvalidParameter, SupportMismatch

_MASS_BLOCK = 4_000_000  # cap on samples x edges per vectorized noise block


@dataclass(frozen=True)
class BinningPolicy:
    """Bin edges over a declared plausible range [lo, hi]."""

    edges: tuple[float, ...]

    def __post_init__(self):
        edges = tuple(float(e) for e in self.edges)
        if len(edges) < 3:
            raise InvalidParameter("binning needs at least 2 bins")
        if any(b <= a for a, b in zip(edges[:-1], edges[1:])):
            raise InvalidParameter("bin edges must be strictly ascending")
        object.__setattr__(self, "edges", edges)

    @property
    def lo(self) -> float:
        return self.edges[0]

    @property
    def hi(self) -> float:
        return self.edges[-1]

    @property
    def n_bins(self) -> int:
        return len(self.edges) - 1

    def edge_array(self) -> np.ndarray:
        return np.asarray(self.edges)

    @classmethod
    def uniform(cls, lo: float, hi: float, n: int) -> "BinningPolicy":
        return cls(edges=tuple(np.linspace(lo, hi, n + 1)))

    @classmethod
    def by_width(cls, lo: float, hi: float, width: float) -> "BinningPolicy":
        """Bins of a fixed width; the last bin is shortened to end at hi."""
        if width <= 0:
            raise InvalidParameter("bin width must be positive")
        edges = list(np.arange(lo, hi, width))
        if hi - edges[-1] < 1e-9 * width:
            edges[-1] = hi
        else:
            edges.append(hi)
        return cls(edges=tuple(edges))

    @classmethod
    def geometric(cls, lo: float, hi: float, n: int, zero_bin: bool = False) -> "BinningPolicy":
        """Log-spaced bins on [lo, hi] (lo > 0), optionally preceded by [0, lo)."""
        if lo <= 0:
            raise InvalidParameter("geometric binning needs lo > 0")
        edges = list(np.geomspace(lo, hi, n + 1))
        if zero_bin:
            edges = [0.0] + edges
        return cls(edges=tuple(edges))

    @classmethod
    def explicit(cls, edges: Sequence[float]) -> "BinningPolicy":
        return cls(edges=tuple(edges))


@dataclass(frozen=True)
class NoiseModel:
    kind: str  # "multiplicative" | "additive" | "none"
    dist: Distribution | None = None

    def __post_init__(self):
        if self.kind not in ("multiplicative", "additive", "none"):
            raise InvalidParameter(f"unknown noise kind {self.kind!r}")
        if self.kind == "none":
            if self.dist is not None:
                raise InvalidParameter("'none' noise takes no distribution")
        else:
            if self.dist is None:
                raise InvalidParameter(f"{self.kind} noise needs a distribution")
            if self.kind == "multiplicative" and float(self.dist.quantile(1e-12)) <= 0.0:
                raise InvalidParameter("multiplicative noise must have strictly positive support")

    @classmethod
    def none(cls) -> "NoiseModel":
        return cls(kind="none")

    @classmethod
    def additive(cls, dist: Distribution) -> "NoiseModel":
        return cls(kind="additive", dist=dist)

    @classmethod
    def multiplicative(cls, dist: Distribution) -> "NoiseModel":
        return cls(kind="multiplicative", dist=dist)


@dataclass(frozen=True)
class SynthesisConfig:
    samples_per_cell: int = 256
    seed: int = 0

    def __post_init__(self):
        if self.samples_per_cell < 1:
            raise InvalidParameter("samples_per_cell must be >= 1")


def prior_table(dist: Distribution, bins: BinningPolicy, truncate: bool = True) -> np.ndarray:
    """Bin masses of a distribution; by default the law is truncated and
    renormalized to the bin range."""
    edges = bins.edge_array()
    cdf = np.asarray(dist.cdf(edges), dtype=float)
    masses = np.diff(cdf)
    inside = float(cdf[-1] - cdf[0])
    if inside <= 0.0:
        raise SupportMismatch("no probability mass inside the bin range")
    if truncate:
        probs = masses / inside
    else:
        outside = 1.0 - inside
        if outside > 1e-3:
            raise SupportMismatch(
                f"{outside:.4g} of the probability mass lies outside the bins"
            )
        masses = masses.copy()
        masses[0] += cdf[0]
        masses[-1] += 1.0 - cdf[-1]
        probs = masses / masses.sum()
    return probs


def _philox_key(seed: int, tag: str) -> np.ndarray:
    digest = hashlib.sha256(f"{seed}:{tag}".encode()).digest()
    return np.frombuffer(digest[:16], dtype=np.uint64).copy()


def _latin_hypercube(gen: np.random.Generator, n_dims: int, n_cells: int, n_samples: int) -> np.ndarray:
    """Stratified (0,1) samples, one permutation of strata per cell and dim."""
    if n_dims == 0:
        return np.empty((0, n_cells, n_samples))
    ranks = np.argsort(gen.random((n_dims, n_cells, n_samples)), axis=-1)
    offsets = np.clip(gen.random((n_dims, n_cells, n_samples)), 1e-12, 1.0 - 1e-12)
    return (ranks + offsets) / n_samples


def _noise_masses(noise: NoiseModel, y: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Per-sample bin masses (n, m) for child = y (*|+) noise; mass outside the
    range is clamped to the boundary bins."""
    m = len(edges) - 1
    if noise.kind == "none":
        idx = np.searchsorted(edges, y, side="right") - 1
        idx = np.clip(idx, 0, m - 1)
        out = np.zeros((y.size, m))
        out[np.arange(y.size), idx] = 1.0
        return out

    if noise.kind == "additive":
        grid = edges[None, :] - y[:, None]
        cdf = np.asarray(noise.dist.cdf(grid), dtype=float)
    else:  # multiplicative
        if np.any(y < 0):
            raise DegenerateCell("multiplicative noise applied to a negative value")
        pos = y > 0
        safe = np.where(pos, y, 1.0)
        cdf = np.asarray(noise.dist.cdf(edges[None, :] / safe[:, None]), dtype=float)
        # zero stays zero: point mass lands in the bin containing 0
        if not np.all(pos):
            zero_bin = int(np.clip(np.searchsorted(edges, 0.0, side="right") - 1, 0, m - 1))
            point = np.zeros(m + 1)
            point[zero_bin + 1:] = 1.0
            cdf[~pos] = point

    masses = np.diff(cdf, axis=1)
    masses[:, 0] += cdf[:, 0]
    masses[:, -1] += 1.0 - cdf[:, -1]
    return masses


def functional_cpt(
    child_bins: BinningPolicy,
    parents: Sequence[BinningPolicy | int],
    f: Callable[..., np.ndarray],
    noise: NoiseModel | Callable[[tuple[int, ...]], NoiseModel],
    cfg: SynthesisConfig,
    tag: str,
    aux: Sequence[Distribution] = (),
) -> ConditionalTable:
    """Synthesize p(child | parents) for child = f(parents, aux) with noise.

    Parents are BinningPolicy (interval variable, stratified in-cell sampling)
    or an int (categorical cardinality; f receives the state index). ``aux``
    distributions are sampled per (cell, sample) and passed after the parents.
    ``noise`` may be a callable of the parent cell index tuple for tables whose
    error level depends on a categorical parent. Rows are indexed row-major
    with the first parent varying slowest.
    """
    edges_c = child_bins.edge_array()
    cards = [p.n_bins if isinstance(p, BinningPolicy) else int(p) for p in parents]
    if any(c < 1 for c in cards):
        raise InvalidParameter("parent cardinalities must be >= 1")
    n_cells = int(np.prod(cards)) if cards else 1
    S = cfg.samples_per_cell

    cell_idx = np.indices(cards).reshape(len(cards), -1) if cards else np.empty((0, 1), dtype=int)

    interval_dims = [d for d, p in enumerate(parents) if isinstance(p, BinningPolicy)]
    n_sample_dims = len(interval_dims) + len(aux)
    gen = np.random.Generator(np.random.Philox(key=_philox_key(cfg.seed, tag)))
    u = _latin_hypercube(gen, n_sample_dims, n_cells, S)

    args: list[np.ndarray] = []
    for d, p in enumerate(parents):
        if isinstance(p, BinningPolicy):
            pe = p.edge_array()
            lo = pe[:-1][cell_idx[d]]
            width = np.diff(pe)[cell_idx[d]]
            args.append(lo[:, None] + u[interval_dims.index(d)] * width[:, None])
        else:
            args.append(np.broadcast_to(cell_idx[d][:, None], (n_cells, S)))
    for j, dist in enumerate(aux):
        args.append(np.asarray(dist.quantile(u[len(interval_dims) + j]), dtype=float))

    y = np.asarray(f(*args), dtype=float)
    if y.shape != (n_cells, S):
        y = np.broadcast_to(y, (n_cells, S)).astype(float)
    finite = np.isfinite(y)
    if not finite.all():
        bad = int(np.nonzero(~finite.all(axis=1))[0][0])
        raise DegenerateCell(
            f"{tag}: map is non-finite on parent cell {tuple(cell_idx[:, bad])}"
        )

    probs = np.empty((n_cells, child_bins.n_bins))
    if callable(noise) and not isinstance(noise, NoiseModel):
        cell_noise = [noise(tuple(cell_idx[:, c])) for c in range(n_cells)]
    else:
        cell_noise = [noise] * n_cells

    groups: dict[NoiseModel, list[int]] = {}
    for c, nm in enumerate(cell_noise):
        groups.setdefault(nm, []).append(c)

    for nm, cells in groups.items():
        cells = np.asarray(cells)
        block = max(1, _MASS_BLOCK // (S * len(edges_c)))
        for start in range(0, len(cells), block):
            sel = cells[start:start + block]
            masses = _noise_masses(nm, y[sel].ravel(), edges_c)
            probs[sel] = masses.reshape(len(sel), S, -1).mean(axis=1)

    probs /= probs.sum(axis=1, keepdims=True)
    return ConditionalTable(child=tag, probs=probs)
