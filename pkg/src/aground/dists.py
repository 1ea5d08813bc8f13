"""Parameterized continuous distributions used for priors and error terms.

Every family exposes a vectorized cdf, quantile, mean, sd and inverse-transform
sampling (quantile of uniforms), which keeps table synthesis deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special, stats

from .errors import InvalidParameter


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.hi > self.lo:
            raise InvalidParameter(f"uniform needs hi > lo, got [{self.lo}, {self.hi}]")

    def cdf(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def quantile(self, p):
        return self.lo + np.asarray(p, dtype=float) * (self.hi - self.lo)

    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def sd(self) -> float:
        return (self.hi - self.lo) / math.sqrt(12.0)


@dataclass(frozen=True)
class ScaledBeta:
    """Beta(alpha, beta) stretched onto [lo, hi]."""

    alpha: float
    beta: float
    lo: float
    hi: float

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise InvalidParameter("beta shape parameters must be positive")
        if not self.hi > self.lo:
            raise InvalidParameter("beta range needs hi > lo")

    def _z(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def cdf(self, x):
        return special.betainc(self.alpha, self.beta, self._z(x))

    def quantile(self, p):
        return self.lo + (self.hi - self.lo) * special.betaincinv(self.alpha, self.beta, np.asarray(p, dtype=float))

    def mean(self) -> float:
        return self.lo + (self.hi - self.lo) * self.alpha / (self.alpha + self.beta)

    def sd(self) -> float:
        a, b = self.alpha, self.beta
        return (self.hi - self.lo) * math.sqrt(a * b / ((a + b) ** 2 * (a + b + 1)))


@dataclass(frozen=True)
class Normal:
    mu: float
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise InvalidParameter("normal needs sigma > 0")

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return special.ndtr(z)

    def quantile(self, p):
        return self.mu + self.sigma * special.ndtri(np.asarray(p, dtype=float))

    def mean(self) -> float:
        return self.mu

    def sd(self) -> float:
        return self.sigma


@dataclass(frozen=True)
class LognormalMedianCov:
    """Lognormal specified by its median m and coefficient of variation delta.

    The underlying normal has location ln(m) and scale sqrt(ln(1 + delta^2)).
    """

    median: float
    cov: float

    def __post_init__(self):
        if self.median <= 0:
            raise InvalidParameter("lognormal median must be positive")
        if self.cov <= 0:
            raise InvalidParameter("lognormal cov must be positive")

    @property
    def _scale(self) -> float:
        return math.sqrt(math.log1p(self.cov ** 2))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x, dtype=float)
        pos = x > 0
        z = (np.log(np.where(pos, x, 1.0)) - math.log(self.median)) / self._scale
        out = np.where(pos, special.ndtr(z), 0.0)
        return out

    def quantile(self, p):
        return self.median * np.exp(self._scale * special.ndtri(np.asarray(p, dtype=float)))

    def mean(self) -> float:
        return self.median * math.sqrt(1.0 + self.cov ** 2)

    def sd(self) -> float:
        return self.mean() * self.cov


@dataclass(frozen=True)
class TruncExp:
    """Exponential with the given rate, truncated and renormalized to [lo, hi]."""

    rate: float
    lo: float
    hi: float

    def __post_init__(self):
        if self.rate <= 0:
            raise InvalidParameter("truncated exponential needs rate > 0")
        if not self.hi > self.lo:
            raise InvalidParameter("truncated exponential needs hi > lo")

    @property
    def _z(self) -> float:
        return -math.expm1(-self.rate * (self.hi - self.lo))

    def cdf(self, x):
        y = np.clip(np.asarray(x, dtype=float) - self.lo, 0.0, self.hi - self.lo)
        return -np.expm1(-self.rate * y) / self._z

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        return self.lo - np.log1p(-p * self._z) / self.rate

    def mean(self) -> float:
        span = self.hi - self.lo
        return self.lo + 1.0 / self.rate - span * math.exp(-self.rate * span) / self._z

    def sd(self) -> float:
        lam, span, z = self.rate, self.hi - self.lo, self._z
        e = math.exp(-lam * span)
        m1 = 1.0 / lam - span * e / z
        m2 = (2.0 / lam ** 2 - e * (span ** 2 + 2 * span / lam + 2 / lam ** 2)) / z
        return math.sqrt(max(m2 - m1 ** 2, 0.0))

    @classmethod
    def from_mean(cls, mean: float, lo: float, hi: float) -> "TruncExp":
        """Calibrate the rate so the truncated mean matches the target."""
        if not lo < mean < 0.5 * (lo + hi):
            raise InvalidParameter(
                f"target mean {mean} not reachable by a truncated exponential on [{lo}, {hi}]"
            )

        def gap(rate):
            return cls(rate=rate, lo=lo, hi=hi).mean() - mean

        span = hi - lo
        rate = optimize.brentq(gap, 1e-9 / span, 1e4 / span, xtol=1e-14, rtol=1e-14)
        return cls(rate=rate, lo=lo, hi=hi)


@dataclass(frozen=True)
class EmpiricalHistogram:
    """Piecewise-uniform density over contiguous bins."""

    edges: tuple[float, ...]
    masses: tuple[float, ...]

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        masses = np.asarray(self.masses, dtype=float)
        if edges.ndim != 1 or len(edges) != len(masses) + 1:
            raise InvalidParameter("histogram needs len(edges) == len(masses) + 1")
        if np.any(np.diff(edges) <= 0):
            raise InvalidParameter("histogram edges must be strictly ascending")
        if np.any(masses < 0) or abs(masses.sum() - 1.0) > 1e-12:
            raise InvalidParameter("histogram masses must be nonnegative and sum to 1")
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "masses", tuple(masses))

    def cdf(self, x):
        edges = np.asarray(self.edges)
        cum = np.concatenate([[0.0], np.cumsum(self.masses)])
        return np.interp(np.asarray(x, dtype=float), edges, cum)

    def quantile(self, p):
        edges = np.asarray(self.edges)
        cum = np.concatenate([[0.0], np.cumsum(self.masses)])
        cum[-1] = 1.0
        return np.interp(np.asarray(p, dtype=float), cum, edges)

    def mean(self) -> float:
        edges = np.asarray(self.edges)
        mids = 0.5 * (edges[:-1] + edges[1:])
        return float(np.dot(mids, self.masses))

    def sd(self) -> float:
        edges = np.asarray(self.edges)
        mids = 0.5 * (edges[:-1] + edges[1:])
        widths = np.diff(edges)
        m = self.mean()
        var = np.dot(self.masses, (mids - m) ** 2 + widths ** 2 / 12.0)
        return math.sqrt(float(var))


Distribution = (
    Uniform | ScaledBeta | Normal | LognormalMedianCov | TruncExp | EmpiricalHistogram
)

_FAMILIES = {
    "uniform": lambda s: Uniform(lo=s["lo"], hi=s["hi"]),
    "beta": lambda s: ScaledBeta(alpha=s["alpha"], beta=s["beta"], lo=s["lo"], hi=s["hi"]),
    "normal": lambda s: Normal(mu=s["mean"], sigma=s["sd"]),
    "lognormal_median_cov": lambda s: LognormalMedianCov(median=s["median"], cov=s["cov"]),
    "trunc_exp": lambda s: (
        TruncExp.from_mean(s["mean"], s["lo"], s["hi"]) if "mean" in s
        else TruncExp(rate=s["rate"], lo=s["lo"], hi=s["hi"])
    ),
    "histogram": lambda s: EmpiricalHistogram(edges=tuple(s["edges"]), masses=tuple(s["masses"])),
}


def make_distribution(spec: dict) -> Distribution:
    """Build a distribution from a JSON-style spec, e.g.
    {"family": "beta", "alpha": 5, "beta": 2, "lo": 0, "hi": 15}."""
    try:
        family = spec["family"]
    except (TypeError, KeyError):
        raise InvalidParameter("distribution spec needs a 'family' key") from None
    try:
        builder = _FAMILIES[family]
    except KeyError:
        raise InvalidParameter(f"unknown distribution family {family!r}") from None
    try:
        return builder(spec)
    except KeyError as exc:
        raise InvalidParameter(f"family {family!r} missing parameter {exc}") from None


def spec_of(dist: Distribution) -> dict:
    """Inverse of make_distribution, for config round trips."""
    if isinstance(dist, Uniform):
        return {"family": "uniform", "lo": dist.lo, "hi": dist.hi}
    if isinstance(dist, ScaledBeta):
        return {"family": "beta", "alpha": dist.alpha, "beta": dist.beta, "lo": dist.lo, "hi": dist.hi}
    if isinstance(dist, Normal):
        return {"family": "normal", "mean": dist.mu, "sd": dist.sigma}
    if isinstance(dist, LognormalMedianCov):
        return {"family": "lognormal_median_cov", "median": dist.median, "cov": dist.cov}
    if isinstance(dist, TruncExp):
        return {"family": "trunc_exp", "rate": dist.rate, "lo": dist.lo, "hi": dist.hi}
    if isinstance(dist, EmpiricalHistogram):
        return {"family": "histogram", "edges": list(dist.edges), "masses": list(dist.masses)}
    raise InvalidParameter(f"unknown distribution type {type(dist)!r}")
