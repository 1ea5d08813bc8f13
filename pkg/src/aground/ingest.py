"""Evidence pre-processing: flow rates from tank levels, flow aggregation,
ground-reaction helper and bathymetry lookup."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import (
    InsufficientSamples,
    InvalidParameter,
    NegativeReaction,
    NonMonotoneVolumeCurve,
    OutOfBounds,
)


@dataclass(frozen=True)
class VolumeCurve:
    """Monotone piecewise-linear level -> volume map with end-slope extrapolation."""

    levels: tuple[float, ...]
    volumes: tuple[float, ...]

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        volumes = np.asarray(self.volumes, dtype=float)
        if levels.size < 2 or levels.size != volumes.size:
            raise InvalidParameter("volume curve needs >= 2 (level, volume) pairs")
        if np.any(np.diff(levels) <= 0):
            raise InvalidParameter("volume curve levels must be strictly ascending")
        if np.any(np.diff(volumes) < 0):
            raise NonMonotoneVolumeCurve("tank volume must be non-decreasing in level")

    def __call__(self, h):
        levels = np.asarray(self.levels)
        volumes = np.asarray(self.volumes)
        h = np.asarray(h, dtype=float)
        out = np.interp(h, levels, volumes)
        lo_slope = (volumes[1] - volumes[0]) / (levels[1] - levels[0])
        hi_slope = (volumes[-1] - volumes[-2]) / (levels[-1] - levels[-2])
        out = np.where(h < levels[0], volumes[0] + (h - levels[0]) * lo_slope, out)
        out = np.where(h > levels[-1], volumes[-1] + (h - levels[-1]) * hi_slope, out)
        return out if out.ndim else float(out)

    @classmethod
    def from_csv(cls, path) -> "VolumeCurve":
        levels, volumes = [], []
        for row in _read_csv(path, ("level_m", "volume_m3")):
            levels.append(float(row["level_m"]))
            volumes.append(float(row["volume_m3"]))
        return cls(levels=tuple(levels), volumes=tuple(volumes))


@dataclass(frozen=True)
class LevelSeries:
    """Timestamped tank level readings plus the tank's volume curve."""

    tank_id: str
    times: tuple[float, ...]    # s
    levels: tuple[float, ...]   # m
    volume: Callable            # level m -> volume m^3

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        levels = np.asarray(self.levels, dtype=float)
        if times.size != levels.size:
            raise InvalidParameter("times and levels must have equal length")
        if times.size and np.any(np.diff(times) <= 0):
            raise InvalidParameter("sample times must be strictly increasing")
        steps = np.diff(times)
        if steps.size and (steps.min() < 1.0 or steps.max() > 10.0):
            warnings.warn(
                f"tank {self.tank_id}: sampling step outside the recommended 1-10 s band",
                stacklevel=2,
            )

    @classmethod
    def from_csv(cls, path, volume: Callable, tank_id: str | None = None) -> "LevelSeries":
        times, levels = [], []
        for row in _read_csv(path, ("time_s", "level_m")):
            times.append(float(row["time_s"]))
            levels.append(float(row["level_m"]))
        return cls(tank_id=tank_id or Path(path).stem, times=tuple(times),
                   levels=tuple(levels), volume=volume)


@dataclass(frozen=True)
class FlowEstimate:
    rate: float                  # m^3/s
    sd: float                    # sample sd over the window
    quality: str                 # "good" | "poor"
    flags: tuple[str, ...] = field(default=())


def flow_rate_from_levels(series: LevelSeries, window: float = 60.0,
                          quality: str = "good") -> FlowEstimate:
    """Volumetric rate from level readings by symmetric volume differencing.

    The level rate uses central differences in the interior and one-sided
    differences at the series ends; the earliest window of the requested length
    is averaged ("measure early": the driving head decays as flooding
    progresses). Quality tags the measurement's error level for the network.
    """
    times = np.asarray(series.times, dtype=float)
    levels = np.asarray(series.levels, dtype=float)
    if times.size < 3:
        raise InsufficientSamples("need at least 3 level samples")
    if quality not in ("good", "poor"):
        raise InvalidParameter("quality must be 'good' or 'poor'")
    if not 40.0 <= window <= 60.0:
        warnings.warn("window outside the recommended 40-60 s band", stacklevel=2)

    h_dot = np.gradient(levels, times)
    local_dt = np.gradient(times)
    v = series.volume
    rates = (v(levels + 0.5 * local_dt * h_dot) - v(levels - 0.5 * local_dt * h_dot)) / local_dt

    in_window = times <= times[0] + window
    if in_window.sum() < 3:
        in_window = np.ones_like(times, dtype=bool)
    chunk = rates[in_window]
    sd = float(np.std(chunk, ddof=1)) if chunk.size > 1 else 0.0
    return FlowEstimate(rate=float(np.mean(chunk)), sd=sd, quality=quality)


def sum_tank_flows(estimates: Sequence[FlowEstimate]) -> FlowEstimate:
    """Total measured rate across tanks; the quality tag is the worst input's.

    Window sds combine in quadrature (independent measurement noise).
    """
    if not estimates:
        return FlowEstimate(rate=0.0, sd=0.0, quality="good", flags=("no_measurements",))
    rate = float(sum(e.rate for e in estimates))
    sd = float(np.sqrt(sum(e.sd ** 2 for e in estimates)))
    quality = "poor" if any(e.quality == "poor" for e in estimates) else "good"
    flags = tuple(sorted({f for e in estimates for f in e.flags}))
    return FlowEstimate(rate=rate, sd=sd, quality=quality, flags=flags)


def ground_reaction_displacement(displacement_damaged_t: float,
                                 displacement_at_drafts_t: float) -> float:
    """Ground reaction by the displacement method: the damaged displacement
    minus the hydrostatic displacement at the observed floating position."""
    reaction = float(displacement_damaged_t) - float(displacement_at_drafts_t)
    if reaction < 0:
        raise NegativeReaction(
            f"hydrostatic displacement exceeds the damaged displacement by {-reaction:.1f} t"
        )
    return reaction


@dataclass(frozen=True)
class BathymetryGrid:
    """Depth raster on an ascending lat/lon grid (metres, positive down)."""

    lats: tuple[float, ...]
    lons: tuple[float, ...]
    depths: tuple[tuple[float, ...], ...]   # row per latitude
    datum: str = "chart datum"

    def __post_init__(self):
        lats = np.asarray(self.lats, dtype=float)
        lons = np.asarray(self.lons, dtype=float)
        depths = np.asarray(self.depths, dtype=float)
        if lats.size < 2 or lons.size < 2:
            raise InvalidParameter("grid needs at least 2x2 cells")
        if np.any(np.diff(lats) <= 0) or np.any(np.diff(lons) <= 0):
            raise InvalidParameter("grid coordinates must be strictly ascending")
        if depths.shape != (lats.size, lons.size):
            raise InvalidParameter("depth raster shape must be (n_lats, n_lons)")
        if not np.all(np.isfinite(depths)):
            raise InvalidParameter("depths must be finite")

    @classmethod
    def from_csv(cls, path, datum: str = "chart datum") -> "BathymetryGrid":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if len(rows) < 3:
            raise InvalidParameter("bathymetry raster needs a header row and >= 2 data rows")
        lons = tuple(float(x) for x in rows[0][1:])
        lats, depths = [], []
        for row in rows[1:]:
            lats.append(float(row[0]))
            depths.append(tuple(float(x) for x in row[1:]))
        return cls(lats=tuple(lats), lons=lons, depths=tuple(depths), datum=datum)


def bathymetry_lookup(grid: BathymetryGrid, lat: float, lon: float) -> float:
    """Bilinear interpolation of the four surrounding grid cells."""
    lats = np.asarray(grid.lats)
    lons = np.asarray(grid.lons)
    depths = np.asarray(grid.depths)
    if not (lats[0] <= lat <= lats[-1] and lons[0] <= lon <= lons[-1]):
        raise OutOfBounds(
            f"point ({lat}, {lon}) outside raster "
            f"[{lats[0]}, {lats[-1]}] x [{lons[0]}, {lons[-1]}]"
        )
    i = min(int(np.searchsorted(lats, lat, side="right")) - 1, lats.size - 2)
    j = min(int(np.searchsorted(lons, lon, side="right")) - 1, lons.size - 2)
    i, j = max(i, 0), max(j, 0)
    u = (lat - lats[i]) / (lats[i + 1] - lats[i])
    v = (lon - lons[j]) / (lons[j + 1] - lons[j])
    return float(
        depths[i, j] * (1 - u) * (1 - v)
        + depths[i + 1, j] * u * (1 - v)
        + depths[i, j + 1] * (1 - u) * v
        + depths[i + 1, j + 1] * u * v
    )


def _read_csv(path, expected_fields):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [f for f in expected_fields if f not in (reader.fieldnames or [])]
        if missing:
            raise InvalidParameter(f"{path}: missing CSV columns {missing}")
        yield from reader
