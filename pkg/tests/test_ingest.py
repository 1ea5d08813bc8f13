import numpy as np
import pytest

from aground.errors import (
    InsufficientSamples,
    InvalidParameter,
    NegativeReaction,
    NonMonotoneVolumeCurve,
    OutOfBounds,
)
from aground.ingest import (
    BathymetryGrid,
    FlowEstimate,
    LevelSeries,
    VolumeCurve,
    bathymetry_lookup,
    flow_rate_from_levels,
    ground_reaction_displacement,
    sum_tank_flows,
)


def make_series(volume, h0=1.0, rate=0.1, dt=2.0, n=40, tank="t1"):
    times = tuple(dt * i for i in range(n))
    levels = tuple(h0 + rate * t for t in times)
    return LevelSeries(tank_id=tank, times=times, levels=levels, volume=volume)


def test_prismatic_tank_exact():
    series = make_series(lambda h: 1000.0 * np.asarray(h), h0=0.5, rate=0.1)
    est = flow_rate_from_levels(series, window=60.0)
    assert est.rate == pytest.approx(100.0, rel=1e-12)
    assert est.sd == pytest.approx(0.0, abs=1e-9)


def test_quadratic_volume_exact_at_center():
    # V = 500 h^2, level 2 m rising at 0.05 m/s, 4 s steps: dV/dt = 1000 h hdot
    series = LevelSeries(
        tank_id="t", times=(0.0, 4.0, 8.0),
        levels=(1.8, 2.0, 2.2),
        volume=lambda h: 500.0 * np.asarray(h) ** 2,
    )
    est = flow_rate_from_levels(series, window=60.0)
    assert est.rate == pytest.approx(100.0, rel=1e-12)


def test_affine_volume_exact_for_any_step():
    for dt in (1.0, 3.0, 7.0):
        series = make_series(lambda h: 250.0 + 40.0 * np.asarray(h), rate=0.25, dt=dt, n=30)
        est = flow_rate_from_levels(series, window=55.0)
        assert est.rate == pytest.approx(40.0 * 0.25, rel=1e-12)


def test_window_uses_earliest_samples():
    # rate decays after 60 s; the early window must ignore the decay
    times = tuple(float(t) for t in range(0, 120, 2))
    levels = tuple(0.1 * t if t <= 60 else 6.0 + 0.01 * (t - 60) for t in times)
    series = LevelSeries(tank_id="t", times=times, levels=levels,
                         volume=lambda h: 100.0 * np.asarray(h))
    est = flow_rate_from_levels(series, window=40.0)
    assert est.rate == pytest.approx(100.0 * 0.1, rel=1e-6)


def test_insufficient_samples():
    series = LevelSeries(tank_id="t", times=(0.0, 2.0), levels=(1.0, 1.2),
                         volume=lambda h: h)
    with pytest.raises(InsufficientSamples):
        flow_rate_from_levels(series)


def test_volume_curve_validation_and_interp():
    with pytest.raises(NonMonotoneVolumeCurve):
        VolumeCurve(levels=(0.0, 1.0, 2.0), volumes=(0.0, 5.0, 3.0))
    curve = VolumeCurve(levels=(0.0, 1.0, 3.0), volumes=(0.0, 10.0, 50.0))
    assert curve(0.5) == pytest.approx(5.0)
    assert curve(2.0) == pytest.approx(30.0)
    # end-slope extrapolation keeps the derivative alive at the table edges
    assert curve(3.5) == pytest.approx(60.0)


def test_level_series_validation():
    with pytest.raises(InvalidParameter):
        LevelSeries(tank_id="t", times=(0.0, 2.0, 2.0), levels=(1, 2, 3), volume=lambda h: h)
    with pytest.warns(UserWarning):
        LevelSeries(tank_id="t", times=(0.0, 30.0, 60.0), levels=(1, 2, 3), volume=lambda h: h)


def test_sum_tank_flows():
    a = FlowEstimate(rate=700.0, sd=10.0, quality="good")
    b = FlowEstimate(rate=650.0, sd=12.0, quality="poor")
    total = sum_tank_flows([a, b])
    assert total.rate == pytest.approx(1350.0)
    assert total.quality == "poor"
    assert total.sd == pytest.approx(np.hypot(10.0, 12.0))
    assert sum_tank_flows([a]).rate == a.rate
    empty = sum_tank_flows([])
    assert empty.rate == 0.0
    assert "no_measurements" in empty.flags


def test_sum_tank_flows_permutation_invariant():
    flows = [FlowEstimate(rate=r, sd=1.0, quality="good") for r in (100.0, 250.0, 42.5)]
    assert sum_tank_flows(flows).rate == sum_tank_flows(flows[::-1]).rate


def test_ground_reaction_displacement():
    assert ground_reaction_displacement(329_765, 320_129) == pytest.approx(9636.0)
    assert ground_reaction_displacement(293_474, 275_954) == pytest.approx(17_520.0)
    assert ground_reaction_displacement(300_000, 300_000) == 0.0
    with pytest.raises(NegativeReaction):
        ground_reaction_displacement(300_000, 300_001)
    # the helper inverts exactly
    assert ground_reaction_displacement(329_765, 320_129) + 320_129 == 329_765


@pytest.fixture
def grid():
    return BathymetryGrid(
        lats=(59.0, 59.01, 59.02),
        lons=(24.0, 24.01),
        depths=((14.0, 18.0), (14.0, 18.0), (20.0, 22.0)),
    )


def test_bathymetry_lookup(grid):
    assert bathymetry_lookup(grid, 59.0, 24.0) == 14.0          # cell corner
    assert bathymetry_lookup(grid, 59.005, 24.0) == 14.0        # equal-depth midpoint
    assert bathymetry_lookup(grid, 59.0, 24.005) == pytest.approx(16.0)  # midpoint of 14 and 18
    with pytest.raises(OutOfBounds):
        bathymetry_lookup(grid, 58.9, 24.0)


def test_bathymetry_continuous_across_cells(grid):
    eps = 1e-9
    below = bathymetry_lookup(grid, 59.01 - eps, 24.003)
    above = bathymetry_lookup(grid, 59.01 + eps, 24.003)
    assert below == pytest.approx(above, abs=1e-5)


def test_csv_round_trips(tmp_path):
    vol = tmp_path / "vol.csv"
    vol.write_text("level_m,volume_m3\n0,0\n1,1000\n2,2000\n")
    lev = tmp_path / "lev.csv"
    lev.write_text("time_s,level_m\n" + "".join(f"{2*i},{0.1*2*i}\n" for i in range(30)))
    series = LevelSeries.from_csv(lev, VolumeCurve.from_csv(vol))
    est = flow_rate_from_levels(series, window=58.0)
    assert est.rate == pytest.approx(100.0, rel=1e-9)

    bathy = tmp_path / "grid.csv"
    bathy.write_text("lat\\lon,24.0,24.01\n59.0,14,18\n59.01,14,18\n")
    grid = BathymetryGrid.from_csv(bathy)
    assert bathymetry_lookup(grid, 59.005, 24.005) == pytest.approx(16.0)
