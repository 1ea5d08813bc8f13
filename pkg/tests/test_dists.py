import math

import numpy as np
import pytest
from scipy import stats

from aground.dists import (
    EmpiricalHistogram,
    LognormalMedianCov,
    Normal,
    ScaledBeta,
    TruncExp,
    Uniform,
    make_distribution,
    spec_of,
)
from aground.errors import InvalidParameter


def test_scaled_beta_moments_match_reported_prior():
    d = ScaledBeta(alpha=5, beta=2, lo=0, hi=15)
    assert d.mean() == pytest.approx(15 * 5 / 7, abs=1e-12)
    assert d.sd() == pytest.approx(15 * math.sqrt(10 / (49 * 8)), abs=1e-12)
    # reported to one decimal: 10.7 and 2.4
    assert round(d.mean(), 1) == 10.7
    assert round(d.sd(), 1) == 2.4


def test_uniform_moments():
    d = Uniform(200_000, 300_000)
    assert d.mean() == 250_000
    assert d.sd() == pytest.approx(100_000 / math.sqrt(12), abs=1e-6)
    assert round(d.sd()) == 28_868


def test_lognormal_median_property():
    d = LognormalMedianCov(median=1.0, cov=0.10)
    assert float(d.cdf(1.0)) == pytest.approx(0.5, abs=1e-12)
    # against scipy parameterization
    s = math.sqrt(math.log(1 + 0.1 ** 2))
    ref = stats.lognorm(s=s, scale=1.0)
    xs = np.array([0.5, 0.9, 1.0, 1.2, 2.0])
    np.testing.assert_allclose(d.cdf(xs), ref.cdf(xs), atol=1e-12)
    assert d.mean() == pytest.approx(ref.mean(), rel=1e-12)
    assert d.sd() == pytest.approx(ref.std(), rel=1e-12)


def test_normal_against_scipy():
    d = Normal(mu=2.0, sigma=3.0)
    xs = np.linspace(-8, 12, 9)
    np.testing.assert_allclose(d.cdf(xs), stats.norm(2, 3).cdf(xs), atol=1e-14)
    np.testing.assert_allclose(d.quantile([0.1, 0.5, 0.9]),
                               stats.norm(2, 3).ppf([0.1, 0.5, 0.9]), atol=1e-12)


def test_trunc_exp_calibration():
    d = TruncExp.from_mean(67.0, 0.0, 304.0)
    assert d.mean() == pytest.approx(67.0, abs=1e-9)
    # quadrature oracle for the truncated moments
    xs = np.linspace(0, 304, 200_001)
    pdf = d.rate * np.exp(-d.rate * xs)
    pdf /= np.trapezoid(pdf, xs)
    assert np.trapezoid(xs * pdf, xs) == pytest.approx(67.0, abs=1e-3)
    var = np.trapezoid((xs - 67.0) ** 2 * pdf, xs)
    assert d.sd() == pytest.approx(math.sqrt(var), rel=1e-6)
    # exponential signature: sd close to the mean
    assert 55 < d.sd() < 75


def test_trunc_exp_cdf_quantile_roundtrip():
    d = TruncExp(rate=0.015, lo=0.0, hi=316.0)
    ps = np.linspace(0.001, 0.999, 21)
    np.testing.assert_allclose(d.cdf(d.quantile(ps)), ps, atol=1e-12)


def test_histogram_basics():
    h = EmpiricalHistogram(edges=(0.0, 1.0, 3.0), masses=(0.25, 0.75))
    assert float(h.cdf(1.0)) == pytest.approx(0.25)
    assert float(h.quantile(0.25)) == pytest.approx(1.0)
    assert h.mean() == pytest.approx(0.25 * 0.5 + 0.75 * 2.0)
    with pytest.raises(InvalidParameter):
        EmpiricalHistogram(edges=(0.0, 1.0), masses=(0.5, 0.5))


def test_sampling_is_inverse_transform():
    d = ScaledBeta(alpha=5, beta=2, lo=0, hi=15)
    u = np.array([0.05, 0.5, 0.95])
    np.testing.assert_allclose(d.cdf(d.quantile(u)), u, atol=1e-10)


def test_make_distribution_roundtrip():
    specs = [
        {"family": "uniform", "lo": 0.0, "hi": 10.0},
        {"family": "beta", "alpha": 5.0, "beta": 2.0, "lo": 0.0, "hi": 15.0},
        {"family": "normal", "mean": 0.0, "sd": 0.24},
        {"family": "lognormal_median_cov", "median": 1.0, "cov": 0.1},
        {"family": "trunc_exp", "rate": 0.0149, "lo": 0.0, "hi": 304.0},
        {"family": "histogram", "edges": [0.0, 1.0, 2.0], "masses": [0.3, 0.7]},
    ]
    for spec in specs:
        d = make_distribution(spec)
        back = spec_of(d)
        assert make_distribution(back) == d


def test_make_distribution_rejects_bad_specs():
    with pytest.raises(InvalidParameter):
        make_distribution({"family": "cauchy"})
    with pytest.raises(InvalidParameter):
        make_distribution({"family": "normal", "mean": 0.0})
    with pytest.raises(InvalidParameter):
        make_distribution({})
    with pytest.raises(InvalidParameter):
        Normal(mu=0.0, sigma=-1.0)
    with pytest.raises(InvalidParameter):
        LognormalMedianCov(median=0.0, cov=0.1)
