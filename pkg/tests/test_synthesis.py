import numpy as np
import pytest
from scipy import stats

from aground.dists import LognormalMedianCov, Normal, ScaledBeta, Uniform
from aground.errors import DegenerateCell, InvalidParameter, SupportMismatch
from aground.synthesis import BinningPolicy, NoiseModel, SynthesisConfig, functional_cpt, prior_table

CFG = SynthesisConfig(samples_per_cell=256, seed=42)


# --- binning -----------------------------------------------------------------

def test_uniform_and_width_binning():
    b = BinningPolicy.uniform(0, 10, 10)
    assert b.n_bins == 10
    w = BinningPolicy.by_width(0.0, 52.4, 1.0)
    assert w.n_bins == 53
    assert w.edges[-1] == 52.4
    assert w.edges[-2] == 52.0
    exact = BinningPolicy.by_width(0.0, 60.0, 1.0)
    assert exact.n_bins == 60


def test_geometric_binning_with_zero_bin():
    b = BinningPolicy.geometric(10.0, 1000.0, 4, zero_bin=True)
    assert b.edges[0] == 0.0
    assert b.edges[1] == 10.0
    ratios = np.diff(np.log(np.asarray(b.edges[1:])))
    np.testing.assert_allclose(ratios, ratios[0])


def test_binning_validation():
    with pytest.raises(InvalidParameter):
        BinningPolicy.explicit([0.0, 1.0])  # single bin
    with pytest.raises(InvalidParameter):
        BinningPolicy.explicit([0.0, 2.0, 1.0])


# --- priors ------------------------------------------------------------------

def test_uniform_prior_equal_masses():
    probs = prior_table(Uniform(0, 10), BinningPolicy.uniform(0, 10, 10))
    np.testing.assert_allclose(probs, np.full(10, 0.1), atol=1e-14)


def test_standard_normal_prior_masses():
    bins = BinningPolicy.explicit([-5.0, -1.0, 0.0, 1.0, 5.0])
    probs = prior_table(Normal(0, 1), bins)
    phi = stats.norm.cdf
    inside = phi(5) - phi(-5)
    expected = np.diff(phi([-5, -1, 0, 1, 5])) / inside
    np.testing.assert_allclose(probs, expected, atol=1e-12)
    assert probs.sum() == pytest.approx(1.0, abs=1e-12)


def test_beta_prior_binned_mean():
    d = ScaledBeta(5, 2, 0, 15)
    bins = BinningPolicy.by_width(0, 15, 1.0)
    probs = prior_table(d, bins)
    mids = 0.5 * (bins.edge_array()[:-1] + bins.edge_array()[1:])
    binned_mean = float(np.dot(probs, mids))
    assert abs(binned_mean - d.mean()) < 0.5  # half a bin width
    assert abs(binned_mean - 10.7) < 0.05


def test_prior_mean_within_half_bin_across_families():
    cases = [
        (Uniform(3, 9), BinningPolicy.uniform(3, 9, 12)),
        (Normal(0, 1), BinningPolicy.uniform(-4, 4, 16)),
        (LognormalMedianCov(2.0, 0.3), BinningPolicy.uniform(0.01, 8, 32)),
    ]
    for dist, bins in cases:
        probs = prior_table(dist, bins)
        edges = bins.edge_array()
        mids = 0.5 * (edges[:-1] + edges[1:])
        width = float(np.max(np.diff(edges)))
        assert abs(float(np.dot(probs, mids)) - dist.mean()) < 0.5 * width


def test_support_mismatch_when_truncation_disabled():
    with pytest.raises(SupportMismatch):
        prior_table(Normal(0, 1), BinningPolicy.uniform(10, 12, 4), truncate=False)
    # inside the support it works either way
    probs = prior_table(Normal(0, 1), BinningPolicy.uniform(-8, 8, 8), truncate=False)
    assert probs.sum() == pytest.approx(1.0, abs=1e-12)


# --- functional CPTs ----------------------------------------------------------

def test_degenerate_parent_with_symmetric_noise_splits_mass():
    child = BinningPolicy.explicit([-8.0, 0.0, 8.0])
    parent = BinningPolicy.explicit([-1e-9, 0.0, 1e-9])  # ~point mass at 0
    table = functional_cpt(child, [parent], lambda x: x,
                           NoiseModel.additive(Normal(0, 1)), CFG, tag="X")
    np.testing.assert_allclose(table.probs, [[0.5, 0.5], [0.5, 0.5]], atol=1e-6)


def test_identity_map_uniform_cell_split():
    child = BinningPolicy.explicit([0.0, 0.5, 1.0])
    parent = BinningPolicy.explicit([0.0, 1.0, 2.0])
    table = functional_cpt(child, [parent], lambda x: x, NoiseModel.none(), CFG, tag="X")
    # stratified sampling puts exactly half the samples in each half-cell
    np.testing.assert_allclose(table.probs[0], [0.5, 0.5], atol=1e-12)
    # the [1, 2) cell maps above the child range and clamps to the top bin
    np.testing.assert_allclose(table.probs[1], [0.0, 1.0], atol=1e-12)


def test_doubling_map_pushforward():
    child = BinningPolicy.uniform(0, 8, 8)
    parent = BinningPolicy.explicit([0.0, 1.0, 2.0])
    table = functional_cpt(child, [parent], lambda x: 2 * x, NoiseModel.none(), CFG, tag="X")
    row = table.probs[1]  # parent bin [1, 2) -> child uniform on [2, 4)
    np.testing.assert_allclose(row[2:4], [0.5, 0.5], atol=1e-12)
    assert row[:2].sum() == 0.0 and row[4:].sum() == 0.0


def test_rows_sum_to_one_within_tolerance():
    child = BinningPolicy.uniform(0, 100, 25)
    parents = [BinningPolicy.uniform(0, 10, 12), 3]
    table = functional_cpt(child, parents, lambda x, k: x * (k + 1.0),
                           NoiseModel.multiplicative(LognormalMedianCov(1, 0.2)), CFG, tag="Y")
    assert table.probs.shape == (36, 25)
    np.testing.assert_allclose(table.probs.sum(axis=1), 1.0, atol=1e-12)


def test_multiplicative_median_preserved():
    # bins with an edge exactly at the mapped value: mass splits 0.5 / 0.5
    child = BinningPolicy.explicit([0.0, 1.5, 3.0, 4.5, 6.0])
    parent = BinningPolicy.explicit([3.0 - 1e-9, 3.0, 3.0 + 1e-9])
    table = functional_cpt(child, [parent], lambda x: x,
                           NoiseModel.multiplicative(LognormalMedianCov(1, 0.25)),
                           CFG, tag="X")
    below = table.probs[:, :2].sum(axis=1)
    np.testing.assert_allclose(below, 0.5, atol=1e-6)


def test_multiplicative_zero_value_point_mass():
    child = BinningPolicy.uniform(0, 4, 4)
    parent = BinningPolicy.explicit([0.0, 1.0, 2.0])
    table = functional_cpt(child, [parent], lambda x: np.zeros_like(x),
                           NoiseModel.multiplicative(LognormalMedianCov(1, 0.1)),
                           CFG, tag="X")
    np.testing.assert_allclose(table.probs[:, 0], 1.0, atol=1e-12)


def test_noise_selected_by_categorical_parent():
    child = BinningPolicy.uniform(0, 20, 40)
    parents = [BinningPolicy.explicit([10.0 - 1e-6, 10.0, 10.0 + 1e-6]), 2]

    def pick(cell):
        return NoiseModel.multiplicative(LognormalMedianCov(1, 0.1 if cell[1] == 0 else 0.3))

    table = functional_cpt(child, parents, lambda x, q: x, pick, CFG, tag="Zq")
    mids = 0.5 * (child.edge_array()[:-1] + child.edge_array()[1:])
    sds = []
    for row in table.probs:
        m = np.dot(row, mids)
        sds.append(np.sqrt(np.dot(row, (mids - m) ** 2)))
    # rows for the 'poor' state are clearly wider
    assert sds[1] > 2 * sds[0]
    assert sds[3] > 2 * sds[2]


def test_aux_input_spreads_mass():
    child = BinningPolicy.uniform(0, 2, 50)
    parent = BinningPolicy.explicit([1.0 - 1e-9, 1.0, 1.0 + 1e-9])
    table = functional_cpt(child, [parent], lambda x, c: x * c, NoiseModel.none(),
                           CFG, tag="X", aux=[Normal(1.0, 0.05)])
    row = table.probs[0]
    mids = 0.5 * (child.edge_array()[:-1] + child.edge_array()[1:])
    m = float(np.dot(row, mids))
    sd = float(np.sqrt(np.dot(row, (mids - m) ** 2)))
    assert m == pytest.approx(1.0, abs=0.01)
    assert sd == pytest.approx(0.05, abs=0.02)


def test_degenerate_cell_raises():
    child = BinningPolicy.uniform(0, 4, 4)
    parent = BinningPolicy.explicit([0.0, 1.0, 6.0])
    with pytest.raises(DegenerateCell), np.errstate(invalid="ignore"):
        functional_cpt(child, [parent], lambda x: np.sqrt(x - 5.0), NoiseModel.none(), CFG, tag="X")


def test_fixed_seed_reproducible_and_tag_keyed():
    child = BinningPolicy.uniform(0, 30, 30)
    parent = BinningPolicy.uniform(0, 10, 8)
    noise = NoiseModel.multiplicative(LognormalMedianCov(1, 0.15))
    a = functional_cpt(child, [parent], lambda x: 2.5 * x, noise, CFG, tag="A")
    b = functional_cpt(child, [parent], lambda x: 2.5 * x, noise, CFG, tag="A")
    c = functional_cpt(child, [parent], lambda x: 2.5 * x, noise, CFG, tag="C")
    other_seed = functional_cpt(child, [parent], lambda x: 2.5 * x, noise,
                                SynthesisConfig(samples_per_cell=256, seed=43), tag="A")
    assert a.probs.tobytes() == b.probs.tobytes()
    assert a.probs.tobytes() != c.probs.tobytes()
    assert a.probs.tobytes() != other_seed.probs.tobytes()


def test_doubling_samples_small_perturbation():
    child = BinningPolicy.uniform(0, 30, 30)
    parent = BinningPolicy.uniform(0, 10, 8)
    noise = NoiseModel.multiplicative(LognormalMedianCov(1, 0.15))
    base = functional_cpt(child, [parent], lambda x: 2.5 * x, noise, CFG, tag="A")
    double = functional_cpt(child, [parent], lambda x: 2.5 * x, noise,
                            SynthesisConfig(samples_per_cell=512, seed=42), tag="A")
    assert np.max(np.abs(base.probs - double.probs)) < 0.02


def test_noise_model_validation():
    with pytest.raises(InvalidParameter):
        NoiseModel.multiplicative(Normal(0, 1))  # support crosses zero
    with pytest.raises(InvalidParameter):
        NoiseModel(kind="none", dist=Normal(0, 1))
    with pytest.raises(InvalidParameter):
        NoiseModel(kind="additive")
