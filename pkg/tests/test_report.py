import numpy as np
import pytest

from aground.report import build_report, node_report


def test_interval_node_report(case1_session):
    net = case1_session.network
    rep = node_report(net, "D_t", case1_session.posteriors["D_t"])
    assert rep["kind"] == "interval"
    assert len(rep["masses"]) == len(rep["edges"]) - 1
    assert abs(sum(rep["masses"]) - 1.0) < 1e-9
    assert rep["edges"][0] <= rep["mean"] <= rep["edges"][-1]
    # exceedance is a tail distribution anchored at the edges
    exceed = rep["exceedance"]
    assert exceed[0]["p"] == pytest.approx(1.0, abs=1e-9)
    assert exceed[-1]["p"] == 0.0
    ps = [e["p"] for e in exceed]
    assert all(a >= b - 1e-12 for a, b in zip(ps, ps[1:]))


def test_exceedance_matches_cumulative(case1_session):
    net = case1_session.network
    masses = case1_session.posteriors["D_t"]
    rep = node_report(net, "D_t", masses)
    k = 10
    want = float(np.sum(masses[k:]))
    assert rep["exceedance"][k]["p"] == pytest.approx(want, abs=1e-12)


def test_dv_report_carries_breach_probability(scenario_b_session):
    rep = scenario_b_session.report(["D_t", "D_v", "Y_D"])
    assert rep["nodes"]["D_v"]["p_inner_hull_breach"] == 1.0
    assert rep["nodes"]["D_v"]["labels"][0] == "OB"
    assert "p_inner_hull_breach" not in rep["nodes"]["D_t"]


def test_report_rejects_bad_vector(case1_session):
    with pytest.raises(ValueError):
        node_report(case1_session.network, "D_t",
                    np.full(case1_session.network.card("D_t"), 0.5))


def test_build_report_query_subset(case1_session):
    rep = build_report(case1_session.network, case1_session.posteriors, ["D_t"])
    assert list(rep["nodes"]) == ["D_t"]
