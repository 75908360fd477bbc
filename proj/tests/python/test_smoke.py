import math

import numpy as np
import pytest

import lacvar


def test_sequences():
    seq = lacvar.sequence("geometric:1:2:10")
    assert len(seq) == 10
    assert seq[3] == 8.0
    assert seq.beta == 2.0
    assert lacvar.lacunary_gamma(1.5) == 3
    scales, origin = lacvar.refine(lacvar.validate_lacunary(np.array([1.0, 10.0]), 2.0))
    assert list(scales) == [1.0, 2.0, 4.0, 10.0]
    assert origin == [0, 3]


def test_bad_sequence_raises_with_code():
    with pytest.raises(lacvar.LacvarError) as info:
        lacvar.validate_lacunary(np.array([1.0, 2.0, 3.0]), 2.0)
    assert info.value.code == "RatioBelowBeta"
    assert info.value.index == 2
    assert isinstance(info.value, ValueError)


def test_variation_of_indicator():
    f = lacvar.GridFunction(0.0, 0.25, np.ones(4))
    seq = lacvar.sequence("geometric:1:2:41")
    v = lacvar.variation_at(f, seq, np.array([1.0, -1.0]), s=2.0, K=40)
    assert v[0] == pytest.approx(math.sqrt(1.0 / 3.0), rel=1e-12)
    assert v[1] == 0.0
    assert lacvar.average(f, 2.0, np.array([2.0]))[0] == pytest.approx(0.5)


def test_tail_error_names_required_truncation():
    f = lacvar.GridFunction(0.0, 1.0, np.ones(1))
    seq = lacvar.sequence("geometric:1:2:60")
    with pytest.raises(lacvar.LacvarError) as info:
        lacvar.variation_profile(f, seq, K=5)
    assert info.value.code == "TailTooLarge"
    assert info.value.index > 5


def test_profile_matches_pointwise():
    rng = np.random.default_rng(3)
    f = lacvar.GridFunction(0.0, 0.25, rng.uniform(-1, 1, 16))
    seq = lacvar.sequence("geometric:0.25:2:12")
    edges, values = lacvar.variation_profile(f, seq, K=11, waive_tail=True)
    assert len(edges) == len(values) + 1
    mids = 0.5 * (edges[1:] + edges[:-1])
    np.testing.assert_array_equal(values, lacvar.variation_at(f, seq, mids, K=11, waive_tail=True))


def test_multiplier():
    seq = lacvar.sequence("geometric:1:2:30")
    assert abs(lacvar.phi_hat(1.0, 0.0)) == pytest.approx(1.0)
    scan = lacvar.sup_scan(seq, np.geomspace(1e-6, 1e3, 400), 29)
    assert 0.0 < scan["sup_I"] < 24.0
    assert scan["sup_Q"] <= scan["sup_I"]


def test_verify_report():
    assert "indicator_identity" in lacvar.scenario_kinds()
    rep = lacvar.verify("indicator_identity")
    assert rep["pass"] is True
    assert "seconds" not in rep
    rep = lacvar.verify("weak_11", {"family": {"epsilons": [0.125]}})
    assert len(rep["cases"]) == 1
    with pytest.raises(lacvar.LacvarError) as info:
        lacvar.verify("strong_pp", {"colour": 1})
    assert info.value.code == "ScenarioInvalid"
