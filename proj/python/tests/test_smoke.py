import numpy as np
import pytest

import evospec


def test_presets_listed():
    names = evospec.presets()
    assert "ar1-cosine" in names
    assert "arch1-sine" in names


def test_simulate_is_reproducible():
    a = evospec.simulate("ar1-cosine", 400, seed=3)
    b = evospec.simulate("ar1-cosine", 400, seed=3)
    c = evospec.simulate("ar1-cosine", 400, seed=4)
    assert a.shape == (400,)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_simulate_from_spec_dict():
    spec = {"kind": "tv_ar1", "coefficients": {"a": 0.4}}
    x = evospec.simulate(spec, 300, seed=1)
    assert np.all(np.isfinite(x))


def test_estimate_shape_and_sign():
    x = evospec.simulate("ar1-cosine", 800, seed=5)
    out = evospec.estimate(x, n=60, B=14)
    values = out["payload"]["values"]
    assert values.shape == (len(out["grid"]["u"]), 15)
    assert out["meta"]["tuning"] == "fixed"


def test_partial_tuning_rejected():
    x = evospec.simulate("ar1-cosine", 400, seed=5)
    with pytest.raises(ValueError):
        evospec.estimate(x, n=60)


def test_scr_bands_bracket_center():
    x = evospec.simulate("ar1-cosine", 800, seed=6)
    out = evospec.scr(x, n_mc=100)
    p = out["payload"]
    assert out["meta"]["tuning"] == "mv"
    assert np.all(p["lower"] >= 0)
    assert np.all(p["lower"] <= p["center"])
    assert np.all(p["center"] <= p["upper"])


def test_p_value_in_unit_interval():
    x = evospec.simulate("arch1-drift", 400, seed=7, delta=0.3)
    out = evospec.test(x, "stationarity", n=54, B=16, n_mc=100)
    assert 0.0 <= out["payload"]["p_value"] <= 1.0
    assert out["payload"]["null_surface"].shape == out["payload"]["estimate"].shape


def test_mv_select_within_range():
    x = evospec.simulate("ar1-cosine", 800, seed=8)
    sel = evospec.mv_select(x)
    lo, hi = sel["n_range"]
    assert lo <= sel["n"] <= hi
    assert sel["B_n"] < sel["n"]


def test_fit_tvarma_tracks_drift():
    x = evospec.simulate("ar1-linear-drift", 1600, seed=9)
    model = evospec.fit_tvarma(x, 1, 0, window=120)["model"]
    assert model["p"] == 1
    assert len(model["ar"]) == len(model["u"])
    assert 0.2 < np.mean(model["ar"]) < 0.6
