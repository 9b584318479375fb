import math

import numpy as np
import pytest

import yieldcast as yc


@pytest.fixture(scope="module")
def scenario(tmp_path_factory):
    d = tmp_path_factory.mktemp("synth")
    sc = yc.synth("PEAK_LINEAR", 5, 2002, 2018, 0.05, 3, "barley")
    for name in ("timeseries", "yields", "units"):
        (d / f"{name}.csv").write_text(sc[name])
    return d, sc


def test_version():
    assert yc.__version__


def test_dataset_from_csv(scenario):
    d, sc = scenario
    ds = yc.Dataset.from_csv(str(d / "timeseries.csv"), str(d / "yields.csv"), str(d / "units.csv"))
    assert ds.crop == "barley"
    assert len(ds.units) == 5
    ds.require_complete()
    assert set(ds.production_weights()) == set(ds.units)


def test_feature_matrix(scenario):
    _, sc = scenario
    fm = yc.feature_matrix(sc["dataset"], "RS", 6, True)
    x = np.asarray(fm["x"])
    assert x.shape == (85, 2 * 6 + 5)
    assert fm["n_continuous"] == 12
    assert fm["columns"][0] == "ND_Nov"
    picks = yc.mrmr_select(x[:, :12], np.asarray(fm["y"]), 3)
    assert len(picks) == 3


def test_hindcast_and_report(scenario):
    _, sc = scenario
    ds = sc["dataset"]
    res = yc.run_hindcast(ds, 6, ["LASSO/RS/all/ohe", "NULL"], grid_subset={"LASSO": [3, 7]})
    assert len(res) == 2
    lasso = res[0]
    assert len(lasso["records"]) == 85
    mean = float(np.mean([r[2] for r in lasso["records"]]))
    rep = yc.compute_report(lasso["records"], mean, ds.production_weights())
    assert rep["rRMSEp"] > 0
    assert yc.grid_size("LASSO") == 13


def test_compare():
    a = {2000 + i: 10.0 + i % 3 for i in range(17)}
    b = {y: v + 20.0 for y, v in a.items()}
    out = yc.compare(b, a, 5.0, 0.9)
    assert out["verdict"] == "Larger"
    assert math.isclose(out["p_smaller"] + out["p_equivalent"] + out["p_larger"], 1.0)
    assert yc.percentile_rank(25, [10, 20, 30]) == pytest.approx(200 / 3)


def test_errors_carry_codes(tmp_path):
    with pytest.raises(yc.YieldcastError) as e:
        yc.Dataset.from_csv(str(tmp_path / "a.csv"), str(tmp_path / "b.csv"), str(tmp_path / "c.csv"))
    assert e.value.code == "InputMissing"


def test_dataset_from_text(scenario):
    _, sc = scenario
    ds = yc.Dataset.from_text(sc["timeseries"], sc["yields"], sc["units"])
    assert ds.units == sc["dataset"].units
