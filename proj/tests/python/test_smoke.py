import json
import math

import pytest

import adslab


def test_catalog_lists_metrics():
    ids = [e["id"] for e in adslab.catalog()]
    assert ids == ["hyperbolic", "ads-fg", "schwarzschild-ads", "flat", "ads-soliton"]
    soliton = adslab.catalog()[-1]
    assert not soliton["static_triple"]


def test_verify_hyperbolic():
    reports = adslab.verify("hyperbolic", 3, identities=["static", "bochner"], samples=10)
    assert [r["name"] for r in reports] == ["static", "bochner"]
    assert all(r["pass"] for r in reports)
    assert reports[0]["points"] == 10


def test_bochner_plus_fails():
    (report,) = adslab.verify("hyperbolic", 3, identities=["bochner-plus"], samples=5)
    assert not report["pass"]


def test_mass_schwarzschild_ads():
    m = adslab.mass("schwarzschild-ads", 3, {"M": 1.0})
    assert m["scalar_mass"] == pytest.approx(8 * math.pi / 3, rel=1e-6)
    assert m["alpha_mean"] == pytest.approx(-2 / 3, rel=1e-6)
    assert m["inequality"]


def test_errors_are_raised():
    with pytest.raises(adslab.Error, match="unknown metric"):
        adslab.verify("nope")
    with pytest.raises(adslab.Error, match="not a sphere"):
        adslab.mass("ads-soliton", 4)


def test_run_cli():
    code, out, err = adslab.run_cli(["verify", "--metric", "ads-fg", "--identity", "static", "--samples", "3"])
    assert code == 0 and err == ""
    assert json.loads(out)["identities"][0]["pass"]
    code, _, err = adslab.run_cli(["mass", "--metric", "ads-soliton", "--n", "4", "--r0", "1"])
    assert code == 2
    assert "conformal infinity is not a sphere" in err
