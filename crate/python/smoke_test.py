"""Smoke test for the salab Python bindings.

Build and install first:
    pip install maturin
    pip install --no-build-isolation -e crates/salab-py
"""

import json
import pathlib

import salab

ROOT = pathlib.Path(__file__).resolve().parent.parent


def test_exterior_calculus():
    f = "z1^2*zb2*dz2 + zb1*dzb2"
    assert salab.normalize("dz1^dz2 + dz2^dz1", 2) == "0"
    assert salab.d(f, 2) == salab.normalize(salab.del_(f, 2) + " + " + salab.delbar(f, 2), 2)
    assert salab.d(salab.d(f, 2), 2) == "0"
    assert salab.wedge("dz1", "dz2", 2) == salab.normalize("-dz2^dz1", 2)
    assert salab.bidegrees("z1*dz1^dzb2 + dz2", 2) == [(1, 0), (1, 1)]
    assert salab.delbar("z1*dz2", 2) == "0"


def test_chern_simons_transgression():
    theta = [["zb1*dz2", "z1*dz1"], ["dzb1", "0"]]
    cs = salab.chern_simons(theta, 2)
    assert salab.bidegrees(cs, 2) == [(2, 1)]
    assert set(salab.bidegrees(salab.d(cs, 2), 2)) <= {(2, 2)}


def test_scenarios():
    code, report = salab.run_scenario((ROOT / "scenarios" / "trivial_courant.json").read_text())
    assert code == 0
    assert all(c["status"] == "pass" for c in json.loads(report)["commands"])
    code, report = salab.run_scenario((ROOT / "scenarios" / "broken_d1.json").read_text())
    assert code == 1
    code, _ = salab.run_scenario((ROOT / "scenarios" / "missing_object.json").read_text())
    assert code == 2


def test_fuzz():
    clean = json.loads(salab.fuzz(seed=1, cases=9))
    assert clean["counterexample"] is None
    assert "group-product" in salab.mutations()
    broken = json.loads(salab.fuzz(cases=50, mutation="dorfman:curvature"))
    assert broken["counterexample"] is not None


def test_errors():
    try:
        salab.normalize("dz9", 2)
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range index accepted")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
