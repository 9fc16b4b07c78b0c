"""Smoke test for the Python bindings. Run after `pip install ./crates/python`."""

import json
from pathlib import Path

import linegroupoid as lg

FIXTURES = Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"


def close(a, b, tol):
    return all(abs(x - y) <= tol for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def main():
    g = lg.LorentzElement.random(3, seed=1)
    s, y, rot = g.iwasawa_cb()
    rebuilt = lg.boost(s, y) @ lg.LorentzElement([[1.0] + [0.0] * 4] + [[0.0] + row for row in rot])
    assert rebuilt.distance(g) < 1e-10, rebuilt.distance(g)

    gi = g.groupoid_inverse()
    assert gi.groupoid_inverse().distance(g) < 1e-9

    z = g.project()
    assert abs(sum(p * v for p, v in zip(z.p, z.v))) < 1e-10
    unit = z.inverse().multiply(z)
    assert unit.distance(z.source()) < 1e-8

    try:
        lg.LorentzElement([[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    except ValueError as e:
        assert "metric" in str(e)
    else:
        raise AssertionError("non-Lorentz matrix accepted")

    out = json.loads(lg.quotient((FIXTURES / "s3_groupoid.json").read_text(), (FIXTURES / "s3_inner_action.json").read_text()))
    assert out["status"] == "violation" and len(out["witness"]["triple"]) == 3

    d = json.loads(lg.decompose((FIXTURES / "lorentz_matrix.json").read_text()))
    assert d["residual_bc"] < 1e-12 and d["residual_cb"] < 1e-12

    ok, report = lg.run_suites(n=2, samples=20, suites=["iwasawa", "poisson"], tol={"recon": 1e-9})
    records = [json.loads(line) for line in report.splitlines()]
    assert ok and records[-1]["kind"] == "summary" and records[-1]["pass"]

    print(f"ok: {records[-1]['checks']} checks, quotient witness {out['witness']['triple']}")


if __name__ == "__main__":
    main()
