"""Smoke test for the smallgens Python module."""

import json

import smallgens_py as sg


def main():
    alg = sg.Algebra("2", "3")
    assert alg.is_division()
    assert alg.ramification()["finite_places"] == [2, 3]

    g = alg.element(["3", "2", "0", "0"])
    assert g.nrd() == "1" and g.trd() == "6"
    assert (g * g.inverse()).coords == ["1", "0", "0", "0"]
    assert g.classify()["kind"] == "hyperbolic"
    (lo, hi), _ = g.matrix()[0]
    assert lo <= 3 + 2 * 2**0.5 <= hi

    assert sg.hilbert_symbol("-1", "-1", 2) == -1
    assert sg.hilbert_symbol("-1", "-1", "inf") == -1
    assert sg.ramification_set("-1", "-1") == {"finite_places": [2], "infinite_ramified": True}

    lo, hi = sg.mahler_measure([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    assert 1.1762808 <= lo <= hi <= 1.1762809
    assert sg.is_salem([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])["is_salem"]

    w = sg.trace_window(2)
    assert w["lower"]["decimal"] == "1.414213562e0"
    assert abs(sg.delta_zero(2)[0] / 3.342e-7 - 1) < 1e-2
    assert sg.voutier_lower_bound(4)["informative"]
    assert sg.compute_safety_constant(100)["argmin_d"] == 2
    assert sg.decay_exponent("975/4096")["exact"] == "25/32"

    b = sg.generator_bound(1, "1", variant="congruence")
    assert b["base_exponent"]["value"]["exact"] == "384/5"
    assert b["vol_exponent"]["value"]["exact"] == "192/25"

    ball = alg.enumerate("10")
    assert len(ball) == 39
    census = alg.trace_census("10")
    assert census["census"]["violations"] == []
    cert = alg.verify_generation("29/4", "10")
    assert cert["certified"] == 39 and cert["inconclusive"] == 0

    report, csv, code = sg.run(json.dumps({"command": "window", "d": 2}))
    assert code == 0 and csv.startswith("d,lower,upper")
    assert json.loads(report)["results"]["status"] == "ok"
    print("smoke test passed")


if __name__ == "__main__":
    main()
