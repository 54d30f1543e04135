import math

import pytest

import conelab


def test_lambda0_simons():
    assert conelab.lambda0_closed_form(3, 3) == pytest.approx(5 / 6)
    result = conelab.lambda0(3, 3)
    assert result["lambda0"] == pytest.approx(5 / 6, abs=1e-3)
    for seq in result["lambda_sequence"]:
        assert all(b <= a for a, b in zip(seq, seq[1:]))


def test_indicial_root_solves_quadratic():
    alpha, conjugate = conelab.indicial_exponent(3, 3, 0.5)
    c = (5 / 24 + 0.5) * 6
    assert alpha * alpha + 5 * alpha + c == pytest.approx(0.0, abs=1e-12)
    assert alpha + conjugate == pytest.approx(-5.0)


def test_deflection_law():
    mu = 1e-4
    assert conelab.deflection_radius(3, 3, -1.0, mu) == pytest.approx(mu ** (1 / 5), rel=1e-8)


def test_kappa_difference_is_exact():
    assert conelab.kappa_difference(7) == (1, 4 * 6 * 5)


def test_covering_instance():
    out = conelab.covering(2, 200, 20, seed=3)
    assert out["separation"] and out["exclusion"] and out["cover"]
    assert out == conelab.covering(2, 200, 20, seed=3)


def test_h_profile_symmetry():
    v, d1, d2 = conelab.h_eval(10.0, 0.1, 0.05)
    w, e1, e2 = conelab.h_eval(10.0, 0.1, -0.05)
    assert v == pytest.approx(w)
    assert d1 == pytest.approx(-e1)
    assert d2 >= 0 and math.isclose(d2, e2)


def test_scenarios_and_errors():
    assert "lambda0-simons" in conelab.list_scenarios()
    report = conelab.run_scenario("dimshift-table")
    assert report["status"] == "pass"
    with pytest.raises(conelab.Error):
        conelab.run_scenario("no-such-scenario")
    with pytest.raises(conelab.Error):
        conelab.deflection_radius(3, 3, 0.5, 1e-3)
