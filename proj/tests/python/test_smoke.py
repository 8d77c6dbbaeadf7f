import json
import math

import pytest

import betadual


def test_hermite_zeros():
    z = betadual.poly_zeros("hermite", 3)
    assert z[0] == pytest.approx(-math.sqrt(1.5), abs=1e-14)
    assert z[1] == pytest.approx(0.0, abs=1e-15)


def test_series_duality_w3():
    rep = betadual.dual_check("w3", 6)
    assert rep["pass"]
    assert len(rep["records"]) == 7


def test_laguerre_variant_map_fails():
    assert not betadual.dual_check("laguerre-finite-variant", 1)["pass"]


def test_moments_text():
    m = betadual.moments_text("g", 2)
    assert len(m) == 5
    assert m[1] == "0"


def test_crystallize_matches_zeros():
    r = betadual.crystallize("j", 5, 2.0, 3.0)
    z = betadual.poly_zeros("jacobi", 5, "2", "3")
    assert r["converged"]
    assert max(abs(x - y) for x, y in zip(r["configuration"], z)) < 1e-10


def test_harmonic_value():
    assert betadual.harmonic_two_point(4, 3.0, 4.0) == pytest.approx(0.04699889727849834, rel=1e-12)


def test_density_and_resolvent():
    assert betadual.density_moment(0, 1.0) == pytest.approx(1.0, abs=1e-6)
    assert betadual.high_temp_resolvent(2.0, -3.0) == pytest.approx(5 / 14, rel=1e-13)
    with pytest.raises(betadual.PoleError):
        betadual.high_temp_resolvent(0.0, -3.0)


def test_sampling_is_reproducible():
    a = betadual.sample_spectrum("l", 3, 2.0, 1.0, seed=4, index=2)
    b = betadual.sample_spectrum("l", 3, 2.0, 1.0, seed=4, index=2)
    assert a == b and a == sorted(a)
    est = betadual.mc_moments("g", 2, 1.0, k_max=2, samples=20000)
    assert abs(est[1]["estimate"] - betadual.exact_moment("g", 2, 1.0, k=2)) < 4 * est[1]["std_error"]


def test_cli_in_process():
    code, out, _ = betadual.cli("catalan-check", "--order", "4")
    assert code == 0
    assert json.loads(out)["pass"]
    assert betadual.cli("zeros", "--nope")[0] == 2


def test_bad_arguments_raise():
    with pytest.raises(ValueError):
        betadual.poly_zeros("q", 3)
