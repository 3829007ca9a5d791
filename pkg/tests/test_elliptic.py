"""Corrector construction against the closed-form decaying solution."""

from __future__ import annotations

import math
import warnings

import mpmath
import numpy as np
import pytest
import sympy as sp

from ecwave.elliptic import (
    asymptotic_w_star,
    build_phi,
    empirical_c5,
    homogeneous_v,
    homogeneous_v_slope,
    mu0_gauss_legendre,
    ode_residual,
    phi_channel_norm,
    regular_solution,
    solve_w_star,
)

R = sp.symbols("r", positive=True)
Q = 5 / (sp.Rational(1, 3) + R**2) ** 2
V = R * (R**2 - sp.Rational(1, 3)) * (sp.Rational(1, 3) + R**2) ** sp.Rational(-3, 2)
# second homogeneous solution, ~ r at infinity and 1/sqrt(3) at the origin
V2 = (R**4 - 2 * R**2 + sp.Rational(1, 9)) * (sp.Rational(1, 3) + R**2) ** sp.Rational(-3, 2)
W_STAR = V2 - R


def w_star_oracle(r):
    mpmath.mp.dps = 40
    out = []
    for x in np.atleast_1d(r):
        x = mpmath.mpf(float(x))
        out.append(float((x**4 - 2 * x**2 + mpmath.mpf(1) / 9) * (mpmath.mpf(1) / 3 + x**2) ** -1.5
                         - x))
    return np.array(out)


def test_homogeneous_solutions_symbolically():
    for f in (V, V2):
        assert sp.simplify(sp.diff(f, R, 2) + Q * f) == 0
    assert sp.simplify(sp.diff(V, R) - (sp.Rational(5, 3) * R**2 - sp.Rational(1, 9))
                       * (sp.Rational(1, 3) + R**2) ** sp.Rational(-5, 2)) == 0


def test_closed_form_decaying_solution():
    assert sp.simplify(sp.diff(W_STAR, R, 2) + Q * (W_STAR + R)) == 0
    assert sp.limit(W_STAR * R, R, sp.oo) == sp.Rational(-5, 2)
    assert sp.simplify(W_STAR.subs(R, 0) - 1 / sp.sqrt(3)) == 0


def test_homogeneous_v_examples():
    assert homogeneous_v(1 / math.sqrt(3)) == pytest.approx(0.0, abs=1e-15)
    assert abs(homogeneous_v(1e6) - 1.0) < 1e-5
    r = np.geomspace(1e-3, 1e3, 100)
    f = sp.lambdify(R, sp.diff(V, R, 2) + Q * V, "numpy")
    np.testing.assert_allclose(f(r), 0.0, atol=1e-10)
    g = sp.lambdify(R, sp.diff(V, R), "numpy")
    np.testing.assert_allclose(homogeneous_v_slope(r), g(r), rtol=1e-12, atol=1e-15)


def test_mu0_matches_the_closed_form(w_star):
    assert w_star.mu0 == pytest.approx(1 / math.sqrt(3), rel=1e-10)
    assert w_star.slope0 == pytest.approx(-1.0, rel=1e-5)


def test_w_star_matches_the_closed_form(w_star):
    r = np.geomspace(1e-6, 1e5, 200)
    np.testing.assert_allclose(w_star(r), w_star_oracle(r), rtol=1e-8, atol=1e-12)


def test_w_star_at_100():
    val = w_star_oracle([100.0])[0]
    assert abs(val + 0.025) < 1e-4
    assert asymptotic_w_star(np.array([100.0]))[0][0] == pytest.approx(val, rel=1e-12)


def test_mu0_stable_under_refinement(w_star):
    coarse = solve_w_star(r_infinity=1e4, tol=2e-12)
    fine = solve_w_star(r_infinity=2e4, tol=1e-12)
    assert abs(fine.mu0 - coarse.mu0) <= 1e-6 * abs(fine.mu0)
    assert abs(mu0_gauss_legendre() - w_star.mu0) <= 1e-6 * abs(w_star.mu0)


def test_ode_residual(w_star):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = ode_residual(w_star, np.geomspace(1e-6, 1e4, 400))
    assert np.max(res) <= 1e-10


def test_regular_solutions_diverge():
    for slope in (-2.0, -0.5, 0.5):
        _, w = regular_solution(slope, 1e3)
        assert abs(w[-1]) > 10.0


def test_corrector_vanishes_at_the_matching_radius(w_star):
    sol = build_phi(100.0, w_star)
    assert abs(sol(np.array([100.0]))[0]) <= 1e-10


@pytest.mark.parametrize("c", [1e2, 1e3, 1e4])
def test_corrector_solves_the_linearized_equation(w_star, c):
    sol = build_phi(c, w_star)
    r = np.geomspace(1e-2, 50.0, 40)
    h = 1e-4 * r
    w = lambda x: sol(x) * x
    wpp = (w(r + h) - 2 * w(r) + w(r - h)) / h**2
    q = 5 / (1 / 3 + r * r) ** 2
    np.testing.assert_allclose(wpp, -q * (w(r) + r), rtol=1e-4, atol=1e-6)


def test_beta_scaling(w_star):
    prods = [abs(build_phi(c, w_star).beta) * c for c in (1e2, 1e3, 1e4)]
    assert max(prods) / min(prods) <= 2.0
    assert prods[-1] == pytest.approx(2.5, rel=1e-6)


def test_corrector_slope_matches_differences(w_star):
    sol = build_phi(100.0, w_star)
    r = np.geomspace(1e-2, 1e3, 30)
    h = 1e-5 * r
    np.testing.assert_allclose(sol.derivative(r), (sol(r + h) - sol(r - h)) / (2 * h),
                               rtol=1e-6, atol=1e-12)
    np.testing.assert_allclose(sol.phi.slope, sol.derivative(sol.phi.grid.nodes), rtol=1e-6,
                               atol=1e-12)


def test_band_radius(w_star):
    for c in (1e2, 1e4):
        sol = build_phi(c, w_star)
        r = np.geomspace(1e-8, sol.r4, 2000)
        ratio = r * sol(r) / sol.mu0
        assert sol.r4 > 0.1
        assert np.all((ratio >= 0.5) & (ratio <= 1.5))


def test_matching_radius_near_root_rejected(w_star):
    with pytest.raises(ValueError):
        build_phi(1 / math.sqrt(3), w_star)


def test_empirical_c5(w_star):
    c5 = empirical_c5(w_star)
    assert 1.0 <= c5 <= 10.0


def test_channel_norm_empty_and_scaling(w_star):
    sol = build_phi(2.0, w_star)
    assert phi_channel_norm(sol, 10.0, 1.0, 1.0).value == 0.0
    lams = np.array([1e2, 1e3, 1e4])
    vals = [phi_channel_norm(sol, lam, 0.0, 1.0).value for lam in lams]
    slope = np.polyfit(np.log(lams), np.log(vals), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.1)
    with pytest.raises(ValueError):
        phi_channel_norm(sol, 10.0, 2.0, 1.0)
