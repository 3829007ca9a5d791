"""Ground state, bubbles, stationarity and energy against symbolic oracles."""

from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from ecwave.core_fields import make_grid, state_from_functions
from ecwave.ground_state import (
    GROUND_STATE_ENERGY,
    GROUND_STATE_GRADIENT_SQ,
    Bubble,
    BubbleList,
    energy,
    eval_dW,
    eval_W,
    ground_state_data,
    nonlinearity,
    stationarity_residual,
    superpose,
)


def test_ground_state_solves_the_elliptic_equation_symbolically():
    r = sp.symbols("r", positive=True)
    W = 1 / sp.sqrt(sp.Rational(1, 3) + r**2)
    lap = sp.diff(W, r, 2) + 2 * sp.diff(W, r) / r
    assert sp.simplify(lap + W**5) == 0
    assert sp.simplify(sp.diff(W, r) - (-r * (sp.Rational(1, 3) + r**2) ** sp.Rational(-3, 2))) == 0


def test_energy_constants_from_beta_integrals():
    mpmath.mp.dps = 30
    grad = 4 * mpmath.pi * mpmath.quad(lambda r: r**4 * (mpmath.mpf(1) / 3 + r**2) ** -3,
                                       [0, 1, mpmath.inf])
    l6 = 4 * mpmath.pi * mpmath.quad(lambda r: r**2 * (mpmath.mpf(1) / 3 + r**2) ** -3,
                                     [0, 1, mpmath.inf])
    assert float(grad) == pytest.approx(GROUND_STATE_GRADIENT_SQ, rel=1e-14)
    assert float(l6) == pytest.approx(GROUND_STATE_GRADIENT_SQ, rel=1e-14)
    assert float(grad / 3) == pytest.approx(GROUND_STATE_ENERGY, rel=1e-14)


def test_eval_W_examples():
    assert eval_W(0.0) == pytest.approx(math.sqrt(3.0), rel=1e-15)
    assert eval_W(1.0) == pytest.approx((4 / 3) ** -0.5, rel=1e-15)
    assert eval_W(1.0, Bubble(-1, 1.0)) == pytest.approx(-(4 / 3) ** -0.5, rel=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-4, 1e4), st.floats(0.0, 1e3), st.sampled_from([-1, 1]))
def test_bubble_dilation_identity(lam, r, sign):
    assert eval_W(lam * r, Bubble(sign, lam)) == pytest.approx(
        sign * lam**-0.5 * eval_W(r), rel=1e-13)


def test_bubble_rejects_bad_parameters():
    with pytest.raises(ValueError):
        Bubble(1, 0.0)
    with pytest.raises(ValueError):
        Bubble(1, -1.0)
    with pytest.raises(ValueError):
        Bubble(2, 1.0)


def test_bubble_list_requires_decreasing_scales():
    with pytest.raises(ValueError):
        BubbleList.from_pairs([(1, 1.0), (1, 2.0)])
    bl = BubbleList.from_pairs([(1, 1.0), (-1, 1e-3)])
    assert bl.check_separation(1e-2) and not bl.check_separation(1e-3)
    np.testing.assert_array_equal(bl.signs, [1, -1])


def test_monotone_decay_and_normalization():
    r = np.linspace(0.0, 100.0, 10001)
    assert np.all(np.diff(eval_W(r)) < 0)
    for lam in (1e-2, 1.0, 1e2):
        x = 1e4 * lam
        assert x * eval_W(x, Bubble(1, lam)) == pytest.approx(lam**0.5, rel=1e-6)


def test_derivative_matches_finite_difference():
    r = np.linspace(0.1, 5.0, 50)
    h = 1e-6
    np.testing.assert_allclose(eval_dW(r), (eval_W(r + h) - eval_W(r - h)) / (2 * h), rtol=1e-8)


def test_nonlinearity_examples():
    assert nonlinearity(0.0) == 0.0
    assert nonlinearity(2.0) == 32.0
    assert nonlinearity(-2.0) == -32.0
    u = np.linspace(-3, 3, 101)
    assert np.all(np.diff(nonlinearity(u)) > 0)


@pytest.mark.xfail(strict=True, reason="max residual on [0.1, 10] with 1000 nodes is 4.7e-3; "
                                       "the O(h^2) constant near r = 0.1 exceeds 1e-3")
def test_stationarity_literal_threshold():
    assert stationarity_residual(make_grid(0.1, 10.0, 1000, "uniform")) <= 1e-3


def test_stationarity_second_order():
    a = stationarity_residual(make_grid(0.1, 10.0, 1000, "uniform"))
    b = stationarity_residual(make_grid(0.1, 10.0, 2000, "uniform"))
    assert 3.6 <= a / b <= 4.4


def test_stationarity_is_odd_symmetric():
    g = make_grid(0.1, 10.0, 500, "uniform")
    r = g.nodes
    assert stationarity_residual(g, -eval_W(r)) == stationarity_residual(g, eval_W(r))


def test_stationarity_needs_three_nodes():
    with pytest.raises(ValueError):
        stationarity_residual(make_grid(0.1, 1.0, 2, "uniform"))


def test_energy_of_zero_state():
    g = make_grid(1e-3, 10.0, 101)
    assert energy(state_from_functions(g, lambda r: 0 * r)) == 0.0


@pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
def test_energy_of_bubbles(lam):
    g = make_grid(1e-6 * lam, 1e6 * lam, 20001)
    assert energy(ground_state_data(g, Bubble(1, lam))) == pytest.approx(GROUND_STATE_ENERGY,
                                                                         rel=1e-9)


def test_superpose_matches_sum():
    g = make_grid(1e-6, 1e3, 2001)
    bl = BubbleList.from_pairs([(1, 1.0), (-1, 1e-2)])
    st = superpose(g, bl)
    np.testing.assert_allclose(st.u0.values, eval_W(g.nodes) - eval_W(g.nodes, Bubble(1, 1e-2)),
                               rtol=1e-14)
    np.testing.assert_array_equal(st.u1.values, 0.0)
