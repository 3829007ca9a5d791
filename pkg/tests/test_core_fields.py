"""Grids, profiles, energy norms and space-time norms against closed forms."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from ecwave.core_fields import (
    DivergentNormError,
    ExcludedRegionError,
    GridError,
    RadialProfile,
    StatePair,
    channel,
    exterior,
    h_norm,
    l1l2_norm,
    make_grid,
    radial_integral,
    state_from_functions,
    static,
    y_norm,
)
from ecwave.ground_state import GROUND_STATE_GRADIENT_SQ, eval_W, ground_state_data, Bubble


def test_make_grid_rejects_bad_input():
    with pytest.raises(GridError):
        make_grid(0.0, 1.0, 10)
    with pytest.raises(GridError):
        make_grid(2.0, 1.0, 10)
    with pytest.raises(GridError):
        make_grid(1.0, 2.0, 1)
    with pytest.raises(GridError):
        make_grid(1.0, 2.0, 10, "chebyshev")


@pytest.mark.parametrize("scheme", ["uniform", "logarithmic"])
def test_grid_end_points_are_exact(scheme):
    g = make_grid(1e-3, 50.0, 101, scheme)
    assert g.nodes[0] == 1e-3 and g.nodes[-1] == 50.0
    assert np.all(np.diff(g.nodes) > 0)


def test_profile_validation():
    g = make_grid(1.0, 2.0, 5)
    with pytest.raises(ValueError):
        RadialProfile(g, np.zeros(4))
    with pytest.raises(ValueError):
        RadialProfile(g, np.zeros(5), tail_exponent=-1.0)
    with pytest.raises(ValueError):
        RadialProfile(g, np.zeros(5), slope=np.zeros(3))


def test_profile_without_tail_refuses_extrapolation():
    g = make_grid(1.0, 2.0, 5)
    p = RadialProfile(g, np.ones(5))
    with pytest.raises(ExcludedRegionError):
        p(np.array([3.0]))


def test_profile_power_tail_and_interior():
    g = make_grid(1e-3, 10.0, 2001)
    p = RadialProfile(g, 1.0 / g.nodes, tail_exponent=1.0)
    r = np.array([0.37, 5.0, 40.0, 1e4])
    np.testing.assert_allclose(p(r), 1.0 / r, rtol=1e-8)


def test_state_pair_requires_common_grid():
    a = make_grid(1.0, 2.0, 5)
    b = make_grid(1.0, 3.0, 5)
    with pytest.raises(ValueError):
        StatePair(RadialProfile(a, np.zeros(5)), RadialProfile(b, np.zeros(5)))


def test_radial_integral_of_gaussian():
    g = make_grid(1e-6, 20.0, 4001)
    val = radial_integral(g, np.exp(-g.nodes**2))
    assert val == pytest.approx(math.pi**1.5, rel=1e-9)


def test_gradient_norm_of_ground_state():
    g = make_grid(1e-6, 1e6, 20001)
    assert h_norm(ground_state_data(g)) ** 2 == pytest.approx(GROUND_STATE_GRADIENT_SQ, rel=1e-9)


@pytest.mark.parametrize("R", [0.1, 1.0, 30.0])
def test_exterior_energy_norm_of_ground_state(R):
    g = make_grid(1e-6, 1e6, 20001)
    oracle = quad(lambda r: 4 * math.pi * r**4 * (1 / 3 + r * r) ** -3, R, math.inf,
                  epsrel=1e-13)[0]
    assert h_norm(ground_state_data(g), R) ** 2 == pytest.approx(oracle, rel=1e-8)


@settings(max_examples=15, deadline=None)
@given(st.floats(1e-3, 1e3))
def test_energy_norm_is_dilation_invariant(lam):
    g = make_grid(1e-6 * lam, 1e6 * lam, 20001)
    st_lam = ground_state_data(g, Bubble(1, lam))
    assert h_norm(st_lam, 2.0 * lam) == pytest.approx(
        h_norm(ground_state_data(make_grid(1e-6, 1e6, 20001)), 2.0), rel=1e-8)


def test_slowly_decaying_tail_is_divergent():
    g = make_grid(1.0, 10.0, 101)
    state = state_from_functions(g, lambda r: r**-0.5, tail_exponent=0.5)
    with pytest.raises(DivergentNormError):
        h_norm(state)


def test_negative_radius_rejected():
    g = make_grid(1.0, 10.0, 11)
    with pytest.raises(ValueError):
        h_norm(state_from_functions(g, lambda r: 1 / r), -1.0)


def test_region_slices_and_cuts():
    reg = channel(1.0, 2.0, cap=10.0, floor=3.0)
    a, b = reg.slice(np.array([0.0, 2.0, -2.0]))
    np.testing.assert_allclose(a, [3.0, 3.0, 3.0])
    np.testing.assert_allclose(b, [2.0, 4.0, 4.0])
    assert reg.time_support() == pytest.approx(4.5)
    assert exterior(1.0).is_exterior and not reg.is_exterior
    with pytest.raises(ValueError):
        channel(2.0, 1.0)
    with pytest.raises(ValueError):
        channel(-1.0, 1.0)


@pytest.mark.parametrize("R0", [0.5, 1.0, 10.0])
def test_y_norm_of_inverse_radius(R0):
    # int |1/r|^10 4 pi r^2 over r > |t|+R0 is 4 pi / (7 (|t|+R0)^7)
    oracle = (2.0 * math.sqrt(4 * math.pi / 7) * 0.4 * R0**-2.5) ** 0.2
    v = y_norm(static(lambda r: 1.0 / r), exterior(R0), scales=(R0,))
    assert v.value == pytest.approx(oracle, rel=1e-8)
    assert v.abs_error_estimate < 1e-6 * oracle


def test_l1l2_norm_of_power_law():
    oracle = 4.0 * math.sqrt(4 * math.pi / 3)
    v = l1l2_norm(static(lambda r: r**-3.0), exterior(1.0))
    # the t^{-3/2} time tail beyond the last panel is reported, not added
    assert abs(v.value - oracle) <= v.abs_error_estimate
    assert v.value + v.tail_bound == pytest.approx(oracle, rel=1e-9)


def test_l1l2_norm_on_a_window():
    def inner(t):
        return math.sqrt(4 * math.pi * ((t + 1) ** 3 - t**3) / 3)
    oracle = quad(inner, 0.0, 1.0, epsrel=1e-13)[0]
    v = l1l2_norm(static(lambda r: np.ones_like(r)), channel(0.0, 1.0), t_window=(0.0, 1.0))
    assert v.value == pytest.approx(oracle, rel=1e-9)


def test_non_decaying_time_integrand_is_divergent():
    with pytest.raises(DivergentNormError):
        y_norm(static(lambda r: np.ones_like(r)), channel(0.0, 1.0))


@pytest.mark.parametrize("lam", [1e-2, 1.0, 1e2])
def test_y_norm_is_scale_invariant(lam):
    base = y_norm(static(eval_W), exterior(1.0)).value
    v = y_norm(static(lambda r: lam**-0.5 * eval_W(r / lam)), exterior(lam), scales=(lam,))
    assert v.value == pytest.approx(base, rel=1e-8)
