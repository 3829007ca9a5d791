"""Bubble extraction against independently bracketed crossings."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from ecwave.core_fields import GridError, make_grid, state_from_functions
from ecwave.decomposition import (
    CASE_COMPLETE,
    CASE_EXTERIOR,
    DecompositionResult,
    extract_bubbles,
    ratio_report,
    remainder_state,
    threshold,
)
from ecwave.ground_state import BubbleList, eval_W, superpose
from ecwave.linear_radiation import data_from_profile, indicator_profile

GRID = make_grid(1e-13, 1e6, 8001)


def synthetic(pairs, grid=GRID):
    bl = BubbleList.from_pairs(pairs)
    return superpose(grid, bl), bl


def test_threshold_value():
    assert threshold(100.0) == pytest.approx(10.0 / math.sqrt(1 / 3 + 1e4), rel=1e-15)


@pytest.mark.parametrize("sign,lam", [(1, 1.0), (-1, 3e-2), (1, 250.0)])
def test_single_bubble_is_exact(sign, lam):
    state, _ = synthetic([(sign, lam)])
    res = extract_bubbles(state)
    assert res.J == 1 and res.bubbles[0].sign == sign
    assert res.bubbles[0].scale == pytest.approx(lam, rel=1e-9)
    assert res.case_tag == CASE_COMPLETE
    assert res.residual_full < 1e-8


def test_inductive_pass_matches_bracketed_crossings():
    pairs = [(1, 1.0), (-1, 1e-3)]
    state, bl = synthetic(pairs)
    c2 = 100.0
    theta = threshold(c2)
    res = extract_bubbles(state, c2=c2)
    # outermost crossing of the full profile
    f = lambda r: math.sqrt(r) * abs(float(bl(np.array([r]))[0])) - theta
    r1 = brentq(f, 10.0, 1e4, xtol=1e-14, rtol=1e-15)
    assert res.bubbles[0].scale == pytest.approx(r1 / c2, rel=1e-9)
    # next crossing with the first extracted bubble removed
    b1 = res.bubbles[0]
    g = lambda r: math.sqrt(r) * abs(float(bl(np.array([r]))[0] - b1(np.array([r]))[0])) - theta
    lo = 1e-3 * c2 * 0.5
    r2 = brentq(g, lo, 0.99 * b1.scale, xtol=1e-300, rtol=1e-15)
    assert res.bubbles[1].scale == pytest.approx(r2 / c2, rel=1e-9)
    assert res.bubbles[1].sign == -1


def test_refinement_recovers_scales():
    pairs = [(1, 1.0), (-1, 1e-4), (1, 1e-8)]
    state, bl = synthetic(pairs)
    raw = extract_bubbles(state)
    ref = extract_bubbles(state, refine=True)
    assert ref.refined and not raw.refined
    np.testing.assert_array_equal(ref.bubbles.signs, bl.signs)
    np.testing.assert_allclose(ref.bubbles.scales, bl.scales, rtol=1e-9)
    assert np.max(np.abs(raw.bubbles.scales / bl.scales - 1)) > 1e-3
    assert np.max(ref.posthoc_zeros) < 1e-6
    assert np.max(raw.posthoc_zeros) < 1e-6


def test_free_wave_is_subtracted():
    grid = make_grid(1e-9, 1e6, 6001)
    vL = data_from_profile(indicator_profile(20.0, 40.0, 0.3), grid)
    bl = BubbleList.from_pairs([(1, 1.0), (1, 1e-4)])
    bubbles = superpose(grid, bl)
    state = type(bubbles)(bubbles.u0.with_values(bubbles.u0.values + vL.u0.values),
                          bubbles.u1.with_values(vL.u1.values))
    res = extract_bubbles(state, vL, refine=True)
    np.testing.assert_allclose(res.bubbles.scales, bl.scales, rtol=1e-8)


def test_exterior_case_when_n_max_reached():
    state, _ = synthetic([(1, 1.0), (1, 1e-4), (-1, 1e-8)])
    res = extract_bubbles(state, n_max=2)
    assert res.J == 2 and res.case_tag == CASE_EXTERIOR
    assert res.residual_full is None and res.residual_exterior is not None


def test_short_grid_is_reported():
    state, _ = synthetic([(1, 1.0)], make_grid(1e-3, 50.0, 2001))
    with pytest.raises(GridError):
        extract_bubbles(state)
    # after one extraction the remainder is still above threshold at the innermost node
    grid = make_grid(1e-3, 1e3, 4001)
    state = state_from_functions(grid, lambda r: 2.0 * np.exp(-r * r) / np.sqrt(r))
    with pytest.raises(GridError, match="innermost"):
        extract_bubbles(state)


def test_parameter_validation():
    state, _ = synthetic([(1, 1.0)])
    with pytest.raises(ValueError):
        extract_bubbles(state, c2=5.0)
    with pytest.raises(ValueError):
        extract_bubbles(state, n_max=0)


def test_zero_state_has_no_bubbles():
    state, _ = synthetic([(1, 1.0)])
    zero = type(state)(state.u0.with_values(0 * state.u0.values), state.u1)
    res = extract_bubbles(zero)
    assert res.J == 0 and res.residual_full == 0.0


def test_ratio_report():
    state, _ = synthetic([(1, 1.0), (1, 1e-4), (1, 1e-8)])
    res = extract_bubbles(state, refine=True)
    rows = ratio_report(res, 1e-2)
    assert [r[0] for r in rows] == [1, 2]
    for _, q, norm in rows:
        assert q == pytest.approx(1e-4, rel=1e-8)
        assert norm == pytest.approx(1.0, rel=1e-8)
    with pytest.raises(ValueError):
        ratio_report(extract_bubbles(synthetic([(1, 1.0)])[0]), 0.1)
    with pytest.raises(ValueError):
        ratio_report(res, 0.0)


def test_remainder_of_exact_decomposition_vanishes():
    state, bl = synthetic([(1, 1.0), (-1, 1e-4)])
    rem = remainder_state(state, bl)
    assert np.max(np.abs(rem.u0.values)) < 1e-12 * float(eval_W(0.0)) * 1e2


def test_json_round_trip(tmp_path):
    state, _ = synthetic([(1, 1.0), (-1, 1e-4)])
    res = extract_bubbles(state, refine=True)
    res.save(tmp_path / "d.json")
    import json
    back = DecompositionResult.from_dict(json.loads((tmp_path / "d.json").read_text()))
    np.testing.assert_array_equal(back.bubbles.scales, res.bubbles.scales)
    assert back.case_tag == res.case_tag and back.refined
