"""Scaling registry, power-law fits, interaction terms and the dyadic recursion."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ecwave.core_fields import channel
from ecwave.estimates import (
    REGISTRY,
    InadmissibleConstantsError,
    InteractionConfig,
    ProfileBoundCase,
    RecursionConstants,
    ScalingReport,
    bootstrap_recursion_check,
    bubble_minus_constant,
    evaluate_point,
    fit_power_law,
    format_table,
    interaction_terms,
    localized_profile_constants,
    recursion_depth,
    recursion_map,
    tau_zero,
    unit_bubble,
    verify_scaling,
)
from ecwave.ground_state import BubbleList, eval_W


def phi(r):
    return 1.0 / (1.0 + r)


def w_field(amp=1.0):
    return lambda r, t: amp * np.exp(-r * r) * np.cos(t) / (1.0 + t * t)


# ----------------------------------------------------------------------------
# fits
# ----------------------------------------------------------------------------


def test_power_law_fit_recovers_exact_data():
    p = np.geomspace(1.0, 1e3, 6)
    slope, se, logc, b = fit_power_law(p, 3.0 * p**-0.7)
    assert slope == pytest.approx(-0.7, abs=1e-12)
    assert logc == pytest.approx(math.log(3.0), abs=1e-12)
    assert se < 1e-12 and b is None


def test_power_law_fit_propagates_data_errors():
    p = np.geomspace(1.0, 1e3, 4)
    y = p**0.5
    _, se0, _, _ = fit_power_law(p, y)
    _, se1, _, _ = fit_power_law(p, y, 1e-3 * y)
    assert se0 < 1e-12 and se1 > 1e-4


def test_log_corrected_fit_recovers_offset():
    p = np.geomspace(1e2, 1e4, 7)
    y = 0.3 * p**-2.5 * (np.log(p) + 1.7)
    slope, se, logc, b = fit_power_law(p, y, log_correction=True)
    assert slope == pytest.approx(-2.5, abs=1e-8)
    assert b == pytest.approx(1.7, abs=1e-6)
    assert logc == pytest.approx(math.log(0.3), abs=1e-6)


def test_fit_rejections():
    with pytest.raises(ValueError):
        fit_power_law([1.0, 10.0, 100.0], [1.0, -1.0, 1.0])
    with pytest.raises(ValueError):
        fit_power_law([10.0, 100.0, 1000.0], [1.0, 2.0, 3.0], log_correction=True)
    with pytest.raises(ValueError):
        fit_power_law(np.geomspace(0.1, 100, 6), np.ones(6), log_correction=True)


# ----------------------------------------------------------------------------
# registry
# ----------------------------------------------------------------------------


def test_split_residue_slope_is_exact():
    rep = verify_scaling("split-residue")
    assert rep.slope == pytest.approx(-0.5, abs=1e-10)
    assert rep.passed and rep.constant_spread < 1 + 1e-10
    # closed form of the static 1/r norm
    r0 = rep.samples[:, 0]
    oracle = (2.0 * math.sqrt(4.0 * math.pi / 7.0) * 0.4 * r0**-2.5) ** 0.2
    np.testing.assert_allclose(rep.samples[:, 1], oracle, rtol=1e-8)


def test_bubble_minus_constant_log_corrected_slope():
    rep = verify_scaling("bubble-minus-constant")
    assert rep.passed
    assert abs(rep.deviation) < 1e-4
    assert rep.log_offset is not None


def test_bubble_minus_constant_field_is_cancellation_free():
    lam = 1e6
    r = np.array([1e-3, 1.0, 1e3])
    direct = unit_bubble(lam)(r) - math.sqrt(3.0) * lam**-0.5
    stable = bubble_minus_constant(lam)(r)
    np.testing.assert_allclose(stable[-1], direct[-1], rtol=1e-6)
    x = 3.0 * (r / lam) ** 2
    np.testing.assert_allclose(stable, -math.sqrt(3.0) * lam**-0.5 * x / 2 * (1 - 3 * x / 4),
                               rtol=1e-6)


def test_mixed_bubble_channel_slope():
    rep = verify_scaling("mixed-bubble-channel")
    assert rep.passed and abs(rep.deviation) < 1e-3


@pytest.mark.xfail(strict=True, reason="fitted exponent 0.0798 sits 0.0202 below 1/10 over "
                                        "three decades; the finite-width correction has not "
                                        "decayed yet")
def test_free_wave_profile_gap_within_two_hundredths():
    rep = verify_scaling("free-wave-profile-gap")
    assert abs(rep.deviation) <= 0.02


def test_free_wave_profile_gap_within_standard_errors():
    assert verify_scaling("free-wave-profile-gap").passed


def test_verify_scaling_rejections():
    with pytest.raises(KeyError):
        verify_scaling("no-such-estimate")
    with pytest.raises(KeyError):
        evaluate_point("no-such-estimate", 1.0)
    with pytest.raises(ValueError):
        verify_scaling("split-residue", [1.0, 100.0])
    with pytest.raises(ValueError):
        verify_scaling("split-residue", [-1.0, 10.0, 100.0])
    with pytest.raises(ValueError):
        verify_scaling("split-residue", [1.0, 3.0, 10.0])


def test_registry_entries_are_consistent():
    for key, entry in REGISTRY.items():
        assert entry.lemma_id == key
        p = np.array(entry.default_sweep)
        assert p.size >= 3 and math.log10(p[-1] / p[0]) >= 1.5


def test_report_save(tmp_path):
    rep = verify_scaling("split-residue")
    jp, cp = rep.save(tmp_path)
    data = json.loads(jp.read_text())
    assert data["lemma_id"] == "split-residue" and data["passed"]
    rows = np.loadtxt(cp, delimiter=",", skiprows=1)
    np.testing.assert_array_equal(rows, rep.samples)
    assert "split-residue" in format_table([rep])


def test_report_pass_rule():
    rep = ScalingReport("x", "p", -1.0, -1.05, 0.02, np.zeros((3, 3)), 0.0, np.ones(3))
    assert rep.passed
    rep.slope_se = 0.01
    assert not rep.passed


# ----------------------------------------------------------------------------
# localized-profile constants
# ----------------------------------------------------------------------------


def test_profile_bound_constant_is_uniform_in_position():
    cases = [ProfileBoundCase(a, a * 1.01) for a in (10.0, 100.0, 1000.0)]
    ratios = localized_profile_constants(cases)
    assert np.max(ratios) / np.min(ratios) < 1.001
    assert np.all(ratios < 1.5)


def test_profile_bound_formula():
    c = ProfileBoundCase(10.0, 20.0, outside=0.5)
    assert c.bound() == pytest.approx(0.5 + 1.0 * math.sqrt(10.0), rel=1e-15)
    G = c.forward_profile()
    assert float(G.l2_sq()) == pytest.approx(10.0 + 0.25, rel=1e-12)


# ----------------------------------------------------------------------------
# interaction terms
# ----------------------------------------------------------------------------


def test_interaction_terms_two_bubbles():
    bl = BubbleList.from_pairs([(1, 100.0), (1, 1.0)])
    terms = interaction_terms(InteractionConfig(bl, phi, channel(0.0, 1.0)))
    assert terms.shape == (7,)
    assert terms[0] == terms[1] == terms[2] == 0.0
    assert terms[6] == 0.0
    assert np.all(terms[3:6] > 0)


def test_interaction_terms_scale_with_the_error_field():
    bl = BubbleList.from_pairs([(1, 100.0), (1, 1.0)])
    reg = channel(0.0, 1.0)
    a = interaction_terms(InteractionConfig(bl, phi, reg, w=w_field(1e-3)))
    b = interaction_terms(InteractionConfig(bl, phi, reg, w=w_field(2e-3)))
    assert b[0] == pytest.approx(2.0 * a[0], rel=1e-12)
    # the quintic part is negligible at this amplitude
    assert b[1] == pytest.approx(2.0 * a[1], rel=1e-9)
    np.testing.assert_array_equal(a[3:], b[3:])


def test_interaction_term_i1_against_quadrature():
    from scipy.integrate import quad
    bl = BubbleList.from_pairs([(1, 100.0), (1, 1.0)])
    terms = interaction_terms(InteractionConfig(bl, phi, channel(0.0, 1.0), w=w_field()))

    def slice_norm(t):
        lo, hi = abs(t), abs(t) + 1.0
        f = lambda r: 4 * math.pi * r * r * (eval_W(r) ** 4 * w_field()(r, t)) ** 2
        return math.sqrt(quad(f, lo, hi, epsabs=0, epsrel=1e-12)[0])

    oracle = quad(slice_norm, -60.0, 60.0, limit=400, points=[0.0], epsrel=1e-10)[0]
    assert terms[0] == pytest.approx(oracle, rel=1e-5)


def test_three_bubbles_have_a_pair_term():
    bl = BubbleList.from_pairs([(1, 1e4), (1, 100.0), (1, 1.0)])
    terms = interaction_terms(InteractionConfig(bl, phi, channel(0.0, 1.0)))
    assert terms[6] > 0


def test_interaction_validation():
    reg = channel(0.0, 1.0)
    with pytest.raises(ValueError):
        interaction_terms(InteractionConfig(BubbleList.from_pairs([(1, 1.0)]), phi, reg))
    with pytest.raises(ValueError):
        interaction_terms(InteractionConfig(BubbleList.from_pairs([(1, 100.0), (1, 2.0)]),
                                            phi, reg))
    with pytest.raises(ValueError):
        interaction_terms(InteractionConfig(BubbleList.from_pairs([(1, 1.0), (1, 1.0)]),
                                            phi, reg))


# ----------------------------------------------------------------------------
# dyadic recursion
# ----------------------------------------------------------------------------


def test_zero_tau_gives_zero():
    res = bootstrap_recursion_check(RecursionConstants(), 5, 0.0)
    assert res.M == 0.0 and res.converged


def test_recursion_contracts_below_the_threshold():
    c = RecursionConstants()
    res = bootstrap_recursion_check(c, 10, tau_zero(c) / 2)
    assert np.all(res.ratios <= 0.4 + 1e-9)
    assert res.M < 1e-12 and res.converged
    assert np.all(res.state.b >= res.state.B)


def test_tau_zero_is_the_admissibility_boundary():
    c = RecursionConstants()
    t0 = tau_zero(c)
    c.check(0.999 * t0)
    with pytest.raises(InadmissibleConstantsError):
        c.check(1.001 * t0)


@pytest.mark.parametrize("kwargs", [dict(gamma=10.0), dict(c2=1e-3), dict(c1=1.0)])
def test_inadmissible_constants_raise(kwargs):
    with pytest.raises(InadmissibleConstantsError):
        bootstrap_recursion_check(RecursionConstants(**kwargs), 5, 1e-4, max_iter=0)


def test_recursion_depth():
    assert recursion_depth(1e-6, 20.0, 1.0, 1e12) == 15
    for lam_prev in (1e3, 1e6, 1e9):
        K = recursion_depth(1e-6, 20.0, 1.0, lam_prev)
        assert 2.0 ** (K + 1) * 20.0 >= 1e-6 * lam_prev
        assert K == 1 or 2.0**K * 20.0 < 1e-6 * lam_prev
    with pytest.raises(ValueError):
        recursion_depth(0.0, 20.0, 1.0, 1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_recursion_map_is_monotone(seed):
    rng = np.random.default_rng(seed)
    c = RecursionConstants()
    K = 6
    B = rng.uniform(0, 1e-3, K + 1)
    C = B + rng.uniform(0, 1e-3, K + 1)
    assert np.all(recursion_map(B, c, K) <= recursion_map(C, c, K) + 1e-300)


def test_recursion_map_validation():
    c = RecursionConstants()
    with pytest.raises(ValueError):
        recursion_map(np.zeros(3), c, 3)
    with pytest.raises(ValueError):
        recursion_map(-np.ones(4), c, 3)
