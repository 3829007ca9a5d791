"""Leapfrog evolution: conservation, explicit solutions and radiation profiles."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import quad

from ecwave import kernels
from ecwave.ground_state import eval_W
from ecwave.linear_radiation import free_wave_from_profile, random_profile
from ecwave.nonlinear_evolution import (
    NotConvergedError,
    Trajectory,
    discrete_ground_state,
    energy_drift,
    equivalence_defect,
    evolve,
    nonlinear_radiation_profile,
    profile_correction_norm,
    relative_energy_drift,
    snapshot_index,
    type_one_data,
    type_one_reference,
)


def zero(r):
    return 0.0 * r


def bump(amp):
    return lambda r: amp * np.exp(-r * r)


def test_zero_data_stays_zero():
    tr = evolve((zero, zero), 0.01, 10.0, 1.0)
    assert np.all(tr.u == 0.0)
    np.testing.assert_array_equal(energy_drift(tr)[:, 1], 0.0)
    assert relative_energy_drift(tr) == 0.0


def test_parameter_validation():
    with pytest.raises(ValueError):
        evolve((zero, zero), 0.01, 10.0, 1.0, cfl=1.2)
    with pytest.raises(ValueError):
        evolve((zero, zero), 0.01, 10.0, 0.0)


def test_ground_state_energy_constant():
    tr = evolve((eval_W, zero), 0.01, 40.0, 2.0, snapshots=5)
    assert relative_energy_drift(tr) <= 1e-4


def test_discrete_ground_state_is_stationary():
    psi = discrete_ground_state(0.01, 40.0)
    tr = evolve(None, 0.01, 40.0, 2.0, snapshots=3, initial_psi=psi)
    assert np.max(np.abs(tr.u[-1] - tr.u[0])) < 1e-10
    assert relative_energy_drift(tr) < 1e-12


def test_ground_state_error_is_second_order_on_a_short_window():
    errs = []
    for h in (0.02, 0.01, 0.005):
        tr = evolve((eval_W, zero), h, 40.0, 2.0, snapshots=[2.0])
        r = tr.grid.r
        sel = r > 0.1
        errs.append(np.max(np.abs(tr.u[-1, sel] - eval_W(r[sel]))))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders > 1.8)


def test_small_data_energy_constant():
    tr = evolve((bump(1e-3), zero), 0.01, 30.0, 10.0)
    assert relative_energy_drift(tr) <= 1e-6


def test_smooth_data_energy_drift():
    tr = evolve((bump(0.5), zero), 0.01, 20.0, 5.0)
    assert relative_energy_drift(tr) <= 1e-4


def test_type_one_reference_values():
    assert type_one_reference(0.0, 1.0) == pytest.approx(0.75**0.25, rel=1e-15)
    assert type_one_reference(0.75, 1.0) == pytest.approx(2 * 0.75**0.25, rel=1e-15)
    with pytest.raises(ValueError):
        type_one_reference(1.0, 1.0)


def test_type_one_reference_solves_the_ode():
    t = np.linspace(0.0, 0.9, 7)
    h = 1e-4
    u = type_one_reference(t, 1.0)
    utt = (type_one_reference(t + h, 1.0) - 2 * u + type_one_reference(t - h, 1.0)) / h**2
    np.testing.assert_allclose(utt, u**5, rtol=1e-6)


def test_type_one_core_tracks_the_explicit_solution():
    u0, u1 = type_one_data(1.0, 3.0, 4.0)
    tr = evolve((u0, u1), 0.01, 6.0, 1.0, dt_amp=2.5e-4, u_ceiling=1e3)
    assert tr.blow_up and tr.history[-1, 1] >= 1e3
    dev = np.abs(tr.history[:, 1] / type_one_reference(tr.history[:, 0], 1.0) - 1.0)
    assert np.max(dev) < 1e-2
    assert tr.blow_up_time == pytest.approx(1.0, abs=1e-6)


def test_type_one_data_validation():
    with pytest.raises(ValueError):
        type_one_data(1.0, 4.0, 3.0)


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled kernels not built")
def test_backends_agree():
    a = evolve((bump(0.5), zero), 0.02, 10.0, 2.0, backend="compiled")
    b = evolve((bump(0.5), zero), 0.02, 10.0, 2.0, backend="python")
    np.testing.assert_allclose(a.u, b.u, rtol=0, atol=1e-12)
    np.testing.assert_allclose(a.characteristic_integral, b.characteristic_integral,
                               rtol=1e-10, atol=1e-15)


def test_linear_run_reproduces_the_free_profile():
    tr = evolve((bump(1.0), zero), 0.01, 30.0, 10.0, nonlinear=False)
    assert np.all(tr.characteristic_integral == 0.0)
    assert profile_correction_norm(tr) == 0.0


def test_small_data_profile_bound_and_scaling():
    eps = np.array([1e-2, 2e-2, 4e-2])
    norms = []
    for e in eps:
        tr = evolve((bump(e), zero), 0.01, 30.0, 10.0)
        n = profile_correction_norm(tr)
        assert n <= tr.source_l1l2 / (4.0 * math.sqrt(math.pi))
        norms.append(n)
    assert np.polyfit(np.log(eps), np.log(norms), 1)[0] == pytest.approx(5.0, abs=0.2)


def test_nonlinear_profile_adds_the_correction():
    tr = evolve((bump(0.3), zero), 0.01, 30.0, 10.0)
    G = nonlinear_radiation_profile(tr)
    s = tr.labels
    inside = (s > 0.5) & (s < 5.0)
    G0 = nonlinear_radiation_profile(evolve((bump(0.3), zero), 0.01, 30.0, 10.0,
                                            nonlinear=False))
    np.testing.assert_allclose(G(s[inside]) - G0(s[inside]),
                               0.5 * tr.characteristic_integral[inside], atol=1e-9)


def test_unconverged_profile_is_reported():
    tr = evolve((bump(0.3), zero), 0.01, 30.0, 0.2)
    with pytest.raises(NotConvergedError):
        nonlinear_radiation_profile(tr, tol=1e-12)


def test_equivalence_defect_of_ground_state():
    tr = evolve((eval_W, zero), 0.01, 40.0, 2.0, snapshots=5)
    d = equivalence_defect(tr, None, 0.0)
    oracle = [quad(lambda r: 4 * math.pi * r**4 * (1 / 3 + r * r) ** -3, t, 40.0)[0]
              for t in tr.times]
    np.testing.assert_allclose(d, oracle, rtol=1e-2)
    assert np.all(np.diff(d) < 0)


def test_equivalence_defect_of_a_free_wave():
    G = random_profile(np.random.default_rng(1), support=2.0)
    wave = free_wave_from_profile(G)

    def u1(r):
        rr = np.where(r > 0, r, 1.0)
        return np.where(r > 0, wave.u_t(rr, 0.0), 0.0)

    tr = evolve((lambda r: wave(r, 0.0), u1), 0.005, 12.0, 4.0, nonlinear=False, snapshots=5)
    d = equivalence_defect(tr, wave, 0.5)
    base = equivalence_defect(tr, None, 0.5)
    assert np.all(d <= 1e-3 * base[0])


def test_equivalence_defect_of_zero():
    tr = evolve((zero, zero), 0.01, 10.0, 1.0, snapshots=3)
    np.testing.assert_array_equal(equivalence_defect(tr, None, 0.0), 0.0)


def test_snapshot_lookup():
    tr = evolve((zero, zero), 0.01, 10.0, 1.0, snapshots=3)
    assert snapshot_index(tr, 0.5) == 1
    with pytest.raises(ValueError):
        snapshot_index(tr, 5.0)


def test_trajectory_round_trip(tmp_path):
    tr = evolve((bump(0.3), zero), 0.02, 10.0, 1.0, snapshots=3)
    tr.save(tmp_path / "traj")
    back = Trajectory.load(tmp_path / "traj")
    np.testing.assert_array_equal(back.u, tr.u)
    np.testing.assert_array_equal(back.times, tr.times)
    np.testing.assert_array_equal(back.characteristic_integral, tr.characteristic_integral)
    np.testing.assert_array_equal(back.history, tr.history)
    assert nonlinear_radiation_profile(back).s.size == tr.labels.size
