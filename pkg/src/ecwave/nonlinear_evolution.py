"""
Radial evolution of u_tt - Delta u = |u|^4 u.

With psi = r u the equation becomes psi_tt = psi_rr + psi^5 / r^4 on r > 0
with psi(0) = 0.  The solver uses a uniform grid including the origin and
kick-drift-kick leapfrog (velocity Verlet) steps.  The step is the CFL step
``cfl * h`` unless the amplitude is large, in which case it shrinks like
``dt_amp / max|u|^2`` so that self-similar blow-up can be followed.  The
outer node is frozen at its initial value.

Along each outgoing characteristic ``r = s + t`` the solver accumulates
``int (s + t) F(u(s + t, t)) dt``, which yields the forward radiation profile
of the nonlinear solution relative to the free one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
import numpy.typing as npt

from . import kernels
from .core_fields import (
    FOUR_PI,
    RadialGrid,
    RadialProfile,
    StatePair,
    _fd4,
    h_norm,
)
from .ground_state import eval_W, nonlinearity
from .linear_radiation import RadiationProfile, profile_from_data


MAX_CFL = 0.95


class NotConvergedError(ArithmeticError):
    """Characteristic integrals have not settled by the end of the run."""


@dataclass
class EvolutionGrid:
    """Uniform grid ``r_i = i h`` on ``[0, R_dom]``."""

    h: float
    radius: float

    def __post_init__(self) -> None:
        if not self.h > 0 or not self.radius > 4 * self.h:
            raise ValueError("need h > 0 and at least four cells")
        self.n = int(round(self.radius / self.h))
        self.radius = self.n * self.h

    @property
    def r(self) -> np.ndarray:
        return np.arange(self.n + 1) * self.h

    def radial_grid(self) -> RadialGrid:
        """The positive nodes as a :class:`RadialGrid`."""
        return RadialGrid(self.r[1:], "uniform")


@dataclass
class Trajectory:
    """Snapshots of an evolution and its diagnostics.

    Attributes
    ----------
    grid : EvolutionGrid
    times : ndarray
        Snapshot times.
    u, u_t : ndarray
        Arrays of shape ``(len(times), n + 1)``; column 0 is the origin.
    energies : ndarray
        Discrete conserved energy at each snapshot.
    history : ndarray
        Rows ``(t, max|u|, dt)`` for every step.
    blow_up : bool
        Whether the amplitude ceiling stopped the run.
    blow_up_time : float or None
        Fitted blow-up time when ``blow_up``.
    labels : ndarray
        Characteristic labels ``s``.
    characteristic_integral : ndarray
        ``int_0^T (s + t) F(u(s + t, t)) dt`` per label.
    checkpoint_integral : ndarray
        Same integral at 90 percent of the final time.
    source_l1l2 : float
        ``int ||F(u(t))||_{L^2} dt`` over the run.
    source_l1l2_exterior : float
        Same restricted to ``r > t``.
    """

    grid: EvolutionGrid
    times: np.ndarray
    u: np.ndarray
    u_t: np.ndarray
    energies: np.ndarray
    history: np.ndarray
    nonlinear: bool = True
    blow_up: bool = False
    blow_up_time: float | None = None
    labels: np.ndarray = field(default_factory=lambda: np.zeros(0))
    characteristic_integral: np.ndarray = field(default_factory=lambda: np.zeros(0))
    checkpoint_integral: np.ndarray = field(default_factory=lambda: np.zeros(0))
    checkpoint_time: float = 0.0
    source_l1l2: float = 0.0
    source_l1l2_exterior: float = 0.0
    params: dict = field(default_factory=dict)

    def state(self, k: int) -> StatePair:
        """Snapshot ``k`` as data on the positive nodes."""
        g = self.grid.radial_grid()
        return StatePair(RadialProfile(g, self.u[k, 1:], None),
                         RadialProfile(g, self.u_t[k, 1:], None))

    def save(self, directory: str | Path) -> None:
        """One CSV per snapshot (r, u, u_t), the characteristic integrals, the
        step history and ``manifest.json``."""
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        names = []
        r = self.grid.r
        for k, t in enumerate(self.times):
            name = f"snapshot_{k:04d}.csv"
            names.append(name)
            with open(d / name, "w") as fh:
                fh.write("r,u,u_t\n")
                for row in zip(r, self.u[k], self.u_t[k]):
                    fh.write(",".join(f"{x:.17g}" for x in row) + "\n")
        np.savetxt(d / "characteristics.csv",
                   np.column_stack((self.labels, self.characteristic_integral,
                                    self.checkpoint_integral)).reshape(-1, 3),
                   delimiter=",", fmt="%.17g", header="s,integral,checkpoint", comments="")
        np.savetxt(d / "history.csv", self.history.reshape(-1, 3), delimiter=",", fmt="%.17g",
                   header="t,max_abs_u,dt", comments="")
        manifest = {
            "h": self.grid.h,
            "radius": self.grid.radius,
            "times": [float(t) for t in self.times],
            "snapshots": names,
            "energies": [float(e) for e in self.energies],
            "nonlinear": self.nonlinear,
            "blow_up": self.blow_up,
            "blow_up_time": self.blow_up_time,
            "source_l1l2": self.source_l1l2,
            "source_l1l2_exterior": self.source_l1l2_exterior,
            "steps": int(self.history.shape[0]),
            "checkpoint_time": self.checkpoint_time,
            "params": self.params,
        }
        (d / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))

    @classmethod
    def load(cls, directory: str | Path) -> "Trajectory":
        d = Path(directory)
        m = json.loads((d / "manifest.json").read_text())
        grid = EvolutionGrid(m["h"], m["radius"])
        us, uts = [], []
        for name in m["snapshots"]:
            data = np.loadtxt(d / name, delimiter=",", skiprows=1, ndmin=2)
            us.append(data[:, 1])
            uts.append(data[:, 2])
        chars = np.zeros((0, 3))
        if (d / "characteristics.csv").exists():
            chars = np.loadtxt(d / "characteristics.csv", delimiter=",", skiprows=1, ndmin=2)
        hist = np.zeros((0, 3))
        if (d / "history.csv").exists():
            hist = np.loadtxt(d / "history.csv", delimiter=",", skiprows=1, ndmin=2)
        return cls(grid, np.array(m["times"]), np.array(us), np.array(uts),
                   np.array(m["energies"]), hist.reshape(-1, 3), m["nonlinear"], m["blow_up"],
                   m["blow_up_time"], chars[:, 0].copy(), chars[:, 1].copy(), chars[:, 2].copy(),
                   m.get("checkpoint_time", 0.0), source_l1l2=m["source_l1l2"],
                   source_l1l2_exterior=m["source_l1l2_exterior"], params=m.get("params", {}))


def _origin(psi: np.ndarray, h: float) -> float:
    return (8.0 * psi[1] - psi[2]) / (6.0 * h)


def _to_u(psi: np.ndarray, r: np.ndarray, h: float) -> np.ndarray:
    u = np.empty_like(psi)
    u[1:] = psi[1:] / r[1:]
    u[0] = _origin(psi, h)
    return u


def discrete_energy(psi: np.ndarray, vel: np.ndarray, acc: np.ndarray, r: np.ndarray, h: float,
                    dt: float, nonlinear: bool = True) -> float:
    """Energy conserved by the leapfrog scheme (exactly so for the linear part).

    ``4 pi [sum h (v^2/2 - psi^6/(6 r^4)) + sum (dpsi)^2/(2h) - psi_N^2/(2 R)
    - dt^2/8 sum h acc^2]``
    """
    inner = slice(1, -1)
    kin = 0.5 * h * float(np.sum(vel[inner] ** 2))
    grad = float(np.sum(np.diff(psi) ** 2)) / (2.0 * h)
    pot = h * float(np.sum(psi[inner] ** 6 / r[inner] ** 4)) / 6.0 if nonlinear else 0.0
    bdry = psi[-1] ** 2 / (2.0 * r[-1])
    mod = dt * dt / 8.0 * h * float(np.sum(acc[inner] ** 2))
    return FOUR_PI * (kin + grad - pot - bdry - mod)


def _initial_arrays(init, grid: EvolutionGrid) -> tuple[np.ndarray, np.ndarray]:
    r = grid.r
    if isinstance(init, StatePair):
        u0 = init.u0(r[1:])
        u1 = init.u1(r[1:])
    else:
        f0, f1 = init
        u0 = np.asarray(f0(r[1:]), dtype=float)
        u1 = np.zeros_like(u0) if f1 is None else np.asarray(f1(r[1:]), dtype=float)
    psi = np.concatenate(([0.0], r[1:] * u0))
    vel = np.concatenate(([0.0], r[1:] * u1))
    return psi, vel


def evolve(init, h: float, radius: float, t_end: float, *,
           snapshots: Sequence[float] | int = 11, nonlinear: bool = True, cfl: float = 0.9,
           dt_amp: float | None = None, u_ceiling: float = 1e6,
           labels: npt.ArrayLike | None = None, max_steps: int = 50_000_000,
           initial_psi: tuple[np.ndarray, np.ndarray] | None = None,
           backend: str | None = None) -> Trajectory:
    """Evolve radial data with the leapfrog scheme.

    Parameters
    ----------
    init : StatePair or (callable, callable)
        Initial data ``(u0, u1)``; callables are evaluated at the nodes.
    h : float
        Grid spacing.
    radius : float
        Domain radius; the outer node is held at its initial value, so the
        domain should exceed the data support plus ``t_end`` unless the data
        are stationary there.
    t_end : float
    snapshots : int or sequence of float
        Number of equally spaced snapshot times, or the times themselves.
    nonlinear : bool
        Include ``|u|^4 u``; the linear wave equation otherwise.
    cfl : float
        ``dt_max = cfl * h``, at most 0.95.
    dt_amp : float, optional
        Amplitude-limited step ``dt_amp / max|u|^2`` for blow-up runs.  When
        omitted the step is fixed and every stop time is moved to the nearest
        step multiple, which keeps the discrete energy exactly conserved.
    u_ceiling : float
        Stop when ``max|u|`` exceeds this (blow-up detection).
    labels : array_like, optional
        Characteristic labels ``s >= 0``; defaults to the nodes with
        ``s + t_end`` inside the domain.
    initial_psi : (ndarray, ndarray), optional
        Nodal ``(psi, psi_t)`` overriding ``init``.
    backend : {"compiled", "python"}, optional

    Returns
    -------
    Trajectory
    """
    if not 0 < cfl <= MAX_CFL:
        raise ValueError(f"CFL ratio must lie in (0, {MAX_CFL}]")
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    k = kernels.get_backend(backend)
    grid = EvolutionGrid(h, radius)
    h = grid.h
    r = grid.r
    if initial_psi is not None:
        psi = np.array(initial_psi[0], dtype=float)
        vel = np.array(initial_psi[1], dtype=float)
        if psi.shape != r.shape or vel.shape != r.shape:
            raise ValueError("initial arrays do not match the grid")
    else:
        psi, vel = _initial_arrays(init, grid)
    if isinstance(snapshots, int):
        times = np.linspace(0.0, t_end, max(snapshots, 2))
    else:
        times = np.unique(np.concatenate(([0.0], np.asarray(snapshots, dtype=float))))
        times = times[(times >= 0) & (times <= t_end)]
    if labels is None:
        labels = r[r + t_end <= grid.radius + 1e-12]
    labels = np.ascontiguousarray(labels, dtype=float)
    if np.any(labels < 0):
        raise ValueError("characteristic labels must be non-negative")
    acc = np.zeros_like(psi)
    umax = k.acceleration(psi, r, h, nonlinear, acc)
    dt_max = cfl * h
    if dt_amp is None:
        dt_amp = math.inf
        dt_max = t_end / math.ceil(t_end / dt_max - 1e-9)
        times = np.unique(np.round(times / dt_max)) * dt_max
    nl = labels.size
    char_sum = np.zeros(nl)
    char_prev = np.zeros(nl)
    char_new = np.zeros(nl)
    if nonlinear and nl:
        k.characteristic_sample(psi, h, labels, 0.0, char_prev)
    norms = np.zeros(4)
    if nonlinear:
        norms[2], norms[3] = k.source_norms(psi, r, h, 0.0)
    cap = 4 * t_end / dt_max + 10_000
    if not math.isinf(dt_amp):
        # near a type-I singularity max|u|^2 ~ c/(T - t), so the amplitude-limited
        # steps number about (c / dt_amp) * log(u_ceiling^2)
        cap += 2.0 / dt_amp * (2.0 * math.log(max(u_ceiling, math.e)) + 10.0)
    cap = int(min(max_steps, cap))
    hist = np.zeros((cap, 3))
    t = 0.0
    steps_total = 0
    us, uts, energies, out_times = [], [], [], []
    dt_last = dt_max
    blow = False
    check_time = 0.9 * float(times[-1])
    if math.isinf(dt_amp):
        check_time = round(check_time / dt_max) * dt_max
    checkpoint = np.zeros(nl)
    stops = sorted(set([float(x) for x in times] + [check_time]))
    for stop in stops:
        if stop > t:
            t, steps, status, umax, dt_step = k.advance(
                psi, vel, acc, r, h, t, stop, dt_max, dt_amp, u_ceiling, nonlinear, labels,
                char_sum, char_prev, char_new, norms, hist, steps_total,
                max_steps - steps_total, umax)
            steps_total += steps
            if steps:
                dt_last = dt_step
            if status == 1:
                blow = True
            elif status == 2:
                raise RuntimeError("step budget exhausted")
            if not (np.all(np.isfinite(psi)) and np.all(np.isfinite(vel))):
                raise FloatingPointError(f"non-finite values at t = {t:.6g}")
        if stop == check_time:
            checkpoint = char_sum.copy()
        if np.any(np.isclose(stop, times, rtol=0, atol=1e-14)) or blow:
            out_times.append(t)
            us.append(_to_u(psi, r, h))
            uts.append(np.concatenate(([0.0], vel[1:] / r[1:])))
            uts[-1][0] = _origin(vel, h)
            energies.append(discrete_energy(psi, vel, acc, r, h, dt_last, nonlinear))
        if blow:
            break
    history = hist[: min(steps_total, cap)]
    traj = Trajectory(grid, np.array(out_times), np.array(us), np.array(uts), np.array(energies),
                      history, nonlinear, blow, None, labels, char_sum, checkpoint, check_time,
                      float(norms[0]), float(norms[1]),
                      {"h": h, "radius": grid.radius, "t_end": t_end, "cfl": cfl,
                       "dt_amp": dt_amp, "u_ceiling": u_ceiling, "nonlinear": nonlinear})
    traj.final_psi = psi.copy()
    traj.final_vel = vel.copy()
    if blow:
        traj.blow_up_time = blow_up_time_estimate(history)
    return traj


def blow_up_time_estimate(history: np.ndarray) -> float | None:
    """Fit ``max|u|^{-2}`` linearly in ``t`` over the last decade of growth."""
    if history.shape[0] < 4:
        return None
    t, a = history[:, 0], history[:, 1]
    top = a[-1]
    sel = (a > top / 10.0) & (a > 0)
    if np.count_nonzero(sel) < 3:
        return None
    y = a[sel] ** -2
    slope, intercept = np.polyfit(t[sel], y, 1)
    if slope >= 0:
        return None
    return float(-intercept / slope)


def energy_drift(traj: Trajectory) -> np.ndarray:
    """Rows ``(t, E(t))`` of the discrete conserved energy at each snapshot."""
    return np.column_stack((traj.times, traj.energies))


def relative_energy_drift(traj: Trajectory) -> float:
    """``max_t |E(t) - E(0)| / |E(0)|``; zero for a zero trajectory."""
    e = traj.energies
    scale = abs(e[0]) if e[0] != 0.0 else float(np.max(np.abs(e)))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(e - e[0]))) / scale


def type_one_reference(t: npt.ArrayLike, T_plus: float) -> np.ndarray:
    """Spatially constant blow-up solution ``(3/4)^{1/4} (T_+ - t)^{-1/2}``."""
    t = np.asarray(t, dtype=float)
    if np.any(t >= T_plus):
        raise ValueError("reference solution requires t < T_+")
    return (0.75) ** 0.25 * (T_plus - t) ** -0.5


def type_one_data(T_plus: float, core: float, cut: float):
    """Data equal to the blow-up solution at t=0 inside ``r < core``.

    The data are cut off smoothly to zero on ``[core, cut]``.
    """
    if not cut > core > 0:
        raise ValueError("need 0 < core < cut")
    a = 0.75**0.25 * T_plus**-0.5
    b = 0.5 * 0.75**0.25 * T_plus**-1.5

    def chi(r):
        x = np.clip((np.asarray(r, dtype=float) - core) / (cut - core), 0.0, 1.0)
        return 1.0 - x**3 * (10.0 - 15.0 * x + 6.0 * x * x)

    return (lambda r: a * chi(r), lambda r: b * chi(r))


def discrete_ground_state(h: float, radius: float, scale: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Exact stationary state of the discrete scheme matching W near the origin.

    Marches ``psi_{i+1} = 2 psi_i - psi_{i-1} - h^2 r_i F(psi_i / r_i)`` from
    ``psi_0 = 0``, ``psi_1 = h W(h)``.  Returns nodal ``(psi, psi_t)``.
    """
    grid = EvolutionGrid(h, radius)
    r = grid.r
    psi = np.zeros_like(r)
    lam = scale
    psi[1] = r[1] * lam**-0.5 * eval_W(r[1] / lam)
    for i in range(1, r.size - 1):
        psi[i + 1] = 2.0 * psi[i] - psi[i - 1] - h * h * r[i] * (psi[i] / r[i]) ** 5
    return psi, np.zeros_like(r)


def exterior_difference_norm(traj: Trajectory, k: int, ref_u: Callable, ref_ut: Callable,
                             R: float) -> float:
    """``||(u - U, u_t - U_t)(t_k)||`` in the energy norm outside ``r = R``.

    ``ref_u`` and ``ref_ut`` are functions of ``r``; derivatives of the
    difference come from fourth-order differences on the uniform grid.
    """
    g = traj.grid.radial_grid()
    r = g.nodes
    du = traj.u[k, 1:] - ref_u(r)
    dut = traj.u_t[k, 1:] - ref_ut(r)
    state = StatePair(RadialProfile(g, du, None), RadialProfile(g, dut, None))
    return h_norm(_zero_tail(state), R)


def _zero_tail(state: StatePair) -> StatePair:
    """Continue a difference with the free decay rates; it vanishes at the frozen boundary."""
    g = state.grid
    return StatePair(RadialProfile(g, state.u0.values, 1.0), RadialProfile(g, state.u1.values, 2.0))


def nonlinear_radiation_profile(traj: Trajectory, G0_plus: RadiationProfile | None = None,
                                tol: float = 1e-3) -> RadiationProfile:
    """Forward radiation profile of a nonlinear trajectory on ``s >= 0``.

    ``G_+(s) = G_{0,+}(s) + (1/2) int_0^T (s + t) F(u(s + t, t)) dt``

    Parameters
    ----------
    traj : Trajectory
    G0_plus : RadiationProfile, optional
        Forward profile of the initial data; derived from the first snapshot
        when omitted.
    tol : float
        Maximal relative L^2 change of the correction over the last tenth of
        the run.

    Returns
    -------
    RadiationProfile
        Cubic profile on the characteristic labels.
    """
    s = traj.labels
    if s.size < 3:
        raise ValueError("trajectory has no characteristic labels")
    corr = 0.5 * traj.characteristic_integral
    late = 0.5 * (traj.characteristic_integral - traj.checkpoint_integral)
    size = float(np.sqrt(np.sum(corr**2)))
    if size > 0 and float(np.sqrt(np.sum(late**2))) > tol * size:
        raise NotConvergedError("characteristic integrals still changing at the end of the run")
    if G0_plus is None:
        G0_plus = free_forward_profile(traj)
    base = G0_plus(s)
    return RadiationProfile(s, base + corr, kind="cubic")


def free_forward_profile(traj: Trajectory) -> RadiationProfile:
    """Forward profile ``G_{0,+}`` of the first snapshot."""
    st = traj.state(0)
    g = st.grid
    st = StatePair(RadialProfile(g, st.u0.values, 1.0), RadialProfile(g, st.u1.values, 2.0))
    return profile_from_data(st, 0.0).time_reversed()


def profile_correction_norm(traj: Trajectory) -> float:
    """``||G_+ - G_{0,+}||_{L^2(s >= 0)}`` from the accumulated integrals."""
    s = traj.labels
    corr = 0.5 * traj.characteristic_integral
    return math.sqrt(float(np.trapezoid(corr**2, s)))


def snapshot_index(traj: Trajectory, t: float) -> int:
    """Index of the snapshot at time ``t`` (to within half a step)."""
    k = int(np.argmin(np.abs(traj.times - t)))
    if abs(traj.times[k] - t) > 0.5 * traj.grid.h + 1e-12:
        raise ValueError(f"no snapshot at t = {t:g}; available range "
                         f"[{traj.times[0]:g}, {traj.times[-1]:g}]")
    return k


def equivalence_defect(traj: Trajectory, vL, R: float,
                       times: Sequence[float] | None = None) -> np.ndarray:
    """Exterior energy of ``u - v_L`` on ``R + |t| < r < R_dom`` at snapshot times.

    Parameters
    ----------
    traj : Trajectory
    vL : FreeWave or None
        Linear comparison wave with ``u_r`` and ``u_t`` methods; ``None``
        means zero.
    R : float
    times : sequence of float, optional
        Snapshot times to use (default all).

    Returns
    -------
    ndarray
        ``int |grad_{t,x}(u - v_L)|^2 dx`` over the exterior region, one
        value per requested time.
    """
    h = traj.grid.h
    r = traj.grid.r
    idx = range(traj.times.size) if times is None else [snapshot_index(traj, t) for t in times]
    out = []
    for k in idx:
        t = float(traj.times[k])
        u = traj.u[k]
        ut = traj.u_t[k]
        ur = np.zeros_like(u)
        ur[1:] = (_fd4(r * u, h)[1:] - u[1:]) / r[1:]
        sel = r > R + abs(t)
        if np.count_nonzero(sel) < 2:
            out.append(0.0)
            continue
        rs = r[sel]
        if vL is not None:
            ur_d = ur[sel] - vL.u_r(rs, t)
            ut_d = ut[sel] - vL.u_t(rs, t)
        else:
            ur_d, ut_d = ur[sel], ut[sel]
        out.append(FOUR_PI * float(np.trapezoid((ur_d**2 + ut_d**2) * rs**2, rs)))
    return np.array(out)
