"""
Radiation profiles of radial free waves.

A radial free wave is determined by a profile ``G`` on the line through

    u(r, t) = (1/r) int_{t-r}^{t+r} G(s) ds,

with initial data ``u0 = (1/r) int_{-r}^{r} G`` and ``u1 = (G(r) - G(-r))/r``.
``G`` is the backward profile; the forward one is ``G_+(s) = -G(-s)``.
For data known only outside a ball of radius ``R`` the profile lives on
``|s| >= R`` and the integral over ``(-R, R)`` is replaced by a single number,
the residue ``R u0(R)``.

Profiles are stored as exact piecewise polynomials (linear with jumps, or
cubic splines), so every integral below is evaluated in closed form.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
import numpy.typing as npt
from scipy.interpolate import CubicSpline, PPoly

from .core_fields import (
    FOUR_PI,
    ExcludedRegionError,
    RadialGrid,
    RadialProfile,
    StatePair,
    _gauss,
    _panel_nodes,
)


# ----------------------------------------------------------------------------
# exact piecewise-polynomial branches
# ----------------------------------------------------------------------------


class _Branch:
    """One contiguous piece of a profile with exact cumulative integrals."""

    def __init__(self, s: np.ndarray, g: np.ndarray, kind: str):
        if kind == "cubic":
            if np.any(np.diff(s) <= 0):
                raise ValueError("cubic profiles need strictly increasing nodes")
            pp = CubicSpline(s, g) if s.size > 2 else _linear_ppoly(s, g)
            pp = PPoly(pp.c, pp.x)
        elif kind == "linear":
            pp = _linear_ppoly(s, g)
        else:
            raise ValueError(f"unknown profile kind {kind!r}")
        self.lo = float(pp.x[0])
        self.hi = float(pp.x[-1])
        self.pp = pp
        self.F = pp.antiderivative()
        sq = _square(pp)
        self.Q = sq.antiderivative()
        roots = pp.roots(extrapolate=False)
        roots = roots[np.isfinite(roots)]
        pts = np.unique(np.concatenate((pp.x, roots)))
        mid = 0.5 * (pts[:-1] + pts[1:])
        self._abs_pts = pts
        self._abs_sign = np.sign(pp(mid)) if mid.size else np.zeros(0)
        fvals = self.F(pts)
        self._abs_cum = np.concatenate(([0.0], np.cumsum(self._abs_sign * np.diff(fvals))))
        self.F_total = float(self.F(self.hi))
        self.Q_total = float(self.Q(self.hi))
        self.A_total = float(self._abs_cum[-1])

    def eval(self, s: np.ndarray) -> np.ndarray:
        inside = (s >= self.lo) & (s < self.hi)
        out = np.zeros_like(s)
        if np.any(inside):
            out[inside] = self.pp(s[inside])
        return out

    def cum(self, fn, total: float, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = np.where(s >= self.hi, total, 0.0)
        inside = (s > self.lo) & (s < self.hi)
        if np.any(inside):
            out[inside] = fn(s[inside])
        return out

    def F_of(self, s):
        return self.cum(self.F, self.F_total, s)

    def Q_of(self, s):
        return self.cum(self.Q, self.Q_total, s)

    def A_of(self, s):
        s = np.asarray(s, dtype=float)
        out = np.where(s >= self.hi, self.A_total, 0.0)
        inside = (s > self.lo) & (s < self.hi)
        if np.any(inside):
            si = s[inside]
            j = np.clip(np.searchsorted(self._abs_pts, si, side="right") - 1, 0,
                        self._abs_sign.size - 1)
            out[inside] = self._abs_cum[j] + self._abs_sign[j] * (self.F(si) - self.F(self._abs_pts[j]))
        return out


def _linear_ppoly(s: np.ndarray, g: np.ndarray) -> PPoly:
    """Piecewise-linear interpolant; repeated nodes encode jumps."""
    s = np.asarray(s, dtype=float)
    g = np.asarray(g, dtype=float)
    if np.any(np.diff(s) < 0):
        raise ValueError("profile nodes must be non-decreasing")
    keep = np.diff(s) > 0
    if not np.any(keep):
        raise ValueError("profile needs a non-degenerate interval")
    left_x = s[:-1][keep]
    right_x = s[1:][keep]
    left_v = g[:-1][keep]
    right_v = g[1:][keep]
    x = np.concatenate((left_x, right_x[-1:]))
    if np.any(left_x[1:] != right_x[:-1]):
        raise ValueError("profile nodes must be contiguous")
    c = np.vstack(((right_v - left_v) / (right_x - left_x), left_v))
    return PPoly(c, x)


def _square(pp: PPoly) -> PPoly:
    k = pp.c.shape[0]
    c = np.zeros((2 * k - 1, pp.c.shape[1]))
    for i in range(k):
        for j in range(k):
            c[i + j] += pp.c[i] * pp.c[j]
    return PPoly(c, pp.x)


# ----------------------------------------------------------------------------
# profile type
# ----------------------------------------------------------------------------


@dataclass
class RadiationProfile:
    """Profile ``G`` on the line, possibly restricted to ``|s| >= R``.

    Parameters
    ----------
    s : ndarray
        Non-decreasing nodes.  For ``kind="linear"`` a repeated node marks a
        jump; the profile is zero outside ``[s[0], s[-1]]``.
    values : ndarray
        ``G`` at the nodes.
    residue : float
        ``int_{-R}^{R} G``, i.e. ``R u0(R)``; zero when ``R = 0``.
    exterior_radius : float
        ``R``; values on ``|s| < R`` are undefined.
    kind : {"linear", "cubic"}
        Interpolation between nodes.
    """

    s: npt.NDArray[np.float64]
    values: npt.NDArray[np.float64]
    residue: float = 0.0
    exterior_radius: float = 0.0
    kind: str = "linear"
    _branches: list = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.s = np.asarray(self.s, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.s.shape != self.values.shape or self.s.ndim != 1:
            raise ValueError("nodes and values must be 1-d of equal length")
        R = float(self.exterior_radius)
        if R < 0:
            raise ValueError("exterior radius must be non-negative")
        if R == 0.0 and self.residue != 0.0:
            raise ValueError("residue must vanish without an excluded ball")
        if R > 0.0:
            inside = np.abs(self.s) < R * (1.0 - 1e-14)
            if np.any(inside):
                raise ValueError("profile nodes fall inside the excluded ball")
            neg = self.s < 0
            self._branches = []
            for sel in (neg, ~neg):
                if np.count_nonzero(sel) >= 2:
                    self._branches.append(_Branch(self.s[sel], self.values[sel], self.kind))
        else:
            self._branches = [_Branch(self.s, self.values, self.kind)]

    # --- evaluation --------------------------------------------------------

    @property
    def support(self) -> tuple[float, float]:
        return float(self.s[0]), float(self.s[-1])

    @property
    def support_radius(self) -> float:
        return float(np.max(np.abs(self.s)))

    def _guard(self, s: np.ndarray) -> None:
        R = self.exterior_radius
        if R > 0 and np.any(np.abs(s) < R * (1.0 - 1e-12)):
            raise ExcludedRegionError("profile is not defined inside the excluded ball")

    def __call__(self, s: npt.ArrayLike) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        self._guard(s)
        out = np.zeros_like(s)
        for b in self._branches:
            out = out + b.eval(s)
        return out

    def _cum(self, name: str, s: np.ndarray) -> np.ndarray:
        out = np.zeros_like(s)
        for b in self._branches:
            out = out + getattr(b, name)(s)
        return out

    def integral(self, a: npt.ArrayLike, b: npt.ArrayLike) -> np.ndarray:
        """``int_a^b G`` for ``a <= b``; across the excluded ball uses the residue."""
        a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
        R = self.exterior_radius
        if R > 0:
            straddle = (a <= -R * (1 + 1e-14)) & (b >= R * (1 - 1e-14))
            left = b <= -R * (1 - 1e-14)
            right = a >= R * (1 - 1e-14)
            if not np.all(straddle | left | right):
                raise ExcludedRegionError("integration interval cuts the excluded ball")
            val = self._cum("F_of", b) - self._cum("F_of", a)
            return np.where(straddle, val + self.residue, val)
        return self._cum("F_of", b) - self._cum("F_of", a)

    def l2_sq(self, a: npt.ArrayLike = -math.inf, b: npt.ArrayLike = math.inf) -> np.ndarray:
        """``int_a^b |G|^2`` over the defined part of ``[a, b]``."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return self._cum("Q_of", b) - self._cum("Q_of", a)

    def l1(self, a: npt.ArrayLike = -math.inf, b: npt.ArrayLike = math.inf) -> np.ndarray:
        """``int_a^b |G|`` over the defined part of ``[a, b]``."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return self._cum("A_of", b) - self._cum("A_of", a)

    def l2_norm(self, a: float = -math.inf, b: float = math.inf) -> float:
        return math.sqrt(max(float(self.l2_sq(a, b)), 0.0))

    def exterior_l2_sq(self, R: float) -> float:
        """``int_{|s| > R} |G|^2``."""
        return float(self.l2_sq(-math.inf, -R) + self.l2_sq(R, math.inf))

    def time_reversed(self) -> "RadiationProfile":
        """Profile of ``s -> -G(-s)`` (forward from backward and vice versa)."""
        return RadiationProfile(-self.s[::-1], -self.values[::-1], -self.residue,
                                self.exterior_radius, self.kind)

    def scaled(self, lam: float) -> "RadiationProfile":
        """Energy-critical dilate ``lam^{-1/2} G(s/lam)``."""
        return RadiationProfile(self.s * lam, self.values * lam**-0.5, self.residue * lam**0.5,
                                self.exterior_radius * lam, self.kind)

    def breakpoints(self) -> np.ndarray:
        return np.unique(self.s)

    # --- persistence -------------------------------------------------------

    def to_csv(self, path: str | Path) -> None:
        """Write ``s,G`` rows after a header recording R, residue and kind."""
        with open(path, "w", newline="") as fh:
            fh.write(f"# exterior_radius={self.exterior_radius!r},residue={self.residue!r},"
                     f"kind={self.kind}\n")
            w = csv.writer(fh)
            w.writerow(["s", "G"])
            for s, g in zip(self.s, self.values):
                w.writerow([f"{s:.17g}", f"{g:.17g}"])

    @classmethod
    def from_csv(cls, path: str | Path) -> "RadiationProfile":
        with open(path) as fh:
            head = fh.readline().lstrip("#").strip()
            meta = dict(item.split("=", 1) for item in head.split(","))
            rows = list(csv.reader(fh))
        data = np.array([[float(x) for x in row] for row in rows[1:] if row])
        return cls(data[:, 0], data[:, 1], float(meta.get("residue", 0.0)),
                   float(meta.get("exterior_radius", 0.0)), meta.get("kind", "linear").strip())


def indicator_profile(a: float, b: float, height: float = 1.0) -> RadiationProfile:
    """``height * 1_{(a, b)}`` as an exact linear profile."""
    if not b > a:
        raise ValueError("need a < b")
    return RadiationProfile(np.array([a, a, b, b]), np.array([0.0, height, height, 0.0]))


def sampled_profile(fn: Callable[[np.ndarray], np.ndarray], s_min: float, s_max: float,
                    n: int, kind: str = "cubic") -> RadiationProfile:
    """Sample a smooth profile on a uniform node set."""
    s = np.linspace(s_min, s_max, n)
    return RadiationProfile(s, fn(s), kind=kind)


def random_profile(rng: np.random.Generator, support: float = 4.0, n: int = 401,
                   modes: int = 6) -> RadiationProfile:
    """Smooth random profile on ``[-support, support]`` vanishing at the ends.

    A sum of ``modes`` cosines with normal amplitudes and uniform phases,
    multiplied by ``(1 - (s/S)^2)^3`` and stored as a cubic spline.
    """
    s = np.linspace(-support, support, n)
    x = s / support
    g = np.zeros_like(s)
    for k in range(modes):
        g += rng.normal() * np.cos(0.5 * k * math.pi * x + rng.uniform(0.0, 2.0 * math.pi))
    return RadiationProfile(s, (1.0 - x * x) ** 3 * g, kind="cubic")


# ----------------------------------------------------------------------------
# free waves and data
# ----------------------------------------------------------------------------


class FreeWave:
    """Space-time evaluator of the free wave with backward profile ``G``.

    Calling ``wave(r, t)`` returns ``u``; :meth:`u_t` and :meth:`u_r` give the
    derivatives.  For exterior profiles evaluation is limited to
    ``r > |t| + R``.
    """

    def __init__(self, profile: RadiationProfile):
        self.profile = profile
        R = profile.exterior_radius
        self.scales = tuple(sorted({max(profile.support_radius, 1e-300), max(R, 1e-300)}))

    def _check(self, r: np.ndarray, t: np.ndarray) -> None:
        R = self.profile.exterior_radius
        if R > 0 and np.any(r < np.abs(t) + R * (1.0 - 1e-12)):
            raise ExcludedRegionError("free wave from exterior data is only defined for r > |t| + R")

    def __call__(self, r: npt.ArrayLike, t: npt.ArrayLike = 0.0) -> np.ndarray:
        r, t = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(t, dtype=float))
        self._check(r, t)
        G = self.profile
        small = r < 1e-12 * np.maximum(1.0, np.abs(t))
        rr = np.where(small, 1.0, r)
        val = G.integral(t - rr, t + rr) / rr
        if np.any(small):
            val = np.where(small, 2.0 * G(t), val)
        return val

    def u_t(self, r: npt.ArrayLike, t: npt.ArrayLike = 0.0) -> np.ndarray:
        r, t = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(t, dtype=float))
        self._check(r, t)
        G = self.profile
        return (G(t + r) - G(t - r)) / r

    def u_r(self, r: npt.ArrayLike, t: npt.ArrayLike = 0.0) -> np.ndarray:
        r, t = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(t, dtype=float))
        self._check(r, t)
        G = self.profile
        return (G(t + r) + G(t - r)) / r - self(r, t) / r


def free_wave_from_profile(G: RadiationProfile) -> FreeWave:
    """Free wave ``u(r,t) = (1/r) int_{t-r}^{t+r} G``.

    Parameters
    ----------
    G : RadiationProfile
        Backward profile.

    Returns
    -------
    FreeWave
        Callable field with ``u_t`` and ``u_r`` methods.
    """
    return FreeWave(G)


def data_from_profile(G: RadiationProfile, grid: RadialGrid) -> StatePair:
    """Initial data of the free wave with profile ``G``, sampled on ``grid``.

    ``u0`` carries its exact derivative so that energy norms need no
    differencing.  Radii below the excluded ball are rejected.
    """
    r = grid.nodes
    R = G.exterior_radius
    if R > 0 and r[0] < R * (1.0 - 1e-12):
        raise ExcludedRegionError("grid reaches inside the excluded ball")
    gp = G(r)
    gm = G(-r)
    u0 = G.integral(-r, r) / r
    du0 = (gp + gm) / r - u0 / r
    u1 = (gp - gm) / r
    return StatePair(RadialProfile(grid, u0, 1.0, du0), RadialProfile(grid, u1, 2.0))


def profile_from_data(state: StatePair, R: float = 0.0) -> RadiationProfile:
    """Backward profile of the free wave with data ``state`` outside ``r = R``.

    For ``s > R``: ``G(+-s) = ((r u0)'(s) +- s u1(s)) / 2`` and the residue is
    ``R u0(R)``.  Derivatives come from the profile's slope when available,
    otherwise from fourth-order differences.

    Parameters
    ----------
    state : StatePair
    R : float
        Exterior radius; the grid must extend beyond it.

    Returns
    -------
    RadiationProfile
        Cubic profile on the nodes ``+-r`` with ``r >= R``.
    """
    grid = state.grid
    if R < 0:
        raise ValueError("exterior radius must be non-negative")
    if R >= grid.r_max:
        raise ExcludedRegionError("exterior radius beyond the grid")
    r = grid.nodes
    u0 = state.u0.values
    du0 = state.u0.derivative()
    u1 = state.u1.values
    keep = r > R
    r, u0, du0, u1 = r[keep], u0[keep], du0[keep], u1[keep]
    if R > 0:
        u0R = float(state.u0(np.array([R]))[0]) if R >= grid.r_min else float(state.u0.values[0])
        if R < r[0] and not np.isclose(R, r[0], rtol=1e-12):
            du0R = float(np.interp(R, grid.nodes, state.u0.derivative()))
            u1R = float(state.u1(np.array([R]))[0])
            r = np.concatenate(([R], r))
            u0 = np.concatenate(([u0R], u0))
            du0 = np.concatenate(([du0R], du0))
            u1 = np.concatenate(([u1R], u1))
        residue = R * u0R
    else:
        residue = 0.0
    d_ru0 = u0 + r * du0
    g_pos = 0.5 * (d_ru0 + r * u1)
    g_neg = 0.5 * (d_ru0 - r * u1)
    s = np.concatenate((-r[::-1], r))
    g = np.concatenate((g_neg[::-1], g_pos))
    return RadiationProfile(s, g, residue, R, "cubic")


def isometry_rhs(G: RadiationProfile, R: float) -> float:
    """``8 pi ||G||^2_{L^2(|s|>R)} + 4 pi residue^2 / R`` (second term 0 at R=0)."""
    val = 2.0 * FOUR_PI * G.exterior_l2_sq(R)
    if R > 0:
        inner = G.residue if G.exterior_radius == R else float(G.integral(-R, R))
        val += FOUR_PI * inner**2 / R
    return val


def radiation_field_defects(G: RadiationProfile, t: float, m: int = 8) -> tuple[float, float]:
    """``int_0^inf |r u_t - G_+(r-t)|^2 dr`` and ``int_0^inf |r u_r + G_+(r-t)|^2 dr``.

    Both vanish as ``t -> inf`` for the free wave with backward profile ``G``.
    """
    if G.exterior_radius > 0:
        raise ValueError("needs a full-line profile")
    wave = FreeWave(G)
    Gp = G.time_reversed()
    S = G.support_radius
    lo = max(t - S, 0.0)
    hi = t + S
    bp = G.breakpoints()
    pts = np.concatenate(([lo, hi], t + bp, t - bp, -t + bp))
    pts = np.unique(pts[(pts >= lo) & (pts <= hi)])
    r, w = _panel_nodes(pts, m)
    r = r[r > 0]
    w = w[-r.size:]
    rt = r * wave.u_t(r, t) - Gp(r - t)
    rr = r * wave.u_r(r, t) + Gp(r - t)
    return float(np.sum(w * rt**2)), float(np.sum(w * rr**2))


# ----------------------------------------------------------------------------
# concentration and maximal functions
# ----------------------------------------------------------------------------


@dataclass
class ConcentrationReport:
    """Components of the concentration functional.

    Attributes
    ----------
    term_sup_window : float
        ``(sup_{0<r<lam} (lam/r) int_{-r}^{r} |G|^2)^{1/2}``.
    term_y_norm : float
        The supplied norm of the free wave on the exterior cone.
    term_l1_sup : float
        ``sup_{r>0} r^{-1/2} int_{-r}^{r} |G|``.
    total : float
    """

    term_sup_window: float
    term_y_norm: float
    term_l1_sup: float
    total: float


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _ladder_sup(fn: Callable[[np.ndarray], np.ndarray], r_hi: np.ndarray, n_oct: int = 60,
                per_oct: int = 8, iters: int = 80) -> np.ndarray:
    """sup over ``0 < r <= r_hi`` of ``fn``, vectorized over a batch.

    A dyadic ladder with ``per_oct`` rungs per octave locates the best rung,
    then golden-section search in ``log r`` refines between its neighbours.
    ``fn`` maps ``r`` of shape ``(batch, k)`` to values of the same shape,
    row ``i`` belonging to batch member ``i``.
    """
    r_hi = np.atleast_1d(np.asarray(r_hi, dtype=float))
    rows = np.arange(r_hi.size)
    k = np.arange(0, n_oct * per_oct + 1)
    ladder = r_hi[:, None] * 2.0 ** (-k[None, :] / per_oct)
    vals = fn(ladder)
    j = np.argmax(vals, axis=1)
    best = vals[rows, j]
    lo = np.log(ladder[rows, np.minimum(j + 1, k.size - 1)])
    hi = np.log(ladder[rows, np.maximum(j - 1, 0)])
    for _ in range(iters):
        x1 = hi - _GOLDEN * (hi - lo)
        x2 = lo + _GOLDEN * (hi - lo)
        f = fn(np.exp(np.stack((x1, x2), axis=1)))
        best = np.maximum(best, np.max(f, axis=1))
        left = f[:, 0] > f[:, 1]
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
    return best


def concentration_tau(G: RadiationProfile, y_norm_vL: float, lam: float) -> ConcentrationReport:
    """Concentration functional of a profile at scale ``lam``.

    Parameters
    ----------
    G : RadiationProfile
        Full-line profile.
    y_norm_vL : float
        Precomputed ``L^5 L^10`` norm of the free wave on the exterior cone.
    lam : float
        Positive scale.

    Returns
    -------
    ConcentrationReport
    """
    if not lam > 0:
        raise ValueError("scale must be positive")
    if G.exterior_radius > 0:
        raise ValueError("concentration needs a full-line profile")

    def window(r):
        return (lam / r) * G.l2_sq(-r, r)

    def l1(r):
        return G.l1(-r, r) / np.sqrt(r)

    t1 = math.sqrt(max(float(_ladder_sup(window, np.array([lam]))[0]), 0.0))
    top = 2.0 * max(G.support_radius, lam)
    n_oct = int(min(200, 40 + math.log2(top / max(np.min(np.diff(G.breakpoints())), 1e-300))))
    t3 = float(_ladder_sup(l1, np.array([top]), n_oct=n_oct)[0])
    return ConcentrationReport(t1, float(y_norm_vL), t3, t1 + float(y_norm_vL) + t3)


class MaximalFunction:
    """One-sided maximal function of ``|G|^2``.

    For ``direction="-"`` calling with ``t`` gives
    ``sup_{r>0} (1/r) int_t^{t+r} |G_-|^2``; for ``"+"`` it gives
    ``sup_{r>0} (1/r) int_{-t}^{-t+r} |G_+|^2`` where ``G_+(s) = -G_-(-s)``.
    """

    def __init__(self, profile: RadiationProfile, direction: str):
        if direction not in ("+", "-"):
            raise ValueError("direction must be '+' or '-'")
        if profile.exterior_radius > 0:
            raise ValueError("maximal function needs a full-line profile")
        self.direction = direction
        self.source = profile if direction == "-" else profile.time_reversed()
        self.mass = float(self.source.l2_sq())

    def base_point(self, t: np.ndarray) -> np.ndarray:
        return t if self.direction == "-" else -t

    def average(self, t: npt.ArrayLike, r: npt.ArrayLike) -> np.ndarray:
        """``(1/r) int_x^{x+r} |G|^2`` at the base point ``x`` of ``t``."""
        x = self.base_point(np.asarray(t, dtype=float))
        r = np.asarray(r, dtype=float)
        return self.source.l2_sq(x, x + r) / r

    def __call__(self, t: npt.ArrayLike) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        x = self.base_point(t).ravel()
        s_lo, s_hi = self.source.support
        out = np.zeros(x.size)
        live = x < s_hi
        if np.any(live):
            xl = x[live]
            top = 2.0 * (s_hi - xl)
            spacing = max(float(np.min(np.diff(self.source.breakpoints()))), 1e-12 * (s_hi - s_lo))
            n_oct = int(min(200, 8 + math.log2(float(np.max(top)) / spacing)))

            def avg(r):
                return self.source.l2_sq(xl[:, None], xl[:, None] + r) / r

            out[live] = _ladder_sup(avg, top, n_oct=n_oct, per_oct=8, iters=60)
        return out.reshape(t.shape)


def maximal_function(G: RadiationProfile, direction: str = "-") -> MaximalFunction:
    """One-sided maximal function of the squared profile; see :class:`MaximalFunction`."""
    return MaximalFunction(G, direction)


def weak_type_profile(mf: MaximalFunction, kappas: npt.ArrayLike, t_lo: float, t_hi: float,
                      n: int = 200001) -> np.ndarray:
    """``kappa * |{t in [t_lo, t_hi] : g(t) > kappa}|`` for each ``kappa``.

    The one-sided maximal inequality bounds every entry by ``int |G|^2``.
    """
    t = np.linspace(t_lo, t_hi, n)
    g = mf(t)
    dt = (t_hi - t_lo) / (n - 1)
    kappas = np.asarray(kappas, dtype=float)
    return np.array([k * dt * np.count_nonzero(g > k) for k in kappas])
