"""
Radial grids, sampled profiles and the space-time norms used throughout.

All spatial quantities are radial functions on R^3, so every volume integral
carries the weight 4 pi r^2.  Space-time norms are computed over regions
bounded by light cones, with the radial slice at each time integrated by
composite Gauss-Legendre panels and the time axis handled the same way.

Functions
---------
make_grid      Uniform or logarithmic radial grid.
h_norm         Exterior energy norm of a data pair.
y_norm         Mixed L^5_t L^10_x norm over a cone region.
l1l2_norm      Mixed L^1_t L^2_x norm over a cone region.
radial_integral  4 pi int_R^inf g(r) r^2 dr for sampled g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import numpy.typing as npt
from scipy.interpolate import CubicHermiteSpline, CubicSpline

FOUR_PI = 4.0 * math.pi

Field = Callable[[np.ndarray, np.ndarray], np.ndarray]


class GridError(ValueError):
    """Invalid grid specification."""


class ExcludedRegionError(ValueError):
    """A quantity was requested where it is not defined."""


class DivergentNormError(ArithmeticError):
    """The time tail of a space-time norm could not be bounded."""


class SingularityError(ArithmeticError):
    """Quadrature failed to converge, typically a non-integrable singularity."""


# ----------------------------------------------------------------------------
# grids and profiles
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialGrid:
    """Strictly increasing radial nodes, uniform in r or in log r.

    Parameters
    ----------
    nodes : ndarray
        Positive, strictly increasing radii.
    scheme : {"uniform", "logarithmic"}
        Spacing rule; determines the coordinate used for interpolation and
        finite differences.
    """

    nodes: npt.NDArray[np.float64]
    scheme: str = "logarithmic"

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        if self.scheme not in ("uniform", "logarithmic"):
            raise GridError(f"unknown scheme {self.scheme!r}")
        if nodes.ndim != 1 or nodes.size < 2:
            raise GridError("grid needs at least two nodes")
        if nodes[0] <= 0.0:
            raise GridError("grid nodes must be positive")
        if np.any(np.diff(nodes) <= 0.0):
            raise GridError("grid nodes must be strictly increasing")

    @property
    def r_min(self) -> float:
        return float(self.nodes[0])

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def coordinate(self, r: npt.ArrayLike | None = None) -> np.ndarray:
        """Interpolation coordinate: r itself or log r."""
        r = self.nodes if r is None else np.asarray(r, dtype=float)
        return np.log(r) if self.scheme == "logarithmic" else r

    def jacobian(self, r: npt.ArrayLike | None = None) -> np.ndarray:
        """dr/dx for the interpolation coordinate x."""
        r = self.nodes if r is None else np.asarray(r, dtype=float)
        return r if self.scheme == "logarithmic" else np.ones_like(r)

    def dilate(self, lam: float) -> "RadialGrid":
        return RadialGrid(self.nodes * lam, self.scheme)


def make_grid(r_min: float, r_max: float, n: int, scheme: str = "logarithmic") -> RadialGrid:
    """Build a radial grid.

    Parameters
    ----------
    r_min, r_max : float
        End points, ``0 < r_min < r_max``.
    n : int
        Number of nodes, at least 2.
    scheme : {"uniform", "logarithmic"}

    Returns
    -------
    RadialGrid
    """
    if not r_min > 0.0:
        raise GridError("r_min must be positive")
    if not r_max > r_min:
        raise GridError("r_max must exceed r_min")
    if int(n) < 2:
        raise GridError("need at least two nodes")
    n = int(n)
    if scheme == "uniform":
        nodes = np.linspace(r_min, r_max, n)
    elif scheme == "logarithmic":
        nodes = np.exp(np.linspace(math.log(r_min), math.log(r_max), n))
        nodes[0], nodes[-1] = r_min, r_max
    else:
        raise GridError(f"unknown scheme {scheme!r}")
    return RadialGrid(nodes, scheme)


def _fd4(f: np.ndarray, dx: float) -> np.ndarray:
    """Fourth-order first derivative of samples on a uniform coordinate."""
    n = f.size
    if n < 5:
        return np.gradient(f, dx, edge_order=2 if n > 2 else 1)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * dx)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12.0 * dx)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12.0 * dx)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12.0 * dx)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12.0 * dx)
    return d


@dataclass
class RadialProfile:
    """Samples of a radial function on a grid.

    Parameters
    ----------
    grid : RadialGrid
    values : ndarray
        Samples at ``grid.nodes``.
    tail_exponent : float, optional
        If given, the profile is continued beyond ``grid.r_max`` as
        ``values[-1] * (r / r_max) ** -tail_exponent``.
    slope : ndarray, optional
        Exact radial derivative samples.  When absent, derivatives come from
        fourth-order differences in the grid coordinate.
    """

    grid: RadialGrid
    values: npt.NDArray[np.float64]
    tail_exponent: float | None = None
    slope: npt.NDArray[np.float64] | None = None
    _interp: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.nodes.shape:
            raise ValueError("values do not match the grid")
        if self.slope is not None:
            self.slope = np.asarray(self.slope, dtype=float)
            if self.slope.shape != self.values.shape:
                raise ValueError("slope does not match the grid")
        if self.tail_exponent is not None and self.tail_exponent < 0:
            raise ValueError("tail exponent must be non-negative")

    @property
    def r(self) -> np.ndarray:
        return self.grid.nodes

    def derivative(self) -> np.ndarray:
        """Radial derivative at the nodes."""
        if self.slope is not None:
            return self.slope
        x = self.grid.coordinate()
        return _fd4(self.values, float(x[1] - x[0])) / self.grid.jacobian()

    def _interpolant(self):
        if self._interp is None:
            x = self.grid.coordinate()
            if self.slope is not None:
                self._interp = CubicHermiteSpline(x, self.values, self.slope * self.grid.jacobian())
            else:
                self._interp = CubicSpline(x, self.values)
        return self._interp

    def __call__(self, r: npt.ArrayLike) -> np.ndarray:
        """Evaluate the interpolant; constant below r_min, power tail above r_max."""
        r = np.asarray(r, dtype=float)
        out = np.empty_like(r)
        lo = r < self.grid.r_min
        hi = r > self.grid.r_max
        mid = ~(lo | hi)
        out[lo] = self.values[0]
        out[mid] = self._interpolant()(self.grid.coordinate(r[mid]))
        if np.any(hi):
            if self.tail_exponent is None:
                raise ExcludedRegionError("profile has no tail beyond its grid")
            out[hi] = self.values[-1] * (r[hi] / self.grid.r_max) ** (-self.tail_exponent)
        return out

    def with_values(self, values: np.ndarray, slope: np.ndarray | None = None) -> "RadialProfile":
        return RadialProfile(self.grid, values, self.tail_exponent, slope)


@dataclass
class StatePair:
    """Data ``(u0, u1)`` on a common grid."""

    u0: RadialProfile
    u1: RadialProfile

    def __post_init__(self) -> None:
        if self.u0.grid.nodes.shape != self.u1.grid.nodes.shape or not np.array_equal(
            self.u0.grid.nodes, self.u1.grid.nodes
        ):
            raise ValueError("state components must share a grid")

    @property
    def grid(self) -> RadialGrid:
        return self.u0.grid

    def __sub__(self, other: "StatePair") -> "StatePair":
        tail = _min_tail(self.u0.tail_exponent, other.u0.tail_exponent)
        tail1 = _min_tail(self.u1.tail_exponent, other.u1.tail_exponent)
        s0 = None
        if self.u0.slope is not None and other.u0.slope is not None:
            s0 = self.u0.slope - other.u0.slope
        return StatePair(
            RadialProfile(self.grid, self.u0.values - other.u0.values, tail, s0),
            RadialProfile(self.grid, self.u1.values - other.u1.values, tail1),
        )


def _min_tail(a: float | None, b: float | None) -> float | None:
    if a is None or b is None:
        return None
    return min(a, b)


def state_from_functions(grid: RadialGrid, u0: Callable, u1: Callable | None = None,
                         tail_exponent: float | None = 1.0,
                         du0: Callable | None = None) -> StatePair:
    """Sample closed-form data on a grid."""
    r = grid.nodes
    v0 = np.asarray(u0(r), dtype=float)
    v1 = np.zeros_like(r) if u1 is None else np.asarray(u1(r), dtype=float)
    s0 = None if du0 is None else np.asarray(du0(r), dtype=float)
    return StatePair(RadialProfile(grid, v0, tail_exponent, s0),
                     RadialProfile(grid, v1, tail_exponent + 1.0 if tail_exponent is not None else None))


# ----------------------------------------------------------------------------
# radial quadrature and the exterior energy norm
# ----------------------------------------------------------------------------


def radial_integral(grid: RadialGrid, g: np.ndarray, R: float = 0.0,
                    tail: float = 0.0) -> float:
    """Compute ``4 pi (int_R^{r_max} g r^2 dr + tail)``.

    ``g`` is sampled at the nodes; the integral is the exact integral of the
    cubic spline of ``g r^2 dr/dx`` in the grid coordinate.  Below ``r_min``
    the integrand ``g`` is taken constant.
    """
    r = grid.nodes
    if R >= grid.r_max:
        return FOUR_PI * tail
    x = grid.coordinate()
    spline = CubicSpline(x, g * r**2 * grid.jacobian())
    start = max(R, grid.r_min)
    total = float(spline.integrate(float(grid.coordinate(np.array([start]))[0]), float(x[-1])))
    if R < grid.r_min:
        total += float(g[0]) * (grid.r_min**3 - R**3) / 3.0
    return FOUR_PI * (total + tail)


def _power_tail(value: float, r_max: float, p: float | None, power: int, extra: int) -> float:
    """int_{r_max}^inf (value (r/r_max)^{-p})^power' r^2 dr for decaying tails.

    ``power`` is the exponent applied to the profile and ``extra`` the
    additional decay from differentiation (0 or 1).
    """
    if value == 0.0:
        return 0.0
    if p is None:
        raise ExcludedRegionError("profile without tail exponent is nonzero at r_max")
    q = power * (p + extra)
    if q <= 3.0:
        raise DivergentNormError("profile tail decays too slowly for a finite integral")
    return abs(value) ** power * r_max**3 / (q - 3.0)


def h_norm(state: StatePair, R: float = 0.0) -> float:
    """Energy norm of ``state`` restricted to ``r > R``.

    ``(int_{r>R} (|d_r u0|^2 + |u1|^2) 4 pi r^2 dr)^{1/2}``

    Parameters
    ----------
    state : StatePair
    R : float
        Exterior radius, non-negative.

    Returns
    -------
    float
    """
    if R < 0:
        raise ValueError("exterior radius must be non-negative")
    grid = state.grid
    du0 = state.u0.derivative()
    g = du0**2 + state.u1.values**2
    tail = 0.0
    if R < grid.r_max:
        p0 = state.u0.tail_exponent
        if p0 is not None and state.u0.values[-1] != 0.0:
            # derivative of the power tail: p f(r_max)/r_max (r/r_max)^{-p-1}
            dv = p0 * state.u0.values[-1] / grid.r_max
            tail += _power_tail(dv, grid.r_max, p0, 2, 1)
        tail +=_power_tail(state.u1.values[-1], grid.r_max, state.u1.tail_exponent, 2, 0)
    return math.sqrt(max(radial_integral(grid, g, R, tail), 0.0))


# ----------------------------------------------------------------------------
# space-time regions
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ChannelRegion:
    """Light-cone region ``{|t| + inner < r < |t| + outer}`` with optional cuts.

    Parameters
    ----------
    inner, outer : float
        Cone offsets; ``outer = inf`` gives an exterior region.
    cap : float, optional
        Keep only ``r + |t| < cap``.
    floor : float, optional
        Keep only ``r + |t| > floor``.
    """

    inner: float = 0.0
    outer: float = math.inf
    cap: float | None = None
    floor: float | None = None

    def __post_init__(self) -> None:
        if self.inner < 0:
            raise ValueError("inner offset must be non-negative")
        if not self.outer > self.inner:
            raise ValueError("outer offset must exceed inner offset")
        if self.cap is not None and not self.cap > self.inner:
            raise ValueError("cap must exceed the inner offset")

    @property
    def is_exterior(self) -> bool:
        return math.isinf(self.outer)

    def slice(self, t: npt.ArrayLike) -> tuple[np.ndarray, np.ndarray]:
        """Radial interval ``[a, b]`` at times ``t`` (empty when ``a >= b``)."""
        at = np.abs(np.asarray(t, dtype=float))
        a = at + self.inner
        b = at + self.outer
        if self.floor is not None:
            a = np.maximum(a, self.floor - at)
        if self.cap is not None:
            b = np.minimum(b, self.cap - at)
        return a, b

    def contains(self, r: npt.ArrayLike, t: npt.ArrayLike) -> np.ndarray:
        a, b = self.slice(t)
        r = np.asarray(r, dtype=float)
        return (r > a) & (r < b)

    def time_support(self) -> float:
        """Largest |t| with a non-empty slice (inf if unbounded)."""
        if self.cap is None:
            return math.inf
        return max((self.cap - self.inner) / 2.0, 0.0)

    def time_breakpoints(self) -> list[float]:
        """Times where a slice end point switches between constraints."""
        pts = []
        for c in (self.cap, self.floor):
            if c is None:
                continue
            for off in (self.inner, self.outer):
                if math.isfinite(off) and c - off > 0:
                    pts.append((c - off) / 2.0)
        return sorted(set(pts))

    def scaled(self, lam: float) -> "ChannelRegion":
        return ChannelRegion(self.inner * lam, self.outer * lam,
                             None if self.cap is None else self.cap * lam,
                             None if self.floor is None else self.floor * lam)


def exterior(R: float = 0.0) -> ChannelRegion:
    """``{r > |t| + R}``."""
    return ChannelRegion(R, math.inf)


def channel(r1: float, r2: float, cap: float | None = None,
            floor: float | None = None) -> ChannelRegion:
    """``{|t| + r1 < r < |t| + r2}`` with optional ``r + |t|`` cuts."""
    return ChannelRegion(r1, r2, cap, floor)


@dataclass
class NormValue:
    """A space-time norm with its error budget.

    Attributes
    ----------
    value : float
    abs_error_estimate : float
        Refinement difference plus the time tail bound.
    t_window_used : tuple of float
    tail_bound : float
        Bound on the contribution from beyond the time window (in norm units).
    """

    value: float
    abs_error_estimate: float
    t_window_used: tuple[float, float]
    tail_bound: float = 0.0

    def __float__(self) -> float:
        return self.value


# ----------------------------------------------------------------------------
# mixed-norm quadrature
# ----------------------------------------------------------------------------

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss(m: int) -> tuple[np.ndarray, np.ndarray]:
    if m not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(m)
        _GL_CACHE[m] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[m]


def _panel_nodes(edges: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights on consecutive panels."""
    x, w = _gauss(m)
    lo = edges[:-1, None]
    width = np.diff(edges)[:, None]
    return (lo + width * x).ravel(), (width * w).ravel()


def _graded_edges(a: float, b: float, n_octaves: int = 40) -> np.ndarray:
    """Panel edges on [a, b] refined geometrically toward a."""
    k = np.arange(n_octaves, -1, -1, dtype=float)
    return a + (b - a) * np.concatenate(([0.0], 2.0 ** (-k)))


def _slice_unit_edges(kind: str, n_oct: int) -> np.ndarray:
    if kind == "short":
        # geometric toward both ends of a slice of modest aspect ratio
        left = 0.5 * 2.0 ** (-np.arange(n_oct // 2, 0, -1, dtype=float))
        return np.unique(np.concatenate(([0.0], left, [0.5], 1.0 - left[::-1], [1.0])))
    raise ValueError(kind)


def _slice_kinds(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """0: empty, 1: short finite slice, 2: long or semi-infinite slice, 3: starts at 0."""
    kind = np.zeros(a.shape, dtype=int)
    ok = b > a
    kind[ok & (a > 0) & (b <= 4.0 * a)] = 1
    kind[ok & (a > 0) & (b > 4.0 * a)] = 2
    kind[ok & (a <= 0)] = 3
    return kind


def _space_nodes(a: np.ndarray, b: np.ndarray, kind: int, m: int, scale: float,
                 n_oct: int) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes of shape ``(len(a), n)`` for slices of one kind.

    Short slices get panels graded toward both ends; long or semi-infinite
    slices get logarithmic panels; slices starting at the origin are graded
    logarithmically toward 0.
    """
    a = a[:, None]
    b = b[:, None]
    if kind == 1:
        us, ws = _panel_nodes(_slice_unit_edges("short", 16), m)
        return a + (b - a) * us, (b - a) * ws
    ul, wl = _panel_nodes(np.linspace(0.0, 1.0, n_oct + 1), m)
    if kind == 2:
        lo = np.log(a)
        hi = np.log(np.where(np.isinf(b), np.maximum(a, scale) * 2.0**60, b))
    else:
        top = np.where(np.isinf(b), scale * 2.0**60, b)
        lo = np.log(np.minimum(top, scale) * 1e-12)
        hi = np.log(top)
    rr = np.exp(lo + (hi - lo) * ul)
    return rr, rr * (hi - lo) * wl


def _time_edges(T: float, breakpoints: Sequence[float], scales: Sequence[float],
                t_lo: float = 0.0) -> np.ndarray:
    """Panel edges on [t_lo, T]: octaves from the smallest scale, refined at breakpoints."""
    s_min = max(min(scales), 1e-300)
    pts = {t_lo, T}
    start = max(s_min * 2.0**-30, t_lo)
    if start <= 0.0:
        start = s_min * 2.0**-30
    x = start
    while x < T:
        if x > t_lo:
            pts.add(x)
        x *= 2.0 ** 0.5
    for bp in breakpoints:
        if t_lo < bp < T:
            pts.add(bp)
            for k in range(1, 31):
                d = bp * 2.0**-k
                for q in (bp - d, bp + d):
                    if t_lo < q < T:
                        pts.add(q)
    for s in scales:
        for f in (0.5, 1.0, 2.0):
            if t_lo < s * f < T:
                pts.add(s * f)
    return np.array(sorted(pts))


def _time_integrand(field: Field, region: ChannelRegion, t: np.ndarray, q: float,
                    pq: float, m: int, scale: float, n_oct: int) -> np.ndarray:
    a, b = region.slice(t)
    kinds = _slice_kinds(a, b)
    inner = np.zeros(t.shape)
    for k in (1, 2, 3):
        sel = kinds == k
        if not np.any(sel):
            continue
        r, w = _space_nodes(a[sel], b[sel], k, m, scale, n_oct)
        tt = np.broadcast_to(t[sel][:, None], r.shape)
        vals = np.abs(np.asarray(field(r, tt), dtype=float))
        inner[sel] = np.sum(w * vals**q * r**2, axis=1) * FOUR_PI
    return inner ** pq


def _integrate_time(field, region, p, q, t0, t1, breakpoints, scales, m, n_oct):
    """int_{t0}^{t1} (int |f|^q dx)^{p/q} dt for 0 <= t0 < t1 (or mirrored)."""
    sign = 1.0 if t1 >= 0 else -1.0
    lo, hi = sorted((abs(t0), abs(t1)))
    edges = _time_edges(hi, breakpoints, scales, lo)
    tn, tw = _panel_nodes(edges, m)
    h = _time_integrand(field, region, sign * tn, q, p / q, m, min(scales), n_oct)
    return float(np.sum(tw * h))


def _mixed_norm(field: Field, region: ChannelRegion, p: float, q: float,
                t_window: tuple[float, float] | None, scales: Sequence[float],
                time_decay: float | None, resolution: int) -> NormValue:
    scales = tuple(float(s) for s in scales) or (1.0,)
    for c in (region.inner, region.outer, region.cap, region.floor):
        if c is not None and math.isfinite(c) and c > 0:
            scales = scales + (float(c),)
    support = region.time_support()
    tail = 0.0
    if t_window is None:
        T = support if math.isfinite(support) else max(scales) * 2.0**40
        window = (-T, T)
    else:
        window = (float(t_window[0]), float(t_window[1]))
        if window[1] <= window[0]:
            raise ValueError("empty time window")
        window = (max(window[0], -support), min(window[1], support))
    bps = region.time_breakpoints()

    def run(m: int, n_oct: int) -> float:
        total = 0.0
        t0, t1 = window
        if t1 > 0:
            total += _integrate_time(field, region, p, q, max(t0, 0.0), t1, bps, scales, m, n_oct)
        if t0 < 0:
            total += _integrate_time(field, region, p, q, min(t1, 0.0), t0, bps, scales, m, n_oct)
        return total

    base_m = 8 * resolution
    n_oct = 96 * resolution
    coarse = run(base_m, n_oct)
    fine = run(2 * base_m, 2 * n_oct)
    if abs(fine - coarse) > 0.05 * abs(fine):
        finer = run(4 * base_m, 4 * n_oct)
        if abs(finer - fine) > 0.5 * abs(fine - coarse):
            raise SingularityError("space-time quadrature does not converge")
        coarse, fine = fine, finer
    if t_window is None and not math.isfinite(support):
        T = window[1]
        tail = _tail_estimate(field, region, p, q, T, scales, time_decay, fine)
    value = max(fine, 0.0) ** (1.0 / p)
    err_p = abs(fine - coarse) + tail + 1e-14 * abs(fine)
    # propagate the error of the p-th power to the norm
    if value > 0:
        abs_err = value * ((1.0 + err_p / max(fine, 1e-300)) ** (1.0 / p) - 1.0)
    else:
        abs_err = err_p ** (1.0 / p)
    tail_norm = value * ((1.0 + tail / max(fine, 1e-300)) ** (1.0 / p) - 1.0) if value > 0 else tail
    return NormValue(value, abs_err, window, tail_norm)


def _tail_estimate(field, region, p, q, T, scales, time_decay, total) -> float:
    """Bound int_{|t|>T} (...)^{p/q} dt from the decay of the time integrand."""
    t = np.array([T / 2.0, T, -T / 2.0, -T])
    h = _time_integrand(field, region, t, q, p / q, 16, min(scales), 96)
    out = 0.0
    for (h_half, h_end) in ((h[0], h[1]), (h[2], h[3])):
        if h_end == 0.0:
            continue
        alpha = time_decay
        if alpha is None:
            alpha = math.log2(h_half / h_end) if h_half > 0 else 0.0
        if alpha <= 1.0:
            if h_end * T > 1e-12 * max(total, 1e-300):
                raise DivergentNormError("time integrand does not decay; supply a time window")
            continue
        out += h_end * T / (alpha - 1.0)
    return out


def y_norm(field: Field, region: ChannelRegion, t_window: tuple[float, float] | None = None,
           *, scales: Sequence[float] = (1.0,), time_decay: float | None = None,
           resolution: int = 1) -> NormValue:
    """Mixed ``L^5_t L^10_x`` norm of ``field`` over ``region``.

    ``(int (int |f|^10 4 pi r^2 dr)^{1/2} dt)^{1/5}``

    Parameters
    ----------
    field : callable
        ``field(r, t)`` vectorized over broadcastable arrays.
    region : ChannelRegion
    t_window : (float, float), optional
        Restrict the time axis; without it the whole line is used and the
        tail beyond the last panel is bounded from the integrand decay.
    scales : sequence of float
        Characteristic lengths of the field; used to place panels.
    time_decay : float, optional
        Known power-law decay exponent of the time integrand.
    resolution : int
        Multiplies the number of nodes per panel and panels per octave.

    Returns
    -------
    NormValue
    """
    return _mixed_norm(field, region, 5.0, 10.0, t_window, scales, time_decay, resolution)


def l1l2_norm(field: Field, region: ChannelRegion, t_window: tuple[float, float] | None = None,
              *, scales: Sequence[float] = (1.0,), time_decay: float | None = None,
              resolution: int = 1) -> NormValue:
    """Mixed ``L^1_t L^2_x`` norm of ``field`` over ``region``.

    ``int (int |f|^2 4 pi r^2 dr)^{1/2} dt``; see :func:`y_norm` for the
    parameters.
    """
    return _mixed_norm(field, region, 1.0, 2.0, t_window, scales, time_decay, resolution)


def static(f: Callable[[np.ndarray], np.ndarray]) -> Field:
    """Wrap a time-independent radial function as a space-time field."""
    def fieldf(r, t):
        return f(r)
    return fieldf
