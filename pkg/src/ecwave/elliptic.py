"""
Corrector for the linearized ground-state equation.

Radial solutions of ``-Delta phi = 5 W^4 phi + 5 W^4`` are written as
``phi = w / r``, which turns the problem into the line equation

    -w'' = q(r) (w + r),        q(r) = 5 (1/3 + r^2)^{-2}.

The decaying solution ``w*`` (``w* ~ -5/(2r)`` at infinity) is obtained by
inward integration from a large radius, started from its asymptotic series.
Its value at the origin ``mu0 = w*(0)`` produces the ``1/r`` singularity of
``phi``.  The homogeneous solution ``v = r (r^2 - 1/3) (1/3 + r^2)^{-3/2}``
tends to 1 at infinity, and ``w = w* + beta v`` with ``beta = -w*(c)/v(c)``
vanishes at the matching radius ``c``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import numpy.typing as npt
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import BPoly, PPoly

from .core_fields import (
    ChannelRegion,
    NormValue,
    RadialProfile,
    StatePair,
    channel,
    exterior,
    h_norm,
    l1l2_norm,
    make_grid,
    static,
)
from .ground_state import eval_W


class EllipticSolverError(ArithmeticError):
    """Integration or extrapolation failure in the corrector construction."""


def potential(r: npt.ArrayLike) -> np.ndarray:
    """``q(r) = 5 (1/3 + r^2)^{-2} = 5 W(r)^4``."""
    r = np.asarray(r, dtype=float)
    return 5.0 / (1.0 / 3.0 + r * r) ** 2


def homogeneous_v(r: npt.ArrayLike) -> np.ndarray:
    """Bounded homogeneous solution ``v = r (r^2 - 1/3) (1/3 + r^2)^{-3/2}``."""
    r = np.asarray(r, dtype=float)
    return r * (r * r - 1.0 / 3.0) * (1.0 / 3.0 + r * r) ** -1.5


def homogeneous_v_slope(r: npt.ArrayLike) -> np.ndarray:
    """``v'(r) = (5 r^2 / 3 - 1/9) (1/3 + r^2)^{-5/2}``."""
    r = np.asarray(r, dtype=float)
    r2 = r * r
    return (5.0 * r2 / 3.0 - 1.0 / 9.0) * (1.0 / 3.0 + r2) ** -2.5


def asymptotic_coefficients(n_terms: int = 6) -> np.ndarray:
    """Coefficients ``a_k`` of ``w* ~ sum_k a_k r^{-k}`` (index = power).

    Matching powers in ``w'' = -q (w + r)`` with
    ``q = sum_j 5 (-1)^j (j + 1) 3^{-j} r^{-4-2j}`` gives
    ``a_n n (n + 1) = [r^{-n-2}] (-q (r + w))``, which only involves
    coefficients with smaller index.  Even powers vanish.
    """
    kmax = 2 * n_terms + 1
    a = np.zeros(kmax + 1)

    def qj(j):
        return 5.0 * (-1) ** j * (j + 1) * 3.0**-j

    for n in range(1, kmax + 1):
        p = n + 2
        rhs = 0.0
        # -q r term: powers 3 + 2j
        if (p - 3) % 2 == 0 and p >= 3:
            rhs -= qj((p - 3) // 2)
        # -q w term: powers 4 + 2j + m
        for m in range(1, n):
            rest = p - 4 - m
            if rest >= 0 and rest % 2 == 0:
                rhs -= qj(rest // 2) * a[m]
        a[n] = rhs / (n * (n + 1))
    return a


def asymptotic_w_star(r: npt.ArrayLike, n_terms: int = 6) -> tuple[np.ndarray, np.ndarray]:
    """Series value and slope of ``w*`` for large ``r``."""
    r = np.asarray(r, dtype=float)
    a = asymptotic_coefficients(n_terms)
    k = np.arange(a.size)
    val = np.zeros_like(r)
    der = np.zeros_like(r)
    for kk, ak in zip(k[1:], a[1:]):
        if ak != 0.0:
            val = val + ak * r ** (-kk)
            der = der - kk * ak * r ** (-kk - 1.0)
    return val, der


def _rhs(r, y):
    q = 5.0 / (1.0 / 3.0 + r * r) ** 2
    return np.array([y[1], -q * (y[0] + r)])


def _rhs_log(x, y):
    # y = (w, r w_r) as functions of x = ln r
    r = math.exp(x)
    q = 5.0 / (1.0 / 3.0 + r * r) ** 2
    return np.array([y[1], y[1] - r * r * q * (y[0] + r)])


@dataclass
class WStarSolution:
    """Decaying solution ``w*`` with diagnostics.

    Attributes
    ----------
    profile : RadialProfile
        ``w*`` with exact slopes on a logarithmic grid.
    mu0 : float
        ``w*(0)``.
    mu0_error : float
        Difference between the last two extrapolation levels.
    r_infinity : float
    tol : float
    slope0 : float
        ``w*'(0)``.
    dense : PPoly, optional
        Quintic Hermite interpolant of ``w*`` in ``ln r`` for fast evaluation.
    ode : callable, optional
        Dense output of the integrator in ``ln r``, used for slopes.
    """

    profile: RadialProfile
    mu0: float
    mu0_error: float
    r_infinity: float
    tol: float
    slope0: float = 0.0
    dense: object = field(default=None, repr=False)
    ode: object = field(default=None, repr=False)

    def _split(self, r):
        g = self.profile.grid
        lo = r < g.r_min
        hi = r > g.r_max
        return lo, hi, ~(lo | hi)

    def _inner(self, r: np.ndarray, k: int) -> np.ndarray:
        if r.size == 0:
            return r.copy()
        if self.dense is not None:
            x = np.log(r)
            if k == 0:
                return self.dense(x)
            # slopes from the integrator: r w_r is tiny near the origin
            return self.ode(x)[1] / r
        g = self.profile.grid
        if k == 0:
            return self.profile(r)
        return self.profile._interpolant().derivative()(g.coordinate(r)) / g.jacobian(r)

    def __call__(self, r: npt.ArrayLike) -> np.ndarray:
        """``w*(r)``; Taylor expansion below the grid, series beyond it."""
        r = np.asarray(r, dtype=float)
        out = np.empty_like(r)
        lo, hi, mid = self._split(r)
        out[lo] = self.mu0 + self.slope0 * r[lo]
        out[mid] = self._inner(r[mid], 0)
        out[hi] = asymptotic_w_star(r[hi])[0]
        return out

    def slope(self, r: npt.ArrayLike) -> np.ndarray:
        """``w*'(r)``."""
        r = np.asarray(r, dtype=float)
        out = np.empty_like(r)
        lo, hi, mid = self._split(r)
        out[lo] = self.slope0
        out[mid] = self._inner(r[mid], 1)
        out[hi] = asymptotic_w_star(r[hi])[1]
        return out


def solve_w_star(r_infinity: float = 1e4, tol: float = 1e-12, r_floor: float = 1e-8,
                 per_decade: int = 400) -> WStarSolution:
    """Integrate ``-w'' = q (w + r)`` inward from ``r_infinity``.

    Parameters
    ----------
    r_infinity : float
        Start radius, at least ``1e4``; the asymptotic series supplies
        ``(w, w')`` there.
    tol : float
        Relative tolerance of the adaptive 8th-order integrator, at least
        ``1e-12``; the error control is purely relative.
    r_floor : float
        Innermost radius; ``mu0`` is extrapolated from radii near it.
    per_decade : int
        Output nodes per decade.

    Returns
    -------
    WStarSolution

    Raises
    ------
    EllipticSolverError
        Integrator failure or an extrapolation that does not settle.
    """
    if r_infinity < 1e4:
        raise ValueError("r_infinity must be at least 1e4")
    if tol < 1e-12:
        raise ValueError("tol must be at least 1e-12")
    w0, dw0 = asymptotic_w_star(np.array([r_infinity]))
    # inward in x = ln r, where the steps follow the scale of the solution
    x_lo = math.log(r_floor) - 1.0
    sol = solve_ivp(_rhs_log, (math.log(r_infinity), x_lo), [w0[0], r_infinity * dw0[0]],
                    method="DOP853", rtol=tol, atol=1e-30, dense_output=True)
    if not sol.success:
        raise EllipticSolverError(f"inward integration failed: {sol.message}")
    decades = math.log10(r_infinity / r_floor)
    grid = make_grid(r_floor, r_infinity, int(per_decade * decades) + 1, "logarithmic")
    x = np.log(grid.nodes)
    y = sol.sol(x)
    profile = RadialProfile(grid, y[0], 1.0, y[1] / grid.nodes)
    # quintic Hermite in x using w_xx = w_x - r^2 q (w + r) from the equation
    r = grid.nodes
    wxx = y[1] - r * r * potential(r) * (y[0] + r)
    quintic = PPoly.from_bernstein_basis(BPoly.from_derivatives(x, np.column_stack((y[0], y[1], wxx))))
    # Richardson extrapolation in h of w(h) = mu0 + w'(0) h + O(h^2)
    hs = r_floor * 2.0 ** np.arange(4, -1, -1)
    vals = sol.sol(np.log(hs))[0]
    table = [vals]
    for level in range(1, vals.size):
        prev = table[-1]
        table.append((2.0**level * prev[1:] - prev[:-1]) / (2.0**level - 1.0))
    mu0 = float(table[-1][0])
    err = abs(float(table[-1][0] - table[-2][-1]))
    if not np.isfinite(mu0) or err > 1e3 * tol * max(abs(mu0), 1.0):
        raise EllipticSolverError("extrapolation to the origin did not converge")
    slope0 = float(sol.sol(math.log(hs[-1]))[1] / hs[-1])
    return WStarSolution(profile, mu0, err, r_infinity, tol, slope0, quintic, sol.sol)


def _gauss_legendre_tableau(stages: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x, wts = np.polynomial.legendre.leggauss(stages)
    c = 0.5 * (x + 1.0)
    b = 0.5 * wts
    A = np.empty((stages, stages))
    for j in range(stages):
        others = np.delete(c, j)
        poly = np.poly1d(np.poly(others)) / np.prod(c[j] - others)
        anti = np.polyint(poly)
        A[:, j] = anti(c) - anti(0.0)
    return A, b, c


def mu0_gauss_legendre(r_infinity: float = 2e4, steps: int = 4000) -> float:
    """Independent value of ``mu0`` from a fixed-step collocation method.

    Four-stage Gauss-Legendre (order 8) in the variable ``s = ln(1 + r)``
    from ``r_infinity`` down to ``r = 0``.  The equation is linear, so each
    step solves the stage system exactly.
    """
    A, b, c = _gauss_legendre_tableau(4)
    m = c.size
    s_end = math.log1p(r_infinity)
    hstep = -s_end / steps
    w0, dw0 = asymptotic_w_star(np.array([r_infinity]))
    y = np.array([w0[0], dw0[0]])
    s = s_end
    eye = np.eye(2 * m)
    for _ in range(steps):
        ss = s + c * hstep
        rr = np.expm1(ss)
        jac = 1.0 + rr
        q = potential(rr)
        # stage derivatives K_i = M_i (y + h sum_j A_ij K_j) + f_i
        big = np.zeros((2 * m, 2 * m))
        f = np.zeros(2 * m)
        rhs_y = np.zeros(2 * m)
        for i in range(m):
            Mi = jac[i] * np.array([[0.0, 1.0], [-q[i], 0.0]])
            fi = jac[i] * np.array([0.0, -q[i] * rr[i]])
            for j in range(m):
                big[2 * i:2 * i + 2, 2 * j:2 * j + 2] = hstep * A[i, j] * Mi
            rhs_y[2 * i:2 * i + 2] = Mi @ y
            f[2 * i:2 * i + 2] = fi
        K = np.linalg.solve(eye - big, rhs_y + f).reshape(m, 2)
        y = y + hstep * (b @ K)
        s += hstep
    return float(y[0])


def ode_residual(ws: WStarSolution, r: npt.ArrayLike) -> np.ndarray:
    """Integral-form residual on consecutive sample intervals.

    For each ``[a, b]`` between sorted sample radii returns
    ``|w'(b) - w'(a) + int_a^b q (w + r) dr|`` divided by the local scale
    ``int_a^b |q (w + r)| dr + |w'(a)|``.
    """
    r = np.sort(np.asarray(r, dtype=float))
    out = []
    for a, bnd in zip(r[:-1], r[1:]):
        f = lambda x: float(potential(x) * (ws(np.array([x]))[0] + x))
        val, _ = quad(f, a, bnd, epsabs=0, epsrel=1e-13, limit=200)
        mag, _ = quad(lambda x: abs(f(x)), a, bnd, epsabs=0, epsrel=1e-10, limit=200)
        d = ws.slope(np.array([a, bnd]))
        out.append(abs(d[1] - d[0] + val) / (mag + abs(d[0])))
    return np.array(out)


def regular_solution(slope0: float, r_max: float) -> tuple[np.ndarray, np.ndarray]:
    """Outward solution with ``w(0) = 0, w'(0) = slope0``; returns ``(r, w)``."""
    sol = solve_ivp(_rhs, (0.0, r_max), [0.0, slope0], method="DOP853", rtol=1e-11,
                    atol=1e-14, dense_output=True)
    r = np.geomspace(1e-3, r_max, 200)
    return r, sol.sol(r)[0]


@dataclass
class EllipticSolution:
    """Corrector ``phi = (w* + beta v) / r`` vanishing at ``r = c``.

    Attributes
    ----------
    c : float
        Matching radius.
    beta : float
        ``-w*(c) / v(c)``.
    mu0 : float
        ``w*(0)``.
    w_star : WStarSolution
    phi : RadialProfile
        ``phi`` on the ``w*`` grid, decaying like ``1/r``.
    r4 : float
        Largest radius with ``r phi(r) / mu0`` in ``[1/2, 3/2]`` on all of
        ``(0, r4]``.
    """

    c: float
    beta: float
    mu0: float
    w_star: WStarSolution
    phi: RadialProfile
    r4: float = field(default=float("nan"))

    def w(self, r: npt.ArrayLike) -> np.ndarray:
        """``w = r phi``."""
        return self.w_star(r) + self.beta * homogeneous_v(r)

    def __call__(self, r: npt.ArrayLike) -> np.ndarray:
        """``phi(r)`` for ``r > 0``."""
        r = np.asarray(r, dtype=float)
        return self.w(r) / r

    def derivative(self, r: npt.ArrayLike) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        dw = self.w_star.slope(r) + self.beta * homogeneous_v_slope(r)
        return (dw - self.w(r) / r) / r

    def save(self, directory: str | Path) -> None:
        """``corrector.csv`` with columns r, w_star, v, phi plus ``corrector.json``."""
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        r = self.phi.grid.nodes
        cols = np.column_stack((r, self.w_star.profile.values, homogeneous_v(r), self.phi.values))
        with open(d / "corrector.csv", "w") as fh:
            fh.write("r,w_star,v,phi\n")
            for row in cols:
                fh.write(",".join(f"{x:.17g}" for x in row) + "\n")
        meta = {"c": self.c, "beta": self.beta, "mu0": self.mu0, "r4": self.r4,
                "r_infinity": self.w_star.r_infinity, "tol": self.w_star.tol,
                "mu0_extrapolation_error": self.w_star.mu0_error}
        (d / "corrector.json").write_text(json.dumps(meta, indent=2, sort_keys=True))


def _band_radius(sol_w, mu0: float, r_hi: float) -> float:
    r = np.geomspace(1e-8, r_hi, 4000)
    ratio = sol_w(r) / mu0
    bad = np.nonzero((ratio < 0.5) | (ratio > 1.5))[0]
    if bad.size == 0:
        return float(r[-1])
    if bad[0] == 0:
        return 0.0
    return float(r[bad[0] - 1])


def build_phi(c: float, w_star: WStarSolution | None = None) -> EllipticSolution:
    """Corrector vanishing at ``r = c``.

    Parameters
    ----------
    c : float
        Matching radius; must stay clear of the zero ``1/sqrt(3)`` of ``v``.
    w_star : WStarSolution, optional
        Reused decaying solution (computed when omitted).

    Returns
    -------
    EllipticSolution

    Raises
    ------
    ValueError
        ``v(c)`` too close to zero.
    """
    if w_star is None:
        w_star = solve_w_star()
    vc = float(homogeneous_v(c))
    if abs(vc) < 1e-3:
        raise ValueError("v(c) is nearly zero; choose c away from 1/sqrt(3)")
    beta = -float(w_star(np.array([c]))[0]) / vc
    grid = w_star.profile.grid
    r = grid.nodes
    w = w_star.profile.values + beta * homogeneous_v(r)
    dw = w_star.profile.slope + beta * homogeneous_v_slope(r)
    phi = RadialProfile(grid, w / r, 1.0, (dw - w / r) / r)
    sol = EllipticSolution(c, beta, w_star.mu0, w_star, phi)
    sol.r4 = _band_radius(sol.w, w_star.mu0, max(c, 10.0))
    return sol


def empirical_c5(w_star: WStarSolution, c_grid: npt.ArrayLike | None = None,
                 band: tuple[float, float] = (1.25, 5.0)) -> float:
    """Smallest grid value of ``c`` from which ``|beta| c`` stays in ``band``.

    The default band is a factor 2 on either side of the limit ``5/2``.
    """
    cs = np.geomspace(1.0, 1e4, 81) if c_grid is None else np.sort(np.asarray(c_grid, dtype=float))
    ok = []
    for c in cs:
        b = -float(w_star(np.array([c]))[0]) / float(homogeneous_v(c))
        ok.append(band[0] <= abs(b) * c <= band[1])
    ok = np.array(ok)
    if not ok[-1]:
        raise EllipticSolverError("|beta| c leaves the band at the largest c")
    first = ok.size - 1
    while first > 0 and ok[first - 1]:
        first -= 1
    return float(cs[first])


def phi_channel_norm(sol: EllipticSolution, lam: float, r1: float, r2: float,
                     resolution: int = 1) -> NormValue:
    """``|| chi_{r1,r2} W_lam^4 phi ||_{L^1 L^2}`` over the light-cone channel."""
    if not 0 <= r1 <= r2:
        raise ValueError("need 0 <= r1 <= r2")
    if r1 == r2:
        return NormValue(0.0, 0.0, (0.0, 0.0), 0.0)
    wl = lambda r: lam**-0.5 * eval_W(r / lam)
    fld = static(lambda r: wl(r) ** 4 * sol(r))
    return l1l2_norm(fld, channel(r1, r2), scales=(lam, r2 - r1, sol.c), time_decay=4.0,
                     resolution=resolution)


def laplacian_norm(sol: EllipticSolution, resolution: int = 1) -> NormValue:
    """``|| chi_0 Delta phi ||_{L^1 L^2}`` with ``Delta phi = -5 W^4 (phi + 1)``."""
    fld = static(lambda r: -5.0 * eval_W(r) ** 4 * (sol(r) + 1.0))
    return l1l2_norm(fld, exterior(0.0), scales=(1.0, sol.c),
                     resolution=resolution)


def exterior_gradient_norm(sol: EllipticSolution, R: float) -> float:
    """``||phi||_{Hdot^1(|x| > R)}`` for ``R`` inside the grid."""
    g = sol.phi.grid
    zero = RadialProfile(g, np.zeros_like(g.nodes), 2.0)
    return h_norm(StatePair(sol.phi, zero), R)
