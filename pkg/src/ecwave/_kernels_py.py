"""Pure numpy versions of the evolver kernels (same signatures as the compiled ones)."""

from __future__ import annotations

import math

import numpy as np

FOUR_PI = 4.0 * math.pi


def _origin_u(psi: np.ndarray, h: float) -> float:
    return (8.0 * psi[1] - psi[2]) / (6.0 * h)


def acceleration(psi, r, h, nonlinear, acc):
    """acc = psi_rr + r F(psi/r) at interior nodes; returns max |u|."""
    acc[0] = 0.0
    acc[-1] = 0.0
    acc[1:-1] = (psi[2:] - 2.0 * psi[1:-1] + psi[:-2]) / (h * h)
    u = psi[1:-1] / r[1:-1]
    if nonlinear:
        acc[1:-1] += r[1:-1] * u**5
    umax = float(np.max(np.abs(u))) if u.size else 0.0
    return max(umax, abs(_origin_u(psi, h)))


def _u_at(psi, h, rho):
    n = psi.size
    x = rho / h
    i = np.floor(x).astype(np.int64)
    out = np.empty_like(rho)
    far = i >= n - 1
    near = i < 1
    mid = ~(far | near)
    out[far] = psi[n - 1] / rho[far]
    out[near] = _origin_u(psi, h)
    im = i[mid]
    w = x[mid] - im
    out[mid] = ((1.0 - w) * psi[im] + w * psi[im + 1]) / rho[mid]
    return out


def characteristic_sample(psi, h, labels, t, out):
    """(s + t) F(u(s + t, t)) for each label s."""
    rho = np.asarray(labels) + t
    r_last = h * (psi.size - 1)
    live = (rho > 0.0) & (rho <= r_last)
    out[:] = 0.0
    if np.any(live):
        u = _u_at(psi, h, rho[live])
        out[live] = rho[live] * u**5


def source_norms(psi, r, h, t):
    """(||F(u)||_{L^2}, ||F(u) 1_{r>t}||_{L^2}) at one time."""
    u = psi[1:] / r[1:]
    f2 = (u**5) ** 2 * r[1:] ** 2
    w = np.ones_like(f2)
    w[-1] = 0.5
    full = math.sqrt(FOUR_PI * h * float(np.sum(w * f2)))
    ext = math.sqrt(FOUR_PI * h * float(np.sum((w * f2)[r[1:] > t])))
    return full, ext


def advance(psi, vel, acc, r, h, t, t_stop, dt_max, dt_amp, u_ceiling, nonlinear, labels,
            char_sum, char_prev, char_new, norms, hist, hist_start, max_steps, umax):
    """Velocity-Verlet steps from t to t_stop; see the compiled version."""
    steps = 0
    status = 0
    dt = dt_max
    hcap = hist.shape[0]
    labels = np.asarray(labels)
    while t < t_stop:
        if steps >= max_steps:
            status = 2
            break
        if umax > u_ceiling:
            status = 1
            break
        dt = dt_max
        if umax > 0.0 and dt_amp / (umax * umax) < dt:
            dt = dt_amp / (umax * umax)
        if t + dt >= t_stop - 1e-9 * dt:
            dt = t_stop - t
        elif t + 1.5 * dt > t_stop:
            dt = 0.5 * (t_stop - t)
        half = 0.5 * dt
        vel[1:-1] += half * acc[1:-1]
        psi[1:-1] += dt * vel[1:-1]
        umax = acceleration(psi, r, h, nonlinear, acc)
        vel[1:-1] += half * acc[1:-1]
        t += dt
        steps += 1
        if nonlinear:
            if labels.size:
                characteristic_sample(psi, h, labels, t, char_new)
                char_sum += half * (char_prev + char_new)
                char_prev[:] = char_new
            f_full, f_ext = source_norms(psi, r, h, t)
            norms[0] += half * (norms[2] + f_full)
            norms[1] += half * (norms[3] + f_ext)
            norms[2] = f_full
            norms[3] = f_ext
        row = hist_start + steps - 1
        if row < hcap:
            hist[row, 0] = t
            hist[row, 1] = umax
            hist[row, 2] = dt
    return t, steps, status, umax, dt
