# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops of the radial evolver."""

from libc.math cimport sqrt, fabs, floor

cdef double FOUR_PI = 12.566370614359172


cdef inline double _u_at(const double[::1] psi, double h, Py_ssize_t n, double rho) nogil:
    """u = psi/rho with psi linearly interpolated; rho inside the grid."""
    cdef double x = rho / h
    cdef Py_ssize_t i = <Py_ssize_t> floor(x)
    cdef double w
    if i >= n - 1:
        return psi[n - 1] / rho
    if i < 1:
        # parity expansion psi = a r + b r^3 near the origin
        return (8.0 * psi[1] - psi[2]) / (6.0 * h)
    w = x - i
    return ((1.0 - w) * psi[i] + w * psi[i + 1]) / rho


def acceleration(const double[::1] psi, const double[::1] r, double h, bint nonlinear,
                 double[::1] acc):
    """acc = psi_rr + r F(psi/r) at interior nodes; returns max |u|."""
    cdef Py_ssize_t n = psi.shape[0]
    cdef Py_ssize_t i
    cdef double inv_h2 = 1.0 / (h * h)
    cdef double u, umax = 0.0, u0
    with nogil:
        acc[0] = 0.0
        acc[n - 1] = 0.0
        for i in range(1, n - 1):
            acc[i] = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) * inv_h2
            u = psi[i] / r[i]
            if nonlinear:
                acc[i] += r[i] * u * u * u * u * u
            if fabs(u) > umax:
                umax = fabs(u)
        u0 = fabs((8.0 * psi[1] - psi[2]) / (6.0 * h))
        if u0 > umax:
            umax = u0
    return umax


cdef void _char_sample(const double[::1] psi, double h, Py_ssize_t n, double r_last,
                       const double[::1] labels, double t, double[::1] out) nogil:
    cdef Py_ssize_t k
    cdef double rho, u
    for k in range(labels.shape[0]):
        rho = labels[k] + t
        if rho <= 0.0 or rho > r_last:
            out[k] = 0.0
        else:
            u = _u_at(psi, h, n, rho)
            out[k] = rho * u * u * u * u * u


cdef void _source_norms(const double[::1] psi, const double[::1] r, double h, Py_ssize_t n,
                        double t, double* full, double* ext) nogil:
    cdef Py_ssize_t i
    cdef double u, f, w, sf = 0.0, se = 0.0
    for i in range(1, n):
        u = psi[i] / r[i]
        f = u * u * u * u * u
        w = 0.5 if i == n - 1 else 1.0
        sf += w * f * f * r[i] * r[i]
        if r[i] > t:
            se += w * f * f * r[i] * r[i]
    full[0] = sqrt(FOUR_PI * h * sf)
    ext[0] = sqrt(FOUR_PI * h * se)


def characteristic_sample(const double[::1] psi, double h, const double[::1] labels, double t,
                          double[::1] out):
    """(s + t) F(u(s + t, t)) for each label s."""
    cdef Py_ssize_t n = psi.shape[0]
    with nogil:
        _char_sample(psi, h, n, h * (n - 1), labels, t, out)


def source_norms(const double[::1] psi, const double[::1] r, double h, double t):
    """(||F(u)||_{L^2}, ||F(u) 1_{r>t}||_{L^2}) at one time."""
    cdef double full = 0.0, ext = 0.0
    cdef Py_ssize_t n = psi.shape[0]
    with nogil:
        _source_norms(psi, r, h, n, t, &full, &ext)
    return full, ext


def advance(double[::1] psi, double[::1] vel, double[::1] acc, const double[::1] r, double h,
            double t, double t_stop, double dt_max, double dt_amp, double u_ceiling,
            bint nonlinear, const double[::1] labels, double[::1] char_sum,
            double[::1] char_prev, double[::1] char_new, double[::1] norms,
            double[:, ::1] hist, long hist_start, long max_steps, double umax):
    """Velocity-Verlet steps from t to t_stop.

    The step is min(dt_max, dt_amp / max|u|^2), shortened to land on t_stop.
    ``norms`` holds [int ||F|| dt, int ||F 1_{r>t}|| dt, ||F||(t), ||F 1_{r>t}||(t)].
    ``hist`` receives (t, max|u|, dt) rows from ``hist_start`` on.

    Returns (t, steps, status, max|u|, dt_last); status 0 reached t_stop,
    1 amplitude ceiling exceeded, 2 step budget exhausted.
    """
    cdef Py_ssize_t n = psi.shape[0]
    cdef Py_ssize_t i, k
    cdef Py_ssize_t nl = labels.shape[0]
    cdef double inv_h2 = 1.0 / (h * h)
    cdef double dt = dt_max, half, u, u0
    cdef double r_last = h * (n - 1)
    cdef double f_full = 0.0, f_ext = 0.0
    cdef long steps = 0
    cdef long hcap = hist.shape[0]
    cdef int status = 0
    with nogil:
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
            for i in range(1, n - 1):
                vel[i] += half * acc[i]
                psi[i] += dt * vel[i]
            umax = 0.0
            for i in range(1, n - 1):
                acc[i] = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) * inv_h2
                u = psi[i] / r[i]
                if nonlinear:
                    acc[i] += r[i] * u * u * u * u * u
                if fabs(u) > umax:
                    umax = fabs(u)
            u0 = fabs((8.0 * psi[1] - psi[2]) / (6.0 * h))
            if u0 > umax:
                umax = u0
            for i in range(1, n - 1):
                vel[i] += half * acc[i]
            t += dt
            steps += 1
            if nonlinear:
                if nl > 0:
                    _char_sample(psi, h, n, r_last, labels, t, char_new)
                    for k in range(nl):
                        char_sum[k] += half * (char_prev[k] + char_new[k])
                        char_prev[k] = char_new[k]
                _source_norms(psi, r, h, n, t, &f_full, &f_ext)
                norms[0] += half * (norms[2] + f_full)
                norms[1] += half * (norms[3] + f_ext)
                norms[2] = f_full
                norms[3] = f_ext
            if hist_start + steps - 1 < hcap:
                hist[hist_start + steps - 1, 0] = t
                hist[hist_start + steps - 1, 1] = umax
                hist[hist_start + steps - 1, 2] = dt
    return t, steps, status, umax, dt
