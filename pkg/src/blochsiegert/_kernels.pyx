# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: cyclic Jacobi eigensolver and RK4 two-level propagation.

Signatures and return values mirror :mod:`blochsiegert._kernels_py` exactly.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, cos

cnp.import_array()

cdef double EPS = 2.220446049250313e-16


def jacobi_eigh(a_in, double rtol=1e-13, int max_sweeps=100):
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Returns ``(diag, V, sweeps, off)`` where ``diag`` is unsorted, columns of
    ``V`` are eigenvectors and ``off`` is the final off-diagonal Frobenius norm.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] arr = np.array(a_in, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] varr = np.eye(n, dtype=np.float64)
    cdef double[:, ::1] a = arr
    cdef double[:, ::1] v = varr
    cdef Py_ssize_t p, q, r
    cdef double apq, app, aqq, theta, t, c, s, tau, g, h
    cdef double frob = 0.0, off = 0.0
    cdef int sweep = 0

    with nogil:
        for p in range(n):
            for q in range(n):
                frob += a[p, q] * a[p, q]
        frob = sqrt(frob)
        while True:
            off = 0.0
            for p in range(n):
                for q in range(p + 1, n):
                    off += 2.0 * a[p, q] * a[p, q]
            off = sqrt(off)
            if off <= rtol * frob or sweep >= max_sweeps:
                break
            sweep += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    app = a[p, p]
                    aqq = a[q, q]
                    if sweep > 4 and fabs(apq) < EPS * fabs(app) and fabs(apq) < EPS * fabs(aqq):
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                        continue
                    theta = (aqq - app) / (2.0 * apq)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    tau = s / (1.0 + c)
                    for r in range(n):
                        if r == p or r == q:
                            continue
                        g = a[r, p]
                        h = a[r, q]
                        a[r, p] = g - s * (h + g * tau)
                        a[r, q] = h + s * (g - h * tau)
                        a[p, r] = a[r, p]
                        a[q, r] = a[r, q]
                    a[p, p] = app - t * apq
                    a[q, q] = aqq + t * apq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for r in range(n):
                        g = v[r, p]
                        h = v[r, q]
                        v[r, p] = g - s * (h + g * tau)
                        v[r, q] = h + s * (g - h * tau)

    return np.diagonal(arr).copy(), varr, sweep, off


cdef inline void _rhs(double w0h, double f, double complex d, double complex u,
                      double complex* kd, double complex* ku) noexcept nogil:
    # -i H psi with H = [[-w0/2, f], [f, w0/2]] in the (down, up) basis
    kd[0] = -1j * (-w0h * d + f * u)
    ku[0] = -1j * (f * d + w0h * u)


def rk4_average(double omega0, double amplitude, double omega,
                long n_periods, long steps_per_period, double phase=0.0):
    """Propagate from spin-down under a cos(omega t + phase) drive.

    Returns (trapezoid time average of P_up, final norm^2).
    """
    cdef long m = n_periods * steps_per_period
    cdef double period = 2.0 * np.pi / omega
    cdef double dt = period / steps_per_period
    cdef double w0h = 0.5 * omega0
    cdef double half_a = 0.5 * amplitude
    cdef double complex d = 1.0, u = 0.0
    cdef double complex k1d, k1u, k2d, k2u, k3d, k3u, k4d, k4u
    cdef double t, f0, fm, f1, pu
    cdef double acc = 0.0
    cdef long j
    with nogil:
        for j in range(m):
            t = j * dt
            f0 = half_a * cos(omega * t + phase)
            fm = half_a * cos(omega * (t + 0.5 * dt) + phase)
            f1 = half_a * cos(omega * (t + dt) + phase)
            _rhs(w0h, f0, d, u, &k1d, &k1u)
            _rhs(w0h, fm, d + 0.5 * dt * k1d, u + 0.5 * dt * k1u, &k2d, &k2u)
            _rhs(w0h, fm, d + 0.5 * dt * k2d, u + 0.5 * dt * k2u, &k3d, &k3u)
            _rhs(w0h, f1, d + dt * k3d, u + dt * k3u, &k4d, &k4u)
            d = d + dt / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
            u = u + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
            pu = u.real * u.real + u.imag * u.imag
            # trapezoid weights; the t=0 sample is P_up(0) = 0
            if j == m - 1:
                acc += 0.5 * pu
            else:
                acc += pu
    return acc / m, d.real * d.real + d.imag * d.imag + u.real * u.real + u.imag * u.imag
