"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``."""
from __future__ import annotations

import math

import numpy as np

EPS = np.finfo(float).eps


def jacobi_eigh(a_in, rtol: float = 1e-13, max_sweeps: int = 100):
    a = np.array(a_in, dtype=float, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    frob = math.sqrt(float(np.sum(a * a)))
    sweep = 0
    while True:
        off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
        if off <= rtol * frob or sweep >= max_sweeps:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                if sweep > 4 and abs(apq) < EPS * abs(app) and abs(apq) < EPS * abs(aqq):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0)), theta)
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                g = a[:, p].copy()
                h = a[:, q].copy()
                a[:, p] = g - s * (h + g * tau)
                a[:, q] = h + s * (g - h * tau)
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                g = v[:, p].copy()
                h = v[:, q].copy()
                v[:, p] = g - s * (h + g * tau)
                v[:, q] = h + s * (g - h * tau)
    return np.diag(a).copy(), v, sweep, off


def rk4_average(omega0: float, amplitude: float, omega: float,
                n_periods: int, steps_per_period: int, phase: float = 0.0):
    m = n_periods * steps_per_period
    dt = 2.0 * math.pi / omega / steps_per_period
    w0h = 0.5 * omega0
    half_a = 0.5 * amplitude
    d, u = 1.0 + 0j, 0j
    acc = 0.0
    cos = math.cos
    for j in range(m):
        t = j * dt
        f0 = half_a * cos(omega * t + phase)
        fm = half_a * cos(omega * (t + 0.5 * dt) + phase)
        f1 = half_a * cos(omega * (t + dt) + phase)
        k1d = -1j * (-w0h * d + f0 * u)
        k1u = -1j * (f0 * d + w0h * u)
        d2, u2 = d + 0.5 * dt * k1d, u + 0.5 * dt * k1u
        k2d = -1j * (-w0h * d2 + fm * u2)
        k2u = -1j * (fm * d2 + w0h * u2)
        d3, u3 = d + 0.5 * dt * k2d, u + 0.5 * dt * k2u
        k3d = -1j * (-w0h * d3 + fm * u3)
        k3u = -1j * (fm * d3 + w0h * u3)
        d4, u4 = d + dt * k3d, u + dt * k3u
        k4d = -1j * (-w0h * d4 + f1 * u4)
        k4u = -1j * (f1 * d4 + w0h * u4)
        d = d + dt / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
        u = u + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        pu = u.real * u.real + u.imag * u.imag
        # trapezoid weights; the t=0 sample is P_up(0) = 0
        acc += 0.5 * pu if j == m - 1 else pu
    return acc / m, abs(d) ** 2 + abs(u) ** 2
