"""Closed-form Bloch-Siegert shift evaluators.

Every evaluator takes a :class:`RabiParams` and returns a :class:`ShiftReport`.
The extrapolated formulas use coefficients derived exactly in
:mod:`blochsiegert.series`; nothing is hard-coded here except the
perturbation coefficients that :mod:`series` exposes.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .series import ExtrapolationFormula, derive_formula, pt_series, SUPPORTED_ORDERS

__all__ = [
    "Method",
    "RabiParams",
    "ShiftReport",
    "extrapolated_shift",
    "pt_shift",
    "rwa_shift",
    "asymptotic_shift",
    "bessel_j0",
    "bessel_j1",
    "bessel_j0_first_zero",
    "relative_extrapolated_shift",
    "relative_pt_shift",
    "regime",
]


class Method(str, enum.Enum):
    PT2 = "PT2"
    PT4 = "PT4"
    PT6 = "PT6"
    PT8 = "PT8"
    EXTRAP2 = "EXTRAP2"
    EXTRAP4 = "EXTRAP4"
    EXTRAP6 = "EXTRAP6"
    EXTRAP8 = "EXTRAP8"
    RWA = "RWA"
    ASYMPTOTIC = "ASYMPTOTIC"
    FLOQUET = "FLOQUET"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RabiParams:
    """Level splitting ``omega0`` and drive amplitude ``amplitude`` (same units)."""

    omega0: float
    amplitude: float

    def __post_init__(self):
        omega0 = float(self.omega0)
        amplitude = float(self.amplitude)
        if not math.isfinite(omega0) or omega0 <= 0:
            raise ValueError(f"omega0 must be a finite positive number, got {self.omega0!r}")
        if not math.isfinite(amplitude) or amplitude < 0:
            raise ValueError(f"amplitude must be finite and non-negative, got {self.amplitude!r}")
        object.__setattr__(self, "omega0", omega0)
        object.__setattr__(self, "amplitude", amplitude)

    @property
    def ratio(self) -> float:
        return self.amplitude / self.omega0

    def scaled(self, factor: float) -> RabiParams:
        return RabiParams(self.omega0 * factor, self.amplitude * factor)


@dataclass(frozen=True)
class ShiftReport:
    method: Method
    params: RabiParams
    shift: float
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def resonance(self) -> float:
        return self.params.omega0 + self.shift

    @property
    def relative_shift(self) -> float:
        return self.shift / self.params.omega0

    def to_dict(self) -> dict[str, Any]:
        return {
            "method": str(self.method),
            "omega0": self.params.omega0,
            "amplitude": self.params.amplitude,
            "shift": self.shift,
            "resonance": self.resonance,
            "diagnostics": dict(self.diagnostics),
        }


def regime(ratio: float) -> str:
    if ratio < 0.5:
        return "weak"
    if ratio > 5:
        return "strong"
    return "intermediate"


def _check_params(p: RabiParams) -> RabiParams:
    if not isinstance(p, RabiParams):
        raise TypeError(f"expected RabiParams, got {type(p).__name__}")
    return p


def _formula(order: int | ExtrapolationFormula) -> ExtrapolationFormula:
    if isinstance(order, ExtrapolationFormula):
        return order
    return _cached_formula(order)


@functools.lru_cache(maxsize=None)
def _cached_formula(order: int) -> ExtrapolationFormula:
    return derive_formula(order)


def _to_ctx(ctx, c: Fraction):
    return ctx.mpf(c.numerator) / c.denominator


def relative_extrapolated_shift(x, order: int | ExtrapolationFormula = 8, ctx=None):
    """Return ``shift / omega0`` of the extrapolated formula at ``x = A / omega0``.

    With ``ctx=None`` the value is a float computed in a form that neither
    overflows for huge ``x`` nor cancels for tiny ``x``.  Passing an mpmath
    context (e.g. ``mpmath.mp``) evaluates the plain formula in that
    context's working precision instead.
    """
    f = _formula(order)
    n = f.order
    if ctx is not None:
        x = ctx.mpf(x)
        radicand = 1 + sum(_to_ctx(ctx, d) * x ** (2 * k) for k, d in enumerate(f.d, start=1))
        return ctx.root(radicand, n) - 1

    x = float(x)
    d = [float(c) for c in f.d]
    if x <= 1.0:
        r = sum(dk * x ** (2 * k) for k, dk in enumerate(d, start=1))
        return math.expm1(math.log1p(r) / n)
    # Factor out the leading term: radicand = d_top x^n (1 + u).
    top = d[-1]
    inv_x2 = 1.0 / (x * x)
    coeffs = [1.0] + d[:-1]
    u = sum(c / top * inv_x2 ** (n // 2 - k) for k, c in enumerate(coeffs))
    return x * top ** (1.0 / n) * math.exp(math.log1p(u) / n) - 1.0


def relative_pt_shift(x, order: int = 8, ctx=None):
    """Raw truncated perturbation series for ``shift / omega0``."""
    coeffs = pt_series(order).coeffs[1:]
    if ctx is not None:
        x = ctx.mpf(x)
        return sum(_to_ctx(ctx, c) * x ** (2 * k) for k, c in enumerate(coeffs, start=1))
    x = float(x)
    return sum(float(c) * x ** (2 * k) for k, c in enumerate(coeffs, start=1))


def _check_order(order: int) -> int:
    if isinstance(order, bool) or not isinstance(order, (int,)) or order not in SUPPORTED_ORDERS:
        raise ValueError(f"order must be one of {SUPPORTED_ORDERS}, got {order!r}")
    return order


def extrapolated_shift(p: RabiParams, order: int) -> ShiftReport:
    """Bloch-Siegert shift from the order-``order`` extrapolation formula."""
    p = _check_params(p)
    order = _check_order(order)
    x = p.ratio
    shift = p.omega0 * relative_extrapolated_shift(x, order) if x > 0 else 0.0
    return ShiftReport(
        method=Method(f"EXTRAP{order}"),
        params=p,
        shift=shift,
        diagnostics={
            "order": order,
            "representation": "small-x" if x <= 1.0 else "large-x",
            "regime": regime(x),
        },
    )


def pt_shift(p: RabiParams, order: int) -> ShiftReport:
    """Truncated perturbation series; diverges like ``omega0**(1-order)`` as omega0 -> 0."""
    p = _check_params(p)
    order = _check_order(order)
    x = p.ratio
    shift = p.omega0 * relative_pt_shift(x, order) if x > 0 else 0.0
    return ShiftReport(
        method=Method(f"PT{order}"),
        params=p,
        shift=shift,
        diagnostics={"order": order, "terms": order // 2, "regime": regime(x)},
    )


def rwa_shift(p: RabiParams) -> ShiftReport:
    p = _check_params(p)
    return ShiftReport(Method.RWA, p, 0.0, {"regime": regime(p.ratio)})


def asymptotic_shift(p: RabiParams) -> ShiftReport:
    """Strong-driving limit ``A / j01``; flagged unreliable below ``A/omega0 = 10``."""
    p = _check_params(p)
    j01 = bessel_j0_first_zero()
    x = p.ratio
    return ShiftReport(
        Method.ASYMPTOTIC,
        p,
        p.amplitude / j01,
        {"divisor": j01, "regime": regime(x), "asymptote_reliable": x >= 10.0},
    )


def bessel_j0(x: float) -> float:
    """J0 from its ascending series (accurate for the small arguments used here)."""
    term = 1.0
    total = 1.0
    q = -0.25 * x * x
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        total += term
        if abs(term) < 1e-17 * abs(total):
            return total


def bessel_j1(x: float) -> float:
    term = 0.5 * x
    total = term
    q = -0.25 * x * x
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + 1))
        total += term
        if abs(term) < 1e-17 * max(abs(total), 1e-300):
            return total


@functools.cache
def bessel_j0_first_zero() -> float:
    """Smallest positive zero of J0: bisection on [2, 3], then Newton polishing."""
    # functools.cache may compute twice under a concurrent first call; the
    # computation is deterministic so every caller still sees the same value.
    lo, hi = 2.0, 3.0
    flo = bessel_j0(lo)
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        fmid = bessel_j0(mid)
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(20):
        step = bessel_j0(x) / -bessel_j1(x)
        x -= step
        if abs(step) <= 4 * math.ulp(x):
            break
    return x
