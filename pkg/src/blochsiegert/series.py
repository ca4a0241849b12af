"""Exact truncated even power series and extrapolation-formula derivation.

Series are kept in the dimensionless drive ``x = A / omega0`` and store only
the even powers: ``coeffs[k]`` multiplies ``x**(2*k)``.  All arithmetic is
done with :class:`fractions.Fraction`, so nothing in this module touches
floating point except :func:`asymptotic_divisor`, which reports a real limit.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Rational",
    "EvenSeries",
    "ExtrapolationFormula",
    "PT_COEFFICIENTS",
    "SUPPORTED_ORDERS",
    "pt_series",
    "series_pow",
    "derive_formula",
    "asymptotic_divisor",
]

Rational = Fraction

# Coefficients c_k of omega_res/omega0 = 1 + sum_k c_k (x/4)^(2k).
PT_COEFFICIENTS: tuple[Fraction, ...] = (
    Fraction(1),
    Fraction(1, 4),
    Fraction(-35, 32),
    Fraction(103, 128),
)

SUPPORTED_ORDERS = (2, 4, 6, 8)


def _check_order(order: int) -> int:
    if isinstance(order, bool) or int(order) != order:
        raise ValueError(f"order must be an even integer in {SUPPORTED_ORDERS}, got {order!r}")
    order = int(order)
    if order not in SUPPORTED_ORDERS:
        raise ValueError(f"order must be an even integer in {SUPPORTED_ORDERS}, got {order}")
    return order


@dataclass(frozen=True)
class EvenSeries:
    """Truncated series ``sum_k coeffs[k] * x**(2k)`` with exact coefficients."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[Fraction | int | str]):
        converted = tuple(Fraction(c) for c in coeffs)
        if not converted:
            raise ValueError("an EvenSeries needs at least a constant term")
        object.__setattr__(self, "coeffs", converted)

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, truncation_order: int) -> EvenSeries:
        return cls([1] + [0] * truncation_order)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def _check_compatible(self, other: EvenSeries) -> None:
        if other.truncation_order != self.truncation_order:
            raise ValueError(
                "series truncation orders differ: "
                f"{self.truncation_order} vs {other.truncation_order}"
            )

    def __add__(self, other: EvenSeries) -> EvenSeries:
        if not isinstance(other, EvenSeries):
            return NotImplemented
        self._check_compatible(other)
        return EvenSeries(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: EvenSeries) -> EvenSeries:
        if not isinstance(other, EvenSeries):
            return NotImplemented
        self._check_compatible(other)
        return EvenSeries(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __mul__(self, other: EvenSeries | Fraction | int) -> EvenSeries:
        if isinstance(other, (Fraction, int)):
            return EvenSeries(other * c for c in self.coeffs)
        if not isinstance(other, EvenSeries):
            return NotImplemented
        self._check_compatible(other)
        # Cauchy product; cross terms beyond the truncation are dropped.
        n = self.truncation_order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += a * other.coeffs[j]
        return EvenSeries(out)

    __rmul__ = __mul__

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if k == 0 else f"({c})*x^{2 * k}")
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class ExtrapolationFormula:
    """Radicand coefficients for an order-``n`` extrapolated shift.

    The relative shift is ``(1 + sum_k d[k-1] * x**(2k))**(1/n) - 1``.
    """

    order: int
    d: tuple[Fraction, ...]

    def __post_init__(self):
        order = self.order
        if isinstance(order, bool) or int(order) != order or order <= 0 or order % 2:
            raise ValueError(f"order must be a positive even integer, got {order!r}")
        order = int(order)
        object.__setattr__(self, "order", order)
        d = tuple(Fraction(c) for c in self.d)
        if len(d) != order // 2:
            raise ValueError(f"order {order} needs {order // 2} coefficients, got {len(d)}")
        object.__setattr__(self, "d", d)

    @property
    def radicand(self) -> EvenSeries:
        return EvenSeries((Fraction(1),) + self.d)

    @property
    def leading(self) -> Fraction:
        return self.d[-1]

    def to_dict(self) -> dict:
        return {"order": self.order, "radicand": [_fraction_str(c) for c in self.radicand.coeffs]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> ExtrapolationFormula:
        coeffs = [Fraction(c) for c in data["radicand"]]
        if coeffs[0] != 1:
            raise ValueError("radicand must start with the constant term 1")
        return cls(order=int(data["order"]), d=tuple(coeffs[1:]))


def _fraction_str(c: Fraction) -> str:
    return str(c)


def pt_series(max_order: int) -> EvenSeries:
    """Return ``omega_res / omega0`` as an exact series in ``x = A/omega0``.

    Raises:
        ValueError: if ``max_order`` is not one of 2, 4, 6, 8.
    """
    max_order = _check_order(max_order)
    coeffs = [Fraction(1)]
    for k in range(1, max_order // 2 + 1):
        coeffs.append(PT_COEFFICIENTS[k - 1] / Fraction(16) ** k)
    return EvenSeries(coeffs)


def series_pow(s: EvenSeries, n: int) -> EvenSeries:
    """Raise a normalized series to a non-negative integer power by repeated products."""
    if int(n) != n or n < 0:
        raise ValueError(f"power must be a non-negative integer, got {n!r}")
    if s.coeffs[0] != 1:
        raise ValueError("series_pow expects a normalized series (constant term 1)")
    result = EvenSeries.one(s.truncation_order)
    for _ in range(int(n)):
        result = result * s
    return result


def derive_formula(n: int) -> ExtrapolationFormula:
    """Derive the order-``n`` radicand by raising the PT series to the ``n``-th power."""
    n = _check_order(n)
    powered = series_pow(pt_series(n), n)
    return ExtrapolationFormula(order=n, d=powered.coeffs[1:])


def asymptotic_divisor(f: ExtrapolationFormula | int) -> float:
    """Constant ``D`` with ``shift -> A / D`` for ``A/omega0 -> inf``."""
    if not isinstance(f, ExtrapolationFormula):
        f = derive_formula(f)
    if f.leading <= 0:
        raise ValueError(f"leading radicand coefficient must be positive, got {f.leading}")
    return float(1 / f.leading) ** (1.0 / f.order)


def coefficient_strings(coeffs: Sequence[Fraction]) -> list[str]:
    return [_fraction_str(c) for c in coeffs]
