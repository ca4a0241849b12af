import json
import math
import threading

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blochsiegert.approx import (
    Method,
    RabiParams,
    asymptotic_shift,
    bessel_j0,
    bessel_j0_first_zero,
    extrapolated_shift,
    pt_shift,
    relative_extrapolated_shift,
    relative_pt_shift,
    rwa_shift,
)
from blochsiegert.series import asymptotic_divisor

ORDERS = (2, 4, 6, 8)


def test_params_validation():
    with pytest.raises(ValueError):
        RabiParams(0.0, 1.0)
    with pytest.raises(ValueError):
        RabiParams(1.0, -0.1)
    with pytest.raises(ValueError):
        RabiParams(float("nan"), 1.0)


def test_extrapolated_table_examples():
    assert extrapolated_shift(RabiParams(1, 8.5), 8).shift == pytest.approx(2.639640, abs=5e-6)
    assert extrapolated_shift(RabiParams(1, 3.5), 6).shift == pytest.approx(0.706106, abs=5e-6)


def test_extrapolated_order2_against_mpmath():
    mpmath.mp.dps = 30
    expected = float(mpmath.sqrt(mpmath.mpf("1.125")) - 1)
    assert extrapolated_shift(RabiParams(1, 1), 2).shift == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.0606602, abs=1e-7)


@pytest.mark.parametrize("order", ORDERS)
def test_extrapolated_rejects_order(order):
    with pytest.raises(ValueError):
        extrapolated_shift(RabiParams(1, 1), order + 1)


def test_pt_shift_examples():
    mpmath.mp.dps = 30
    terms = [mpmath.mpf(1), mpmath.mpf(1) / 4, mpmath.mpf(-35) / 32, mpmath.mpf(103) / 128]
    expected = float(sum(c * mpmath.mpf(1) / 4 ** (2 * k) for k, c in enumerate(terms, start=1)))
    assert pt_shift(RabiParams(1, 1), 8).shift == pytest.approx(expected, rel=1e-14)
    assert pt_shift(RabiParams(1, 1), 8).shift == pytest.approx(0.0632218, abs=1e-7)
    assert pt_shift(RabiParams(1, 1), 2).shift == 0.0625


def test_pt_shift_units():
    # (A/4)^2 / omega0 + ... with omega0 != 1
    p = RabiParams(2.0, 3.0)
    expected = (3 / 4) ** 2 / 2 + 0.25 * (3 / 4) ** 4 / 2**3
    assert pt_shift(p, 4).shift == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("p", [RabiParams(1, 21), RabiParams(5, 0), RabiParams(2, 100)])
def test_rwa_is_zero(p):
    r = rwa_shift(p)
    assert r.shift == 0.0
    assert r.resonance == p.omega0
    assert r.method is Method.RWA


def test_asymptotic_examples():
    j01 = float(mpmath.besseljzero(0, 1))
    assert asymptotic_shift(RabiParams(1, 24.04826)).shift == pytest.approx(10.0, abs=1e-4)
    assert asymptotic_shift(RabiParams(1, 21)).shift == pytest.approx(21 / j01, rel=1e-14)
    assert asymptotic_shift(RabiParams(1, 21)).shift == pytest.approx(8.73245, abs=1e-4)
    assert asymptotic_shift(RabiParams(1, 0)).shift == 0.0
    assert asymptotic_shift(RabiParams(1, 5)).diagnostics["asymptote_reliable"] is False
    assert asymptotic_shift(RabiParams(1, 50)).diagnostics["asymptote_reliable"] is True


def test_bessel_zero():
    j = bessel_j0_first_zero()
    assert j == pytest.approx(2.404826, abs=5e-7)
    assert j == pytest.approx(2.4048255577, abs=1e-9)
    assert j == pytest.approx(float(mpmath.besseljzero(0, 1)), abs=1e-15)
    assert abs(bessel_j0(j)) < 1e-12


@pytest.mark.parametrize("x", [0.0, 0.5, 1.7, 2.404, 3.9])
def test_bessel_j0_series(x):
    assert bessel_j0(x) == pytest.approx(float(mpmath.besselj(0, x)), abs=1e-15)


def test_bessel_zero_cache_thread_safe():
    out = []
    threads = [threading.Thread(target=lambda: out.append(bessel_j0_first_zero())) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(out)) == 1


def test_report_serialization():
    r = extrapolated_shift(RabiParams(1, 3.5), 8)
    d = json.loads(json.dumps(r.to_dict()))
    assert set(d) == {"method", "omega0", "amplitude", "shift", "resonance", "diagnostics"}
    assert d["method"] == "EXTRAP8"
    assert d["resonance"] == 1 + d["shift"]
    assert d["diagnostics"]["regime"] == "intermediate"


@pytest.mark.parametrize(
    "fn", [lambda p: extrapolated_shift(p, 8), lambda p: extrapolated_shift(p, 2),
           lambda p: pt_shift(p, 6), rwa_shift, asymptotic_shift]
)
def test_zero_drive_exact(fn):
    assert fn(RabiParams(3.7, 0.0)).shift == 0.0


@settings(max_examples=100, deadline=None)
@given(
    st.sampled_from(ORDERS),
    st.floats(0.05, 50),
    st.floats(-3, 3),
)
def test_homogeneity(order, ratio, log_lambda):
    lam = 10.0**log_lambda
    base = extrapolated_shift(RabiParams(1.0, ratio), order).shift
    scaled = extrapolated_shift(RabiParams(lam, lam * ratio), order).shift
    assert abs(scaled - lam * base) <= 1e-12 * abs(lam * base)


@pytest.mark.parametrize("order", ORDERS)
def test_monotone_in_amplitude(order):
    grid = np.round(np.arange(1, 301) * 0.1, 10)
    shifts = [extrapolated_shift(RabiParams(1, a), order).shift for a in grid]
    assert all(b > a for a, b in zip(shifts, shifts[1:]))


@pytest.mark.parametrize("order", ORDERS)
def test_asymptotic_slope(order):
    s = extrapolated_shift(RabiParams(1, 1e6), order).shift
    assert s / 1e6 == pytest.approx(1 / asymptotic_divisor(order), rel=1e-4)


def test_representation_switch_is_continuous():
    for order in ORDERS:
        below = relative_extrapolated_shift(1.0, order)
        above = relative_extrapolated_shift(np.nextafter(1.0, 2.0), order)
        assert above == pytest.approx(below, rel=1e-14)


def test_float_path_matches_high_precision():
    mpmath.mp.dps = 40
    for order in ORDERS:
        for x in (1e-3, 0.3, 1.0, 2.0, 17.0, 1e4):
            exact = relative_extrapolated_shift(x, order, ctx=mpmath.mp)
            assert relative_extrapolated_shift(x, order) == pytest.approx(float(exact), rel=1e-13)


@pytest.mark.parametrize("order", ORDERS)
def test_small_x_agreement_exponent(order):
    # Orders 6 and 8 differ from the PT series by < 1e-20 at x = 0.01, below
    # double resolution, so the residual is evaluated at 60 digits.
    mpmath.mp.dps = 60
    diffs = [
        abs(relative_extrapolated_shift(x, order, mpmath.mp) - relative_pt_shift(x, order, mpmath.mp))
        for x in (mpmath.mpf("0.1"), mpmath.mpf("0.01"))
    ]
    slope = float(mpmath.log10(diffs[0] / diffs[1]))
    assert slope == pytest.approx(order + 2, abs=0.1)
    for x in ("0.1", "0.01", "0.001"):
        x = mpmath.mpf(x)
        d = abs(relative_extrapolated_shift(x, order, mpmath.mp) - relative_pt_shift(x, order, mpmath.mp))
        assert d / x ** (order + 2) < 1.0


@pytest.mark.parametrize("order", [2, 4])
def test_small_x_agreement_exponent_float(order):
    diffs = [abs(extrapolated_shift(RabiParams(1, x), order).shift - pt_shift(RabiParams(1, x), order).shift)
             for x in (0.1, 0.01)]
    assert math.log10(diffs[0] / diffs[1]) == pytest.approx(order + 2, abs=0.1)


def test_extrapolation_stays_finite_where_pt_diverges():
    p = RabiParams(1e-3, 1.0)
    s = extrapolated_shift(p, 8).shift
    assert math.isfinite(s)
    assert s == pytest.approx(1.0 / 2.4030, rel=1e-2)
    assert pt_shift(p, 8).shift > 1e6 * s
