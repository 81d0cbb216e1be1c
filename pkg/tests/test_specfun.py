import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from spectral_riesz import specfun
from spectral_riesz.errors import DomainError


def test_gamma_values_and_poles():
    assert specfun.gamma(5) == 24.0
    assert specfun.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    for x in (0, -1, -7):
        with pytest.raises(DomainError):
            specfun.gamma(x)


@given(st.floats(0.05, 60.0))
def test_gamma_recurrence(x):
    assert specfun.gamma(x + 1) == pytest.approx(x * specfun.gamma(x), rel=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 8.0), st.floats(0.5, 8.0))
def test_beta_matches_quadrature(p, q):
    # algebraic weight t^(p-1) (1-t)^(q-1) handled exactly by QAWS
    val, _ = integrate.quad(lambda t: 1.0, 0, 1, weight="alg", wvar=(p - 1, q - 1), epsabs=0, epsrel=1e-12)
    assert specfun.beta(p, q) == pytest.approx(val, rel=1e-9)


def test_beta_large_arguments_stay_finite():
    assert specfun.beta(200.0, 3.0) == pytest.approx(2.0 / (200 * 201 * 202), rel=1e-12)


@given(st.floats(0.1, 30.0), st.floats(0.0, 80.0))
def test_incomplete_gamma_halves_sum_to_gamma(a, x):
    total = specfun.lower_incomplete_gamma(a, x) + specfun.upper_incomplete_gamma(a, x)
    assert total == pytest.approx(math.gamma(a), rel=1e-12)


def test_upper_incomplete_gamma_nonpositive_order():
    assert specfun.upper_incomplete_gamma(0.0, 2.0) == pytest.approx(special.exp1(2.0), rel=1e-14)
    # Gamma(-1/2, x) = 2 x^{-1/2} e^{-x} - 2 Gamma(1/2, x)
    x = 1.3
    expected = 2 * x**-0.5 * math.exp(-x) - 2 * math.sqrt(math.pi) * special.erfc(math.sqrt(x))
    assert specfun.upper_incomplete_gamma(-0.5, x) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(DomainError):
        specfun.upper_incomplete_gamma(-0.5, 0.0)


def test_incomplete_gamma_domain():
    with pytest.raises(DomainError):
        specfun.lower_incomplete_gamma(0.0, 1.0)
    with pytest.raises(DomainError):
        specfun.lower_incomplete_gamma(1.0, -1.0)


def test_bessel_zero_reference_values():
    assert specfun.bessel_j_zero(0, 1) == pytest.approx(2.404825557695773, abs=1e-13)
    assert specfun.bessel_j_zero(1, 1) == pytest.approx(3.831705970207512, abs=1e-13)
    assert specfun.bessel_j_zero(0, 2) == pytest.approx(5.520078110286311, abs=1e-13)
    # half-integer orders have closed forms
    assert specfun.bessel_j_zero(-0.5, 1) == pytest.approx(math.pi / 2, abs=1e-13)
    for k in range(1, 8):
        assert specfun.bessel_j_zero(0.5, k) == pytest.approx(k * math.pi, abs=1e-12)


def test_bessel_zero_matches_scipy_integer_orders():
    for n in range(0, 6):
        ref = special.jn_zeros(n, 12)
        ours = [specfun.bessel_j_zero(n, k) for k in range(1, 13)]
        np.testing.assert_allclose(ours, ref, rtol=1e-13)


def test_zeros_below_agree_with_indexed_zeros():
    zs = specfun.bessel_j_zeros_below(2.5, 40.0)
    assert len(zs) > 5
    np.testing.assert_allclose(zs, [specfun.bessel_j_zero(2.5, k) for k in range(1, len(zs) + 1)], rtol=1e-13)
    assert zs[-1] <= 40.0 < specfun.bessel_j_zero(2.5, len(zs) + 1)


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.5, 12.0), st.integers(1, 10))
def test_zeros_interlace(nu, k):
    # j_{nu,k} < j_{nu+1,k} < j_{nu,k+1}
    a = specfun.bessel_j_zero(nu, k)
    b = specfun.bessel_j_zero(nu + 1, k)
    c = specfun.bessel_j_zero(nu, k + 1)
    assert a < b < c
    assert abs(specfun.bessel_j(nu, a)) < 1e-12


def test_bessel_order_bounds():
    with pytest.raises(DomainError):
        specfun.bessel_j_zero(-0.75, 1)
    with pytest.raises(DomainError):
        specfun.bessel_j_zero(0, 0)


def test_euler_zeta_closed_forms():
    assert specfun.euler_zeta(2) == pytest.approx(math.pi**2 / 6, rel=1e-15)
    assert specfun.euler_zeta(4) == pytest.approx(math.pi**4 / 90, rel=1e-15)
    assert specfun.euler_zeta(3) == pytest.approx(1.2020569031595942, rel=1e-15)


@given(st.floats(1.01, 40.0))
def test_euler_zeta_error_bound_is_honest(s):
    val, err = specfun.euler_zeta_certified(s)
    assert abs(val - special.zeta(s)) <= err + 8 * np.finfo(float).eps * val


def test_euler_zeta_domain():
    with pytest.raises(DomainError):
        specfun.euler_zeta(1.0)


def test_ball_volume():
    assert specfun.ball_volume(1) == pytest.approx(2.0)
    assert specfun.ball_volume(2) == pytest.approx(math.pi)
    assert specfun.ball_volume(3) == pytest.approx(4 * math.pi / 3)
    with pytest.raises(DomainError):
        specfun.ball_volume(0)


def test_small_closed_forms():
    assert specfun.gamma(3.5) == pytest.approx(15 * math.sqrt(math.pi) / 8, rel=1e-15)
    assert specfun.beta(2, 3) == pytest.approx(1 / 12, rel=1e-15)
    assert specfun.beta(1, 1) == 1.0
    assert specfun.lower_incomplete_gamma(2, 1.0) == pytest.approx(1 - 2 / math.e, rel=1e-14)
    assert specfun.lower_incomplete_gamma(1, 3.0) == pytest.approx(1 - math.exp(-3.0), rel=1e-14)
    assert specfun.lower_incomplete_gamma(2.5, 0.0) == 0.0
    assert specfun.bessel_j(0, 0.0) == 1.0
    for x in (0.3, 2.0, 7.7):
        assert specfun.bessel_j(0.5, x) == pytest.approx(math.sqrt(2 / (math.pi * x)) * math.sin(x), rel=1e-13)
    assert abs(specfun.bessel_j(0, 2.4048255577)) < 1e-9


def test_zeta_three_by_direct_summation():
    # sum to 10^6 plus the integral tail bracket [1/(2 N^2), 1/(2 (N-1)^2)] with N = 10^6 + 1
    n = np.arange(1, 10**6 + 1, dtype=float)
    head = float(np.sum(n[::-1] ** -3.0))
    N = 10**6 + 1
    lo, hi = head + 0.5 / N**2, head + 0.5 / (N - 1) ** 2
    assert lo - 1e-15 <= specfun.euler_zeta(3.0) <= hi + 1e-15
