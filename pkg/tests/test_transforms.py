import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from spectral_riesz import transforms as tr
from spectral_riesz.errors import ConfigurationError, DivergenceError, DomainError
from spectral_riesz.grid import GridSpec
from spectral_riesz.transforms import Extrapolation, SampledFunction, WeylPair


def test_ramp_laplace_matches_quadrature():
    for rho, lam, t in [(0.5, 1.0, 0.3), (1.0, 5.0, 2.0), (2.5, 0.0, 1.0)]:
        num = tr.numeric_laplace(
            lambda z: max(z - lam, 0.0) ** rho,
            t,
            knot=lam + 80.0 / t,
            extrapolation=Extrapolation.power_law(rho, origin=lam),
            breakpoints=[lam],
        )
        assert num == pytest.approx(tr.ramp_laplace(rho, lam, t), rel=1e-10)


def test_laplace_needs_declared_extrapolation():
    with pytest.raises(ConfigurationError):
        tr.numeric_laplace(lambda z: z, 1.0)
    with pytest.raises(DivergenceError):
        tr.numeric_laplace(lambda z: z, 0.0, knot=1.0, extrapolation=Extrapolation.zero())


def test_laplace_exponential_and_last_value_tails():
    # f = e^{-2z} cut at knot 1: the tail is supplied analytically
    v = tr.numeric_laplace(lambda z: math.exp(-2 * z), 0.5, knot=1.0, extrapolation=Extrapolation.exponential(2.0))
    assert v == pytest.approx(1 / 2.5, rel=1e-12)
    v = tr.numeric_laplace(lambda z: 1.0, 3.0, knot=0.5, extrapolation=Extrapolation.last_value())
    assert v == pytest.approx(1 / 3.0, rel=1e-12)


def test_sampled_function_laplace():
    g = GridSpec(0.0, 10.0, 11)
    f = SampledFunction(g, g.points() ** 1.0, Extrapolation.power_law(1.0))
    assert tr.numeric_laplace(f, 0.7) == pytest.approx(1 / 0.49, rel=1e-10)
    assert f(12.0) == pytest.approx(12.0)
    with pytest.raises(DomainError):
        SampledFunction(g, np.ones(3), Extrapolation.zero())


@settings(max_examples=10, deadline=None)
@given(st.floats(0.0, 3.0), st.floats(0.2, 2.0), st.floats(0.0, 4.0), st.floats(0.2, 3.0))
def test_shifted_laplace_identity(p, b, z0, t):
    def f(z):
        return z**p * math.exp(-b * z)

    knot = 60.0 / b + z0
    got = tr.shifted_laplace(f, z0, t, knot=knot, extrapolation=Extrapolation.exponential(b), breakpoints=[z0])
    direct, _ = integrate.quad(lambda mu: f(mu + z0) * math.exp(-t * mu), 0, np.inf, epsabs=0, epsrel=1e-12)
    assert got == pytest.approx(direct, rel=1e-8)


def test_legendre_linear_function():
    r = tr.legendre_transform(lambda z: 2.0 * z, 2.0, 10.0)
    assert r.value == pytest.approx(0.0, abs=1e-12) and not r.unbounded
    assert tr.legendre_transform(lambda z: 2.0 * z, 2.5, 10.0).unbounded


def test_legendre_of_quadratic():
    # sup (w z - z^2 / 2) = w^2 / 2 at z = w
    r = tr.legendre_transform(lambda z: 0.5 * z * z, 3.0, 10.0)
    assert r.value == pytest.approx(4.5, rel=1e-12)
    assert r.argmax == pytest.approx(3.0, rel=1e-6)


@settings(max_examples=8, deadline=None)
@given(st.lists(st.floats(0.0, 5.0), min_size=10, max_size=10))
def test_legendre_involution(slopes):
    slopes = sorted(slopes)
    nodes = np.arange(11.0)
    vals = np.concatenate([[0.0], np.cumsum(slopes)])

    def f(z):
        return np.interp(z, nodes, vals)

    def conj(w):
        return tr.legendre_transform(f, float(w), 10.0).value

    for zi, fi in zip(nodes[1:-1], vals[1:-1]):
        back = tr.legendre_transform(conj, zi, 6.0, n_grid=601).value
        assert back == pytest.approx(fi, abs=1e-9)


def test_riemann_liouville_closed_forms():
    for delta in (0.3, 1.0, 2.7):
        assert tr.riemann_liouville(lambda t: 1.0, delta, 2.0) == pytest.approx(2.0**delta / math.gamma(delta + 1))
        k = 1.5
        expected = math.gamma(k + 1) / math.gamma(k + delta + 1) * 3.0 ** (k + delta)
        assert tr.riemann_liouville(lambda t: t**k, delta, 3.0) == pytest.approx(expected, rel=1e-10)
    assert tr.riemann_liouville(lambda t: 1.0, 1.0, -1.0) == 0.0
    with pytest.raises(DomainError):
        tr.riemann_liouville(lambda t: 1.0, 0.0, 1.0)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 2.0), st.floats(0.2, 2.0), st.floats(0.5, 4.0))
def test_riemann_liouville_semigroup(a, b, z):
    def f(t):
        return math.cos(t)

    ab = tr.riemann_liouville(f, a + b, z)
    nested = tr.riemann_liouville(lambda s: tr.riemann_liouville(f, b, s, tol=1e-10), a, z, tol=1e-8)
    assert nested == pytest.approx(ab, rel=1e-6, abs=1e-9)


def test_weyl_transform_examples():
    for d in (1, 2, 3):
        rho = d / 2 + 1.3
        w = tr.weyl_transform(lambda x: x**-rho, d / 2, 2.0, knot=100.0, extrapolation=Extrapolation.power_law(-rho))
        assert w == pytest.approx(math.gamma(rho - d / 2) / math.gamma(rho) * 2.0 ** (d / 2 - rho), rel=1e-9)
        a = 0.7
        w = tr.weyl_transform(lambda x: math.exp(-a * x), d / 2, 1.5, knot=40.0, extrapolation=Extrapolation.exponential(a))
        assert w == pytest.approx(math.exp(-a * 1.5) / a ** (d / 2), rel=1e-9)
    w = tr.weyl_transform(lambda x: math.exp(-x), 1.0, 0.5, knot=30.0, extrapolation=Extrapolation.exponential(1.0))
    assert w == pytest.approx(math.exp(-0.5), rel=1e-12)


def test_weyl_transform_divergence():
    with pytest.raises(DivergenceError):
        tr.weyl_transform(lambda x: x**-1.0, 1.0, 1.0, knot=5.0, extrapolation=Extrapolation.power_law(-1.0))
    with pytest.raises(DivergenceError):
        tr.weyl_transform(lambda x: 1.0, 0.5, 1.0, knot=5.0, extrapolation=Extrapolation.last_value())
    with pytest.raises(DivergenceError):
        WeylPair.power(1.0, 2)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.floats(0.2, 2.5), st.floats(0.3, 2.0), st.floats(0.2, 3.0))
def test_weyl_pair_closure(d, extra, b, s):
    # f(t) = t^a e^{-bt}: F = Gamma(a)/(s+b)^a and G = Gamma(a - d/2)/(s+b)^{a-d/2}
    a = d / 2 + extra
    pair = tr.weyl_pair_from_kernel(lambda t: t**a * math.exp(-b * t), d)
    F_closed = math.gamma(a) / (s + b) ** a
    G_closed = math.gamma(a - d / 2) / (s + b) ** (a - d / 2)
    assert float(pair.F(s)) == pytest.approx(F_closed, rel=1e-8)
    assert float(pair.G(s)) == pytest.approx(G_closed, rel=1e-8)
    w = tr.weyl_transform(pair.F, d / 2, s, knot=s + 200.0, extrapolation=Extrapolation.power_law(-a, origin=-b))
    assert w == pytest.approx(float(pair.G(s)), rel=1e-6)


def test_mellin_single_exponential():
    lam = 3.0
    for rho in (0.5, 1.0, 2.5):
        r = tr.mellin_zeta(
            lambda t: math.exp(-lam * t), rho, small_t_constant=1.0, small_t_exponent=0.0, t_min=1e-16, decay_rate=lam
        )
        assert abs(r.value - lam**-rho) <= r.error_bound + 1e-10 * lam**-rho
        assert r.error_bound < 1e-6


def test_mellin_oscillator_odd_zeta():
    # d = 1: Z(t) = 1 / (2 sinh t) and zeta(2) = sum (2n+1)^{-2} = pi^2 / 8
    r = tr.mellin_zeta(
        lambda t: 1 / (2 * math.sinh(t)), 2.0, small_t_constant=0.5, small_t_exponent=1.0, t_min=1e-9, decay_rate=1.0
    )
    assert abs(r.value - math.pi**2 / 8) <= r.error_bound + 1e-10
    assert r.error_bound < 1e-6
    with pytest.raises(DivergenceError):
        tr.mellin_zeta(lambda t: 1.0, 1.0, small_t_constant=0.5, small_t_exponent=1.0, t_min=1e-3, decay_rate=1.0)


def test_extrapolation_validation():
    with pytest.raises(DomainError):
        Extrapolation("cubic")
    with pytest.raises(DomainError):
        Extrapolation.exponential(0.0)


def test_laplace_trivial_examples():
    assert tr.ramp_laplace(1.0, 0.0, 2.0) == pytest.approx(0.25)
    assert tr.ramp_laplace(0.0, 1.0, 1.0) == pytest.approx(math.exp(-1))
    v = tr.numeric_laplace(lambda z: 1.0, 0.8, knot=1.0, extrapolation=Extrapolation.last_value())
    assert v == pytest.approx(1 / 0.8, rel=1e-12)
    direct, _ = integrate.quad(lambda z: (z - 3) ** 2.5 * math.exp(-0.4 * z), 3, np.inf, epsabs=0, epsrel=1e-12)
    assert tr.ramp_laplace(2.5, 3.0, 0.4) == pytest.approx(direct, rel=1e-7)


def test_laplace_of_square_riesz_mean():
    from spectral_riesz import spectra
    from spectral_riesz import spectral_functions as sf

    S = spectra.box_spectrum([1.0, 1.0], 4000.0)
    t = 0.2
    num = tr.numeric_laplace(
        lambda z: sf.riesz_mean(S, 1.0, z),
        t,
        knot=3000.0,
        extrapolation=Extrapolation.power_law(2.0),
        breakpoints=[v for v in S.values if v < 3000.0],
    )
    termwise = float(np.sum(S.multiplicities * np.exp(-S.values * t))) / t**2
    assert num == pytest.approx(termwise, rel=1e-9)


def test_shifted_laplace_power_closed_form():
    from spectral_riesz import specfun

    for rho, z0, t in [(1.0, 2.0, 0.5), (2.5, 0.7, 1.3)]:
        got = tr.shifted_laplace(
            lambda mu: mu**rho, z0, t, knot=z0 + 80.0 / t, extrapolation=Extrapolation.power_law(rho)
        )
        closed = math.exp(z0 * t) * (math.gamma(rho + 1) - specfun.lower_incomplete_gamma(rho + 1, z0 * t)) / t ** (rho + 1)
        assert got == pytest.approx(closed, rel=1e-9)
    f = lambda z: math.exp(-z)  # noqa: E731
    kw = dict(knot=30.0, extrapolation=Extrapolation.exponential(1.0))
    assert tr.shifted_laplace(f, 0.0, 2.0, **kw) == tr.numeric_laplace(f, 2.0, **kw)


def test_shifted_ramp_incomplete_gamma():
    from spectral_riesz import specfun

    rho, lam, z0, t = 2.0, 1.0, 3.0, 0.6
    got = tr.shifted_laplace(
        lambda z: max(z - lam, 0.0) ** rho, z0, t, knot=z0 + 80.0 / t,
        extrapolation=Extrapolation.power_law(rho, origin=lam), breakpoints=[lam],
    )
    direct, _ = integrate.quad(lambda mu: (mu + z0 - lam) ** rho * math.exp(-t * mu), 0, np.inf, epsabs=0, epsrel=1e-12)
    closed = math.exp((z0 - lam) * t) * specfun.upper_incomplete_gamma(rho + 1, (z0 - lam) * t) / t ** (rho + 1)
    assert got == pytest.approx(direct, rel=1e-9)
    assert got == pytest.approx(closed, rel=1e-9)
