"""Special functions: gamma, beta, incomplete gamma, Bessel J and its zeros,
the Riemann zeta function and the volume of the unit ball.

Everything runs in double precision.  Gamma and the incomplete gamma
functions are thin wrappers over ``math`` / ``scipy.special``; the Bessel
zeros (McMahon start + safeguarded Newton, with a sign-change scan used both
to certify the index and as a bisection fallback) and the zeta function
(Euler-Maclaurin with a certified remainder) are computed here.
"""

import math
from fractions import Fraction

import numpy as np
from scipy import optimize, special

from .errors import BracketingError, DomainError

__all__ = [
    "gamma",
    "beta",
    "lower_incomplete_gamma",
    "upper_incomplete_gamma",
    "bessel_j",
    "bessel_j_zero",
    "bessel_j_zeros_below",
    "euler_zeta",
    "euler_zeta_certified",
    "ball_volume",
]

# Smallest admissible Bessel order; d = 1 needs j_{-1/2,1} = pi/2.
MIN_ORDER = -0.5


def gamma(x: float) -> float:
    """Euler gamma function for real ``x`` off the non-positive integers."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"gamma has a pole at {x}")
    return math.gamma(x)


def beta(p: float, q: float) -> float:
    if p <= 0 or q <= 0:
        raise DomainError("beta requires positive arguments")
    if p + q < 170:
        return math.gamma(p) * math.gamma(q) / math.gamma(p + q)
    return math.exp(math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q))


def lower_incomplete_gamma(a, x):
    """Unnormalized lower incomplete gamma  int_0^x e^{-mu} mu^{a-1} dmu."""
    if a <= 0:
        raise DomainError("lower incomplete gamma requires a > 0")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise DomainError("lower incomplete gamma requires x >= 0")
    if a < 170:
        out = special.gammainc(a, x_arr) * math.gamma(a)
    else:
        with np.errstate(divide="ignore"):
            out = np.exp(np.log(special.gammainc(a, x_arr)) + math.lgamma(a))
    return float(out) if np.ndim(out) == 0 else out


def upper_incomplete_gamma(a, x):
    """Unnormalized upper incomplete gamma  int_x^inf e^{-mu} mu^{a-1} dmu.

    Any real ``a`` is accepted when ``x > 0``; non-positive ``a`` is reduced
    to the positive range by the downward recurrence.
    """
    x_arr = np.asarray(x, dtype=float)
    if a > 0:
        if np.any(x_arr < 0):
            raise DomainError("upper incomplete gamma requires x >= 0")
        if a < 170:
            out = special.gammaincc(a, x_arr) * math.gamma(a)
        else:
            with np.errstate(divide="ignore"):
                out = np.exp(np.log(special.gammaincc(a, x_arr)) + math.lgamma(a))
        return float(out) if np.ndim(out) == 0 else out
    if np.any(x_arr <= 0):
        raise DomainError("upper incomplete gamma with a <= 0 requires x > 0")
    if a == 0:
        out = special.exp1(x_arr)
    else:
        # Gamma(a, x) = (Gamma(a + 1, x) - x^a e^{-x}) / a
        out = (np.asarray(upper_incomplete_gamma(a + 1, x_arr)) - x_arr**a * np.exp(-x_arr)) / a
    return float(out) if np.ndim(out) == 0 else out


def bessel_j(nu, x):
    """Bessel function of the first kind J_nu(x) for nu >= -1/2, x >= 0."""
    if nu < MIN_ORDER:
        raise DomainError(f"Bessel order {nu} below {MIN_ORDER}")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise DomainError("bessel_j requires x >= 0")
    out = special.jv(nu, x_arr)
    return float(out) if np.ndim(out) == 0 else out


def _bessel_j_prime(nu, x):
    return 0.5 * (special.jv(nu - 1.0, x) - special.jv(nu + 1.0, x))


def _mcmahon(nu: float, p: int) -> float:
    mu = 4.0 * nu * nu
    b8 = 8.0 * (p + 0.5 * nu - 0.25) * math.pi
    return (
        b8 / 8.0
        - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8**3)
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8**5)
    )


def _scan_brackets(nu: float, x_max: float, step: float = 0.25):
    """Sign-change brackets of J_nu on (0, x_max], in increasing order."""
    # J_nu has no zero in (0, nu] for nu >= 0, and is positive there.
    start = max(nu, 0.0) + 1e-12 if nu > 0 else 1e-6
    if x_max <= start:
        return []
    n = int(math.ceil((x_max - start) / step)) + 1
    xs = np.linspace(start, x_max, max(n, 2))
    vals = special.jv(nu, xs)
    brackets = []
    for i in range(len(xs) - 1):
        if vals[i] == 0.0:
            brackets.append((xs[i], xs[i]))
        elif vals[i] * vals[i + 1] < 0:
            brackets.append((xs[i], xs[i + 1]))
    return brackets


def _polish(nu, lo, hi):
    if lo == hi:
        return lo
    return optimize.brentq(lambda x: special.jv(nu, x), lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)


def bessel_j_zeros_below(nu: float, x_max: float) -> np.ndarray:
    """All positive zeros of J_nu that are <= x_max, ascending."""
    if nu < MIN_ORDER:
        raise DomainError(f"Bessel order {nu} below {MIN_ORDER}")
    roots = [_polish(nu, lo, hi) for lo, hi in _scan_brackets(nu, x_max + 0.5)]
    return np.array([r for r in roots if r <= x_max])


def bessel_j_zero(nu: float, p: int) -> float:
    """The p-th positive zero j_{nu,p} of J_nu."""
    if nu < MIN_ORDER:
        raise DomainError(f"Bessel order {nu} below {MIN_ORDER}")
    if p < 1 or int(p) != p:
        raise DomainError("zero index p must be a positive integer")
    p = int(p)
    x = _mcmahon(nu, p)
    newton_ok = x > 0
    if newton_ok:
        for _ in range(60):
            f = special.jv(nu, x)
            fp = _bessel_j_prime(nu, x)
            if fp == 0 or not math.isfinite(f / fp):
                newton_ok = False
                break
            step = max(-1.0, min(1.0, f / fp))
            x -= step
            if x <= 0:
                newton_ok = False
                break
            if abs(step) <= 4e-16 * x:
                break
        else:
            newton_ok = False
    # Certify the index by counting sign changes below the candidate.
    if newton_ok:
        below = _scan_brackets(nu, x - 0.5)
        if len(below) == p - 1 and abs(special.jv(nu, x)) < 1e-12:
            return float(x)
    upper = max(nu, 0.0) + (p + 2) * math.pi + 4.0 * max(nu, 1.0) ** (1.0 / 3.0) + 5.0
    brackets = _scan_brackets(nu, upper)
    if len(brackets) < p:
        raise BracketingError(f"could not bracket zero {p} of J_{nu}")
    lo, hi = brackets[p - 1]
    return float(_polish(nu, lo, hi))


_BERNOULLI = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
]


def euler_zeta_certified(s: float, n_direct: int = 20, n_corrections: int = 8):
    """Riemann zeta for real s > 1 together with a bound on the truncation error.

    Direct summation up to ``n_direct - 1``, then the Euler-Maclaurin tail:
    the integral, the half endpoint term and ``n_corrections`` Bernoulli
    terms.  For x^{-s} the remainder is bounded by the first omitted term.
    """
    s = float(s)
    if not s > 1:
        raise DomainError("euler_zeta requires s > 1")
    N = n_direct
    k = np.arange(1, N, dtype=float)
    total = float(np.sum(k ** (-s)))
    total += N ** (1.0 - s) / (s - 1.0) + 0.5 * N ** (-s)
    rising = s  # s (s+1) ... (s+2j-2)
    term = 0.0
    for j in range(1, n_corrections + 2):
        coeff = float(_BERNOULLI[j - 1]) / math.factorial(2 * j)
        term = coeff * rising * N ** (-s - 2 * j + 1)
        if j <= n_corrections:
            total += term
            rising *= (s + 2 * j - 1) * (s + 2 * j)
    return total, abs(term)


def euler_zeta(s: float) -> float:
    return euler_zeta_certified(s)[0]


def ball_volume(d: int) -> float:
    """Volume C_d of the unit ball in R^d."""
    if d < 1 or int(d) != d:
        raise DomainError("dimension must be a positive integer")
    return math.pi ** (d / 2.0) / math.gamma(1.0 + d / 2.0)
