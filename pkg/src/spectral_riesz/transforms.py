"""Integral transforms: Laplace (plain and shifted), Legendre, Weyl, Mellin
and the Riemann-Liouville fractional integral.

Improper integrals are split at a finite knot.  Past the knot the integrand
follows a declared :class:`Extrapolation` whose contribution is added in
closed form, so nothing is silently truncated and undeclared decay is an
error.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import integrate, optimize, special

from . import specfun
from .errors import ConfigurationError, ConvergenceError, DivergenceError, DomainError
from .grid import GridSpec

__all__ = [
    "Extrapolation",
    "SampledFunction",
    "LegendreResult",
    "MellinResult",
    "WeylPair",
    "ramp_laplace",
    "numeric_laplace",
    "shifted_laplace",
    "legendre_transform",
    "weyl_transform",
    "mellin_zeta",
    "riemann_liouville",
    "weyl_pair_from_kernel",
]


@dataclass(frozen=True)
class Extrapolation:
    """Behaviour of a function beyond its last known point ``knot``.

    zero        f(z) = 0
    last-value  f(z) = f(knot)
    power-law   f(z) = f(knot) * ((z - origin) / (knot - origin)) ** exponent
    exponential f(z) = f(knot) * exp(-rate * (z - knot))
    """

    kind: str
    exponent: float = 0.0
    origin: float = 0.0
    rate: float = 0.0

    def __post_init__(self):
        if self.kind not in ("zero", "last-value", "power-law", "exponential"):
            raise DomainError(f"unknown extrapolation {self.kind!r}")
        if self.kind == "exponential" and not self.rate > 0:
            raise DomainError("exponential extrapolation needs a positive rate")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def last_value(cls):
        return cls("last-value")

    @classmethod
    def power_law(cls, exponent, origin=0.0):
        return cls("power-law", exponent=float(exponent), origin=float(origin))

    @classmethod
    def exponential(cls, rate):
        return cls("exponential", rate=float(rate))

    def __call__(self, anchor, knot, z):
        z = np.asarray(z, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(z)
        if self.kind == "last-value":
            return np.full_like(z, anchor)
        if self.kind == "power-law":
            return anchor * ((z - self.origin) / (knot - self.origin)) ** self.exponent
        return anchor * np.exp(-self.rate * (z - knot))


@dataclass(frozen=True)
class SampledFunction:
    """Function known at grid points, linear in between, extrapolated beyond.

    Below the grid start the function is taken to vanish.
    """

    grid: GridSpec
    values: np.ndarray
    extrapolation: Extrapolation

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.count,):
            raise DomainError("sampled values must match the grid length")
        if not np.all(np.isfinite(vals)):
            raise DomainError("sampled values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def knot(self):
        return float(self.grid.end)

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        xs = self.grid.points()
        inside = np.interp(z, xs, self.values, left=0.0)
        beyond = self.extrapolation(self.values[-1], self.knot, np.maximum(z, self.knot))
        out = np.where(z > self.knot, beyond, inside)
        out = np.where(z < xs[0], 0.0, out)
        return float(out) if out.ndim == 0 else out


def _panels(a, b, breakpoints):
    pts = sorted({float(p) for p in breakpoints if a < p < b})
    edges = [a, *pts, b]
    return list(zip(edges[:-1], edges[1:]))


def _quad(f, a, b, breakpoints=(), tol=1e-11, epsabs=0.0):
    """Sum of adaptive Gauss-Kronrod quadratures over panels between breakpoints."""
    total = 0.0
    err = 0.0
    for lo, hi in _panels(a, b, breakpoints):
        if hi <= lo:
            continue
        val, e = integrate.quad(f, lo, hi, epsabs=epsabs, epsrel=tol, limit=400)
        total += val
        err += e
    return total, err


# -- Laplace ---------------------------------------------------------------


def ramp_laplace(rho, lam, t):
    """Laplace transform of the ramp power (z - lam)_+^rho at t."""
    if np.any(np.asarray(t) <= 0):
        raise DomainError("Laplace variable must be positive")
    return math.gamma(rho + 1.0) * np.exp(-lam * np.asarray(t)) / np.asarray(t) ** (rho + 1.0)


def _laplace_tail(ext: Extrapolation, anchor, knot, t):
    """int_knot^inf ext(z) e^{-z t} dz in closed form."""
    if ext.kind == "zero" or anchor == 0:
        return 0.0
    if t <= 0:
        raise DivergenceError("Laplace tail diverges for t <= 0")
    if ext.kind == "last-value":
        return anchor * math.exp(-knot * t) / t
    if ext.kind == "exponential":
        return anchor * math.exp(-knot * t) / (t + ext.rate)
    o, p = ext.origin, ext.exponent
    span = knot - o
    if span <= 0:
        raise DomainError("power-law origin must lie below the knot")
    # anchor span^{-p} e^{-o t} Gamma(p + 1, span t) / t^{p+1}
    return anchor * span ** (-p) * math.exp(-o * t) * specfun.upper_incomplete_gamma(p + 1.0, span * t) / t ** (p + 1.0)


def _resolve(f, knot, extrapolation, breakpoints):
    if isinstance(f, SampledFunction):
        return f, f.knot, f.extrapolation, list(breakpoints) + list(f.grid.points())
    if knot is None or extrapolation is None:
        raise ConfigurationError("callable integrands need a knot and a declared extrapolation")
    return f, float(knot), extrapolation, list(breakpoints)


def numeric_laplace(
    f: Union[SampledFunction, Callable],
    t: float,
    tol: float = 1e-11,
    *,
    knot: Optional[float] = None,
    extrapolation: Optional[Extrapolation] = None,
    breakpoints: Sequence[float] = (),
) -> float:
    """int_0^inf f(z) e^{-z t} dz: quadrature on [0, knot] plus analytic tail."""
    if t <= 0:
        raise DivergenceError("Laplace transform needs t > 0")
    f, knot, ext, bps = _resolve(f, knot, extrapolation, breakpoints)
    body, _ = _quad(lambda z: f(z) * math.exp(-z * t), 0.0, knot, bps, tol)
    anchor = float(f(knot)) if ext.kind != "zero" else 0.0
    return body + _laplace_tail(ext, anchor, knot, t)


def shifted_laplace(f, z0, t, tol=1e-11, *, knot=None, extrapolation=None, breakpoints=()):
    """Laplace transform of mu -> f(mu + z0), via e^{z0 t}(L{f}(t) - int_0^z0 e^{-t mu} f)."""
    if z0 < 0:
        raise DomainError("shift must be non-negative")
    full = numeric_laplace(f, t, tol, knot=knot, extrapolation=extrapolation, breakpoints=breakpoints)
    if z0 == 0:
        return full
    g, _, _, bps = _resolve(f, knot, extrapolation, breakpoints)
    head, _ = _quad(lambda mu: math.exp(-t * mu) * g(mu), 0.0, z0, bps, tol)
    return math.exp(z0 * t) * (full - head)


# -- Legendre ----------------------------------------------------------------


@dataclass(frozen=True)
class LegendreResult:
    value: float
    argmax: float
    unbounded: bool


def legendre_transform(f: Callable, w: float, upper: float, n_grid: int = 4001) -> LegendreResult:
    """sup_{0 <= z <= upper} (w z - f(z)).

    A dense grid locates the best point; a bounded golden-section search on
    the neighbouring cells refines it.  ``unbounded`` is set when the
    maximizer sits on the right endpoint, i.e. the true supremum over
    [0, inf) may be larger.
    """
    zs = np.linspace(0.0, upper, n_grid)
    try:
        fz = np.asarray(f(zs), dtype=float)
        if fz.shape != zs.shape:
            raise ValueError
    except (TypeError, ValueError):
        fz = np.array([float(f(z)) for z in zs])
    obj = w * zs - fz
    i = int(np.argmax(obj))
    best_z, best = float(zs[i]), float(obj[i])
    lo, hi = zs[max(i - 1, 0)], zs[min(i + 1, n_grid - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda z: -(w * z - float(f(z))),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-13 * max(1.0, upper)},
        )
        if -res.fun > best:
            best_z, best = float(res.x), float(-res.fun)
    unbounded = i == n_grid - 1 and obj[-1] > obj[-2]
    return LegendreResult(best, best_z, bool(unbounded))


# -- Riemann-Liouville --------------------------------------------------------


def riemann_liouville(f, delta, z, *, lower=0.0, breakpoints=(), tol=1e-12):
    """(1/Gamma(delta)) int_lower^z (z - t)^{delta-1} f(t) dt.

    For delta < 1 the kernel singularity at t = z is removed by the
    substitution u = (z - t)^delta, which turns the integral into
    (1/delta) int_0^{(z-lower)^delta} f(z - u^{1/delta}) du.
    """
    if delta <= 0:
        raise DomainError("fractional order must be positive")
    if z <= lower:
        return 0.0
    if delta < 1:
        u_bps = [(z - b) ** delta for b in breakpoints if lower < b < z]
        val, err = _quad(lambda u: f(z - u ** (1.0 / delta)), 0.0, (z - lower) ** delta, u_bps, tol)
        val /= delta
    else:
        val, err = _quad(lambda s: (z - s) ** (delta - 1.0) * f(s), lower, z, breakpoints, tol)
    if not math.isfinite(val):
        raise ConvergenceError("fractional integral did not converge")
    return val / math.gamma(delta)


# -- Weyl ---------------------------------------------------------------------


def _weyl_tail(ext: Extrapolation, anchor, knot, mu, s, start):
    """int_start^inf ext(z) (z - s)^{mu-1} dz for start >= max(s, knot)."""
    if ext.kind == "zero" or anchor == 0:
        return 0.0
    if ext.kind == "last-value":
        raise DivergenceError("Weyl transform of a non-decaying tail diverges")
    if ext.kind == "exponential":
        a = ext.rate
        # anchor e^{a knot} int_start^inf e^{-a z}(z-s)^{mu-1} dz
        return anchor * math.exp(-a * (s - knot)) * a ** (-mu) * specfun.upper_incomplete_gamma(mu, a * (start - s))
    rho = -ext.exponent
    if rho <= mu:
        raise DivergenceError(f"power tail z^-{rho} is not Weyl-integrable at order {mu}")
    o = ext.origin
    S = s - o
    if S <= 0 or knot <= o:
        raise DomainError("power-law origin must lie below s and the knot")
    X = S / (start - o)
    # anchor (knot-o)^{rho} S^{mu-rho} B(rho-mu, mu) I_X(rho-mu, mu)
    return (
        anchor
        * (knot - o) ** rho
        * S ** (mu - rho)
        * specfun.beta(rho - mu, mu)
        * special.betainc(rho - mu, mu, X)
    )


def weyl_transform(F, mu, s, tol=1e-11, *, knot=None, extrapolation=None, breakpoints=()):
    """W_mu{F}(s) = (1/Gamma(mu)) int_s^inf F(z) (z - s)^{mu-1} dz."""
    if mu <= 0:
        raise DomainError("Weyl order must be positive")
    F, knot, ext, bps = _resolve(F, knot, extrapolation, breakpoints)
    anchor = float(F(knot)) if ext.kind != "zero" else 0.0
    if knot <= s:
        return _weyl_tail(ext, anchor, knot, mu, s, s) / math.gamma(mu)
    body = riemann_liouville_upper(F, mu, s, knot, bps, tol)
    return body + _weyl_tail(ext, anchor, knot, mu, s, knot) / math.gamma(mu)


def riemann_liouville_upper(F, mu, s, upper, breakpoints=(), tol=1e-11):
    """(1/Gamma(mu)) int_s^upper F(z)(z - s)^{mu-1} dz, singularity-free for mu < 1."""
    if mu < 1:
        u_bps = [(b - s) ** mu for b in breakpoints if s < b < upper]
        val, _ = _quad(lambda u: F(s + u ** (1.0 / mu)), 0.0, (upper - s) ** mu, u_bps, tol)
        val /= mu
    else:
        val, _ = _quad(lambda z: F(z) * (z - s) ** (mu - 1.0), s, upper, breakpoints, tol)
    return val / math.gamma(mu)


# -- Mellin -------------------------------------------------------------------


@dataclass(frozen=True)
class MellinResult:
    """Mellin-route zeta value; the truth lies in [value, value + error_bound]."""

    value: float
    error_bound: float


def _split_bounded(v):
    """(lower, upper-excess) from either a float or a tail-bounded value."""
    if hasattr(v, "tail_bound"):
        return float(v.value), float(v.tail_bound)
    return float(v), 0.0


def mellin_zeta(
    Z: Callable,
    rho: float,
    tol: float = 1e-11,
    *,
    small_t_constant: float,
    small_t_exponent: float,
    t_min: float,
    decay_rate: float,
    t_max: Optional[float] = None,
) -> MellinResult:
    """(1/Gamma(rho)) int_0^inf t^{rho-1} Z(t) dt for a heat-trace-like Z.

    Certified behaviour is required at both ends:
      * Z(t) <= small_t_constant * t^{-small_t_exponent} on (0, t_min],
      * Z(t + h) <= Z(t) e^{-decay_rate h}  (true for any trace of e^{-tH}
        with decay_rate = lambda_1).
    ``Z`` may return a float or an object with ``value`` and ``tail_bound``;
    tails are carried into the error bound.  Quadrature is split at t = 1.
    """
    a = small_t_exponent
    if rho <= a:
        raise DivergenceError(f"Mellin integral diverges at t = 0 for rho <= {a}")
    if t_min <= 0 or decay_rate <= 0:
        raise DomainError("t_min and decay_rate must be positive")
    if t_max is None:
        t_max = max(2.0, t_min) + (40.0 + rho * math.log(1 + rho)) / decay_rate
    g = math.gamma(rho)
    knots = [t_min] + [x for x in (1.0,) if t_min < x < t_max] + [t_max]
    # Log-spaced panels resolve the t^{-a} growth near t_min.
    pts = sorted(set(np.geomspace(t_min, t_max, 24).tolist()) | set(knots))
    low, _ = _quad(lambda t: t ** (rho - 1.0) * _split_bounded(Z(t))[0], t_min, t_max, pts, tol)
    # The tail integrand is a rounding-limited difference; a loose absolute target suffices.
    excess, e_excess = _quad(
        lambda t: t ** (rho - 1.0) * _split_bounded(Z(t))[1], t_min, t_max, pts, 1e-6, epsabs=1e-6 * abs(low) / len(pts)
    )
    excess += e_excess
    head = small_t_constant * t_min ** (rho - a) / (rho - a)
    z_lo, z_ex = _split_bounded(Z(t_max))
    tail = (z_lo + z_ex) * math.exp(decay_rate * t_max) * decay_rate ** (-rho) * specfun.upper_incomplete_gamma(
        rho, decay_rate * t_max
    )
    return MellinResult(low / g, (excess + head + tail) / g)


# -- Weyl pairs -----------------------------------------------------------------


@dataclass(frozen=True)
class WeylPair:
    """A pair F(s) = int e^{-st} f(t) dt/t and G = W_{d/2} F.

    ``family`` is ``"power"`` (F = s^-param), ``"exponential"``
    (F = e^{-param s}) or ``"numeric"``; the first two let spectral sums of F
    be evaluated with certified tails.
    """

    F: Callable
    G: Callable
    dimension: int
    family: str = "numeric"
    param: float = float("nan")
    label: str = ""

    @classmethod
    def power(cls, rho, d):
        if rho <= d / 2.0:
            raise DivergenceError("power pair needs rho > d/2")
        c = math.gamma(rho - d / 2.0) / math.gamma(rho)
        return cls(
            lambda s: np.asarray(s, float) ** (-rho),
            lambda s: c * np.asarray(s, float) ** (d / 2.0 - rho),
            d,
            "power",
            float(rho),
            f"s^-{rho}",
        )

    @classmethod
    def exponential(cls, a, d):
        if a <= 0:
            raise DomainError("exponential pair needs a > 0")
        return cls(
            lambda s: np.exp(-a * np.asarray(s, float)),
            lambda s: np.exp(-a * np.asarray(s, float)) / a ** (d / 2.0),
            d,
            "exponential",
            float(a),
            f"exp(-{a} s)",
        )


def weyl_pair_from_kernel(f: Callable, d: int, *, t_split=1.0, tol=1e-11) -> WeylPair:
    """Numerically build (F, G) from a kernel f on (0, inf).

    F(s) = int_0^inf e^{-st} f(t) dt/t,  G(s) = int_0^inf e^{-st} t^{-d/2} f(t) dt/t.
    The kernel must make both integrals converge (e.g. f(t) = t^a e^{-bt}, a > d/2).
    """

    def transform(weight_power):
        def fn(s):
            def integrand(t):
                return math.exp(-s * t) * t ** (weight_power - 1.0) * f(t)

            a, _ = integrate.quad(integrand, 0.0, t_split, epsabs=0.0, epsrel=tol, limit=400)
            b, _ = integrate.quad(integrand, t_split, np.inf, epsabs=0.0, epsrel=tol, limit=400)
            return a + b

        return np.vectorize(fn, otypes=[float])

    return WeylPair(transform(0.0), transform(-d / 2.0), d, "numeric", label="kernel")
