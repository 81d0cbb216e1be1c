"""Counting function, Riesz means, heat trace and spectral zeta of a Spectrum.

Functionals that only see eigenvalues below the completeness ceiling are
exact finite sums.  The heat trace and spectral zeta also need the omitted
eigenvalues; their contribution is bounded from above and returned as
``TailBoundedValue.tail_bound``.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import optimize

from . import specfun, transforms
from .errors import (
    DivergenceError,
    DomainError,
    IncompleteSpectrumError,
    MissingMetadataError,
    TailUncertifiableError,
)
from .spectra import DIRICHLET, OSCILLATOR, Spectrum

__all__ = [
    "TailBoundedValue",
    "counting",
    "riesz_mean",
    "weighted_riesz",
    "heat_trace",
    "heat_trace_threshold",
    "spectral_zeta",
    "riesz_iterate_numeric",
    "zeta_via_mellin",
    "weyl_pair_sum",
    "liyau_constant",
]

Real = Union[float, np.ndarray]

# heat_trace refuses t where the certified tail exceeds this fraction of the value
MAX_RELATIVE_TAIL = 0.01
MELLIN_RELATIVE_TAIL = 1.0


@dataclass(frozen=True)
class TailBoundedValue:
    """A partial sum and a certified bound on what was left out.

    The true value lies in [value, value + tail_bound].
    """

    value: Real
    tail_bound: Real

    @property
    def upper(self):
        return self.value + self.tail_bound


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def _check_ceiling(S: Spectrum, z):
    zmax = np.max(z)
    if zmax > S.completeness_ceiling:
        raise IncompleteSpectrumError(
            f"z = {zmax:.6g} exceeds the completeness ceiling {S.completeness_ceiling:.6g}"
        )


def counting(S: Spectrum, z: Real):
    """N(z): eigenvalues <= z counted with multiplicity (right-continuous)."""
    z_arr = np.asarray(z, dtype=float)
    _check_ceiling(S, z_arr)
    cum = np.concatenate([[0], np.cumsum(S.multiplicities)])
    out = cum[np.searchsorted(S.values, z_arr, side="right")]
    return int(out) if out.ndim == 0 else out


def _ramp_sum(S: Spectrum, weights, power, z):
    z_arr = np.asarray(z, dtype=float)
    _check_ceiling(S, z_arr)
    diff = z_arr[..., None] - S.values
    if power == 0:
        terms = np.where(diff >= 0, 1.0, 0.0)
    else:
        terms = np.where(diff > 0, np.maximum(diff, 0.0) ** power, 0.0)
    return _scalar_or_array(terms @ (weights * S.multiplicities))


def riesz_mean(S: Spectrum, rho: float, z: Real):
    """R_rho(z) = sum_k (z - lambda_k)_+^rho; rho = 0 gives N(z)."""
    if rho < 0:
        raise DomainError("Riesz order must be non-negative")
    if rho == 0:
        return counting(S, z)
    return _ramp_sum(S, np.ones_like(S.values), rho, z)


def weighted_riesz(S: Spectrum, rho: float, z: Real, weight: str = "eigenvalue"):
    """sum_k w_k (z - lambda_k)_+^{rho-1} with w_k = lambda_k or T_k."""
    if rho < 1:
        raise DomainError("weighted Riesz sums need rho >= 1")
    if weight == "eigenvalue":
        w = S.values
    elif weight == "kinetic":
        if S.kinetic is None:
            raise MissingMetadataError("spectrum carries no kinetic energies")
        w = S.kinetic
    else:
        raise DomainError(f"unknown weight {weight!r}")
    return _ramp_sum(S, w, rho - 1.0, z)


# -- tails ---------------------------------------------------------------------


def liyau_constant(d: int, volume: float) -> float:
    """C with lambda_k >= C k^{2/d} for every Dirichlet domain of this volume."""
    return d / (d + 2.0) * 4.0 * math.pi**2 / (specfun.ball_volume(d) * volume) ** (2.0 / d)


def _liyau_split(S: Spectrum):
    """(K, n_flat, x0, C): omitted k in (K, K+n_flat] use lambda > ceiling, k > x0 use C k^{2/d}."""
    d = S.dimension
    C = liyau_constant(d, S.volume)
    K = S.count
    k_star = math.floor((S.completeness_ceiling / C) ** (d / 2.0))
    n_flat = max(0, k_star - K)
    return K, n_flat, max(K, k_star), C


def _heat_tail(S: Spectrum, t: np.ndarray) -> np.ndarray:
    if S.exhaustive:
        return np.zeros_like(t)
    if S.kind == OSCILLATOR:
        d = S.dimension
        closed = (2.0 * np.sinh(t)) ** (-d)
        stored = np.exp(-np.outer(t, S.values)) @ S.multiplicities
        return np.maximum(closed - stored, 0.0) + 8 * np.finfo(float).eps * closed
    if S.kind == DIRICHLET and S.volume is not None:
        d = S.dimension
        K, n_flat, x0, C = _liyau_split(S)
        flat = n_flat * np.exp(-t * S.completeness_ceiling)
        # int_x0^inf exp(-t C x^{2/d}) dx = (d/2)(tC)^{-d/2} Gamma(d/2, tC x0^{2/d})
        tc = t * C
        integral = 0.5 * d * tc ** (-0.5 * d) * specfun.upper_incomplete_gamma(0.5 * d, tc * x0 ** (2.0 / d))
        return flat + integral
    raise TailUncertifiableError("no tail certificate: spectrum has neither geometry nor a closed form")


def heat_trace(S: Spectrum, t: Real, max_relative_tail: float = MAX_RELATIVE_TAIL) -> TailBoundedValue:
    """Z(t) = sum_k exp(-lambda_k t) over stored levels, with certified tail.

    Raises TailUncertifiableError (carrying the threshold t) when the tail
    exceeds ``max_relative_tail`` of the value at any requested t.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr <= 0):
        raise DomainError("heat trace needs t > 0")
    value = np.exp(-np.outer(t_arr, S.values)) @ S.multiplicities
    tail = np.asarray(_heat_tail(S, t_arr), dtype=float)
    if np.any(tail > max_relative_tail * value):
        thr = heat_trace_threshold(S, max_relative_tail)
        raise TailUncertifiableError(
            f"heat trace tail exceeds {max_relative_tail:g} of the value below t = {thr:.6g}",
            threshold=thr,
        )
    if np.ndim(t) == 0:
        return TailBoundedValue(float(value[0]), float(tail[0]))
    return TailBoundedValue(value, tail)


def heat_trace_threshold(S: Spectrum, max_relative_tail: float = MAX_RELATIVE_TAIL) -> float:
    """Smallest t (to 1e-9 relative) at which tail <= max_relative_tail * value."""

    def excess(log_t):
        t = np.array([math.exp(log_t)])
        value = float((np.exp(-np.outer(t, S.values)) @ S.multiplicities)[0])
        return float(_heat_tail(S, t)[0]) - max_relative_tail * value

    if S.exhaustive:
        return 0.0
    hi = math.log(1.0 / S.lambda1)
    while excess(hi) > 0:
        hi += 1.0
        if hi > 50:
            raise TailUncertifiableError("heat trace tail never becomes small")
    lo = hi - 1.0
    while excess(lo) <= 0:
        lo -= 1.0
        if lo < -60:
            return math.exp(lo)
    return math.exp(optimize.brentq(excess, lo, hi, xtol=1e-10))


def _zeta_tail(S: Spectrum, rho: float) -> float:
    d = S.dimension
    if S.exhaustive:
        return 0.0
    if S.kind == OSCILLATOR:
        if rho <= d:
            raise DivergenceError(f"oscillator zeta diverges for rho <= {d}")
        n_max = len(S.values) - 1
        return (2 * n_max + d) ** (d - rho) / (2.0 * (rho - d) * math.factorial(d - 1))
    if S.kind == DIRICHLET and S.volume is not None:
        K, n_flat, x0, C = _liyau_split(S)
        s = 2.0 * rho / d
        return n_flat * S.completeness_ceiling ** (-rho) + C ** (-rho) * x0 ** (1.0 - s) / (s - 1.0)
    raise TailUncertifiableError("no tail certificate: spectrum has neither geometry nor a closed form")


def spectral_zeta(S: Spectrum, rho: float) -> TailBoundedValue:
    """zeta(rho) = sum_k lambda_k^{-rho}, stored levels plus certified tail."""
    if rho <= S.dimension / 2.0:
        raise DivergenceError(f"spectral zeta diverges for rho <= d/2 = {S.dimension / 2}")
    if S.values[0] <= 0:
        raise DomainError("spectral zeta needs positive eigenvalues")
    value = float(np.sum(S.multiplicities * S.values ** (-rho)))
    return TailBoundedValue(value, float(_zeta_tail(S, rho)))


def riesz_iterate_numeric(S: Spectrum, rho: float, delta: float, z: float, tol: float = 1e-12) -> float:
    """R_{rho+delta}(z) computed by fractional integration of R_rho."""
    if rho <= 0 or delta <= 0:
        raise DomainError("rho and delta must be positive")
    _check_ceiling(S, np.asarray(z))
    bps = [float(v) for v in S.values if v < z]
    integral = transforms.riemann_liouville(lambda t: riesz_mean(S, rho, t), delta, z, breakpoints=bps, tol=tol)
    return math.gamma(rho + delta + 1.0) / math.gamma(rho + 1.0) * integral


def _small_t_certificate(S: Spectrum):
    """(c, a) with Z(t) <= c t^{-a} for every t > 0."""
    d = S.dimension
    if S.kind == OSCILLATOR:
        return 2.0 ** (-d), float(d)
    if S.kind == DIRICHLET and S.volume is not None:
        return S.volume * (4.0 * math.pi) ** (-d / 2.0), d / 2.0
    if S.exhaustive:
        return float(S.count), 0.0
    raise TailUncertifiableError("no small-t certificate for this spectrum")


def zeta_via_mellin(S: Spectrum, rho: float, tol: float = 1e-11) -> transforms.MellinResult:
    """Spectral zeta through the Mellin transform of the certified heat trace."""
    c, a = _small_t_certificate(S)
    # Tails enter the error bound, so the certified panel may start where tail ~ value;
    # below that the cruder small-t certificate costs more than the tail does.
    t_min = heat_trace_threshold(S, MELLIN_RELATIVE_TAIL) * 1.0000001 if not S.exhaustive else 1e-12
    return transforms.mellin_zeta(
        lambda t: heat_trace(S, t, max_relative_tail=math.inf),
        rho,
        tol,
        small_t_constant=c,
        small_t_exponent=a,
        t_min=t_min,
        decay_rate=S.lambda1,
    )


def weyl_pair_sum(S: Spectrum, pair: "transforms.WeylPair") -> TailBoundedValue:
    """sum_j F(lambda_j) for a power or exponential Weyl pair, with tail."""
    if pair.family == "power":
        return spectral_zeta(S, pair.param)
    if pair.family == "exponential":
        return heat_trace(S, pair.param)
    if S.exhaustive:
        return TailBoundedValue(float(np.sum(S.multiplicities * pair.F(S.values))), 0.0)
    raise TailUncertifiableError("numeric Weyl pairs are only summable over exhaustive spectra")
