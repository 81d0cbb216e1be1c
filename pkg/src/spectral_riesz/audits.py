"""Grid audits of the universal inequalities, monotonicity principles, sum
rules, root-found eigenvalue bounds and conjecture scans.

A margin is the slack of an inequality, positive when it holds.  Heat and
zeta quantities enter with their truncation tails on whichever side makes
the inequality harder to satisfy.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize

from . import bounds, specfun
from . import spectral_functions as sf
from .errors import BracketingError, DomainError, IncompleteSpectrumError, MissingMetadataError
from .grid import GridSpec
from .spectra import Spectrum
from .transforms import WeylPair

__all__ = [
    "AuditReport",
    "GammaBound",
    "DEFAULT_TOLERANCE",
    "default_zgrid",
    "default_tgrid",
    "universal_audit",
    "ratio_form_audit",
    "hs_to_ratio_margin",
    "monotonicity_audit",
    "bound_audit",
    "gamma_bound",
    "gamma_table",
    "bethe_coefficients",
    "bethe_check",
    "bethe_step_margin",
    "remainder_term",
    "remainder_audit",
    "chebyshev_check",
    "conjecture_scan",
    "crossing_rho0",
    "ChainStep",
    "kac_chain",
    "melas_chain",
]

DEFAULT_TOLERANCE = 1e-9
PASS, FAIL = "pass", "fail"
CONSISTENT, VIOLATED = "conjecture-consistent", "conjecture-violated"

# relative tail admitted on heat-trace grids used for monotonicity
HEAT_AUDIT_RELATIVE_TAIL = 1e-12


@dataclass
class AuditReport:
    label: str
    grid_values: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    margins: np.ndarray
    tolerance: float = DEFAULT_TOLERANCE
    conjecture: bool = False
    grid: Optional[GridSpec] = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid_values = np.asarray(self.grid_values, dtype=float)
        self.lhs = np.asarray(self.lhs, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)
        self.margins = np.asarray(self.margins, dtype=float)
        if not (len(self.grid_values) == len(self.lhs) == len(self.rhs) == len(self.margins)):
            raise DomainError("audit columns must have equal length")

    @property
    def worst_margin(self) -> float:
        return float(np.min(self.margins)) if len(self.margins) else math.inf

    @property
    def worst_index(self) -> int:
        return int(np.argmin(self.margins))

    @property
    def passed(self) -> bool:
        return self.worst_margin >= -self.tolerance

    @property
    def verdict(self) -> str:
        if self.conjecture:
            return CONSISTENT if self.passed else VIOLATED
        return PASS if self.passed else FAIL

    def to_dict(self) -> dict:
        out = {
            "label": self.label,
            "verdict": self.verdict,
            "worst_margin": self.worst_margin,
            "tolerance": self.tolerance,
            "grid": None if self.grid is None else self.grid.to_dict(),
            "rows": [
                {"grid_value": g, "lhs": a, "rhs": b, "margin": m}
                for g, a, b, m in zip(
                    self.grid_values.tolist(), self.lhs.tolist(), self.rhs.tolist(), self.margins.tolist()
                )
            ],
        }
        if self.extras:
            out["extras"] = _jsonable(self.extras)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_fmt_json)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["grid_value", "lhs", "rhs", "margin"])
        for row in zip(self.grid_values, self.lhs, self.rhs, self.margins):
            w.writerow([format_float(x) for x in row])
        return buf.getvalue()


def format_float(x) -> str:
    return "%.17g" % float(x)


def _fmt_json(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


# -- grids -------------------------------------------------------------------------


def default_zgrid(S: Spectrum, count: int = 200) -> GridSpec:
    """count points from lambda_1 / 2 to 0.8 of the completeness ceiling."""
    if S.exhaustive:
        raise DomainError("exhaustive spectra need an explicit z grid")
    return GridSpec(S.lambda1 / 2.0, 0.8 * S.completeness_ceiling, count)


def default_tgrid(S: Spectrum, count: int = 200, max_relative_tail: float = HEAT_AUDIT_RELATIVE_TAIL) -> GridSpec:
    """Log grid from the smallest certifiable t to 5 / lambda_1."""
    t_min = sf.heat_trace_threshold(S, max_relative_tail) * (1 + 1e-9)
    t_max = 5.0 / S.lambda1
    if not t_min < t_max:
        raise IncompleteSpectrumError("completeness ceiling too low for a certified heat-trace grid")
    return GridSpec(t_min, t_max, count, "log")


def _zpoints(S, zgrid):
    if zgrid is None:
        zgrid = default_zgrid(S)
    z = zgrid.points()
    if z[-1] > S.completeness_ceiling:
        raise IncompleteSpectrumError(
            f"grid reaches z = {z[-1]:.6g} above the completeness ceiling {S.completeness_ceiling:.6g}"
        )
    return zgrid, z


# -- universal inequalities ------------------------------------------------------------


def _sigma(S):
    if S.kinetic is None or S.sigma is None:
        raise MissingMetadataError("Schrodinger families need kinetic energies and sigma")
    return float(S.sigma)


def universal_audit(
    S: Spectrum,
    family: str,
    zgrid: Optional[GridSpec] = None,
    rho: Optional[float] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> AuditReport:
    """Margins RHS - LHS of a universal Riesz-mean inequality on a z grid.

    yang             R_2 <= (4/d) sum lambda_k (z - lambda_k)_+
    hs               R_rho <= (2 rho/d) sum lambda_k (z - lambda_k)_+^{rho-1}, rho >= 2
    hs_small         R_rho <= (4/d) sum lambda_k (z - lambda_k)_+^{rho-1}, 1 < rho <= 2
    schrodinger_yang R_2 <= (4/d) sum T_k (z - lambda_k)_+
    schrodinger_hs   R_rho <= rho/(rho + d/(2 sigma)) z R_{rho-1}, rho >= 2
    schrodinger_small R_rho <= z R_{rho-1} / (1 + d/(4 sigma)), 1 < rho <= 2
    """
    d = S.dimension
    zgrid, z = _zpoints(S, zgrid)
    if family == "yang":
        rho = 2.0
        lhs = sf.riesz_mean(S, 2.0, z)
        rhs = 4.0 / d * sf.weighted_riesz(S, 2.0, z)
    elif family == "hs":
        rho = _rho_in(rho, 2.0, math.inf, family)
        lhs = sf.riesz_mean(S, rho, z)
        rhs = 2.0 * rho / d * sf.weighted_riesz(S, rho, z)
    elif family == "hs_small":
        rho = _rho_in(rho, 1.0, 2.0, family, lo_open=True)
        lhs = sf.riesz_mean(S, rho, z)
        rhs = 4.0 / d * sf.weighted_riesz(S, rho, z)
    elif family == "schrodinger_yang":
        _sigma(S)
        rho = 2.0
        lhs = sf.riesz_mean(S, 2.0, z)
        rhs = 4.0 / d * sf.weighted_riesz(S, 2.0, z, weight="kinetic")
    elif family == "schrodinger_hs":
        sigma = _sigma(S)
        rho = _rho_in(rho, 2.0, math.inf, family)
        lhs = sf.riesz_mean(S, rho, z)
        rhs = rho / (rho + d / (2.0 * sigma)) * z * sf.riesz_mean(S, rho - 1.0, z)
    elif family == "schrodinger_small":
        sigma = _sigma(S)
        rho = _rho_in(rho, 1.0, 2.0, family, lo_open=True)
        lhs = sf.riesz_mean(S, rho, z)
        rhs = z * sf.riesz_mean(S, rho - 1.0, z) / (1.0 + d / (4.0 * sigma))
    else:
        raise DomainError(f"unknown universal family {family!r}")
    lhs, rhs = np.asarray(lhs, float), np.asarray(rhs, float)
    return AuditReport(f"{family}(rho={rho:g})", z, lhs, rhs, rhs - lhs, tolerance, grid=zgrid)


def _rho_in(rho, lo, hi, what, lo_open=False):
    if rho is None:
        rho = 2.0 if lo >= 2.0 or hi == 2.0 else lo
    rho = float(rho)
    if (rho <= lo if lo_open else rho < lo) or rho > hi:
        raise DomainError(f"rho = {rho} outside the range of {what}")
    return rho


def ratio_form_audit(
    S: Spectrum, rho: float = 2.0, zgrid: Optional[GridSpec] = None, tolerance: float = DEFAULT_TOLERANCE
) -> AuditReport:
    """R_rho(z) <= rho/(rho + d/2) z R_{rho-1}(z), with the sup of R_rho/(z R_{rho-1}) over the grid."""
    if rho < 2:
        raise DomainError("the ratio form needs rho >= 2")
    d = S.dimension
    zgrid, z = _zpoints(S, zgrid)
    lhs = np.asarray(sf.riesz_mean(S, rho, z), float)
    lower = z * np.asarray(sf.riesz_mean(S, rho - 1.0, z), float)
    rhs = rho / (rho + d / 2.0) * lower
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(lower > 0, lhs / np.where(lower > 0, lower, 1.0), 0.0)
    extras = {"sup_ratio": float(np.max(ratio)), "sharp_constant": rho / (rho + d / 2.0)}
    return AuditReport(f"ratio_form(rho={rho:g})", z, lhs, rhs, rhs - lhs, tolerance, grid=zgrid, extras=extras)


def hs_to_ratio_margin(hs_margin, rho: float, d: int):
    """Ratio-form margin recovered from the Harrell-Stubbe margin.

    Since z R_{rho-1} = R_rho + sum lambda_k (z - lambda_k)_+^{rho-1}, the two
    margins differ by the factor (d/2) / (rho + d/2).
    """
    return np.asarray(hs_margin, float) * (d / 2.0) / (rho + d / 2.0)


# -- monotonicity ------------------------------------------------------------------------


def monotonicity_audit(
    S: Spectrum,
    functional: str,
    grid: Optional[GridSpec] = None,
    rho: float = 2.0,
    sigma: Optional[float] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> AuditReport:
    """Successive differences of a scaled functional, signed so that >= 0 holds.

    riesz_ratio        R_rho(z) / z^{rho + d/2} nondecreasing (rho >= 2)
    riesz_ratio_sigma  R_rho(z) / z^{rho + d/(2 sigma)} (rho >= 2) or
                       z^{rho + d rho/(4 sigma)} (1 < rho <= 2) nondecreasing
    heat_scaled        t^{d/2} Z(t) nonincreasing
    heat_scaled_sigma  t^{d/(2 sigma)} Z(t) nonincreasing
    """
    d = S.dimension
    if functional in ("riesz_ratio", "riesz_ratio_sigma"):
        grid, z = _zpoints(S, grid)
        if functional == "riesz_ratio":
            if rho < 2:
                raise DomainError("riesz_ratio needs rho >= 2")
            expo = rho + d / 2.0
        else:
            sig = _sigma_value(S, sigma)
            if rho >= 2:
                expo = rho + d / (2.0 * sig)
            elif rho > 1:
                expo = rho + d * rho / (4.0 * sig)
            else:
                raise DomainError("riesz_ratio_sigma needs rho > 1")
        f = np.asarray(sf.riesz_mean(S, rho, z), float) / z**expo
        # lhs: value at the earlier point, rhs: value at the later one
        lhs, rhs = f[:-1], f[1:]
        label = f"{functional}(rho={rho:g}, exponent={expo:g})"
        return AuditReport(label, z[1:], lhs, rhs, rhs - lhs, tolerance, grid=grid)
    if functional in ("heat_scaled", "heat_scaled_sigma"):
        if grid is None:
            grid = default_tgrid(S)
        t = grid.points()
        expo = d / 2.0 if functional == "heat_scaled" else d / (2.0 * _sigma_value(S, sigma))
        Z = sf.heat_trace(S, t)
        lo = np.asarray(Z.value, float) * t**expo
        hi = (np.asarray(Z.value, float) + np.asarray(Z.tail_bound, float)) * t**expo
        # nonincreasing: the certified lower value at t_i must dominate the upper value at t_{i+1}
        lhs, rhs = hi[1:], lo[:-1]
        label = f"{functional}(exponent={expo:g})"
        extras = {"scaled_at_smallest_t": float(lo[0]), "scaled_upper_at_smallest_t": float(hi[0])}
        return AuditReport(label, t[1:], lhs, rhs, rhs - lhs, tolerance, grid=grid, extras=extras)
    raise DomainError(f"unknown monotone functional {functional!r}")


def _sigma_value(S, sigma):
    if sigma is not None:
        return float(sigma)
    if S.sigma is None:
        raise MissingMetadataError("sigma-modified functionals need sigma")
    return float(S.sigma)


# -- bounds against functionals -------------------------------------------------------------


def bound_audit(
    S: Spectrum,
    quantity: str,
    method: str,
    direction: str,
    grid: Optional[GridSpec] = None,
    rho: Optional[float] = None,
    melas_constant: Optional[float] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> AuditReport:
    """Compare a closed-form bound with the computed functional on a grid.

    quantity riesz/counting use a z grid, heat a t grid.  Upper bounds are
    compared with value + tail, lower bounds with the stored value.
    """
    kw = {"melas_constant": melas_constant}
    if quantity in ("riesz", "counting"):
        grid, x = _zpoints(S, grid)
        if quantity == "counting":
            f = np.asarray(sf.counting(S, x), float)
        else:
            kw["rho"] = rho
            f = np.asarray(sf.riesz_mean(S, rho, x), float)
        tail = np.zeros_like(f)
    elif quantity == "heat":
        if grid is None:
            grid = default_tgrid(S, max_relative_tail=sf.MAX_RELATIVE_TAIL)
        x = grid.points()
        Z = sf.heat_trace(S, x)
        f, tail = np.asarray(Z.value, float), np.asarray(Z.tail_bound, float)
    else:
        raise DomainError(f"bound_audit handles riesz, counting and heat, not {quantity!r}")
    if direction == "upper":
        b = bounds.upper_values(S, quantity, method, x, **kw)
        lhs, rhs = f + tail, b
    elif direction == "lower":
        b = bounds.lower_values(S, quantity, method, x, **kw)
        lhs, rhs = b, f
    else:
        raise DomainError("direction must be upper or lower")
    conj = method in bounds.CONJECTURE_METHODS
    return AuditReport(f"{direction}:{quantity}:{method}", x, lhs, rhs, rhs - lhs, tolerance, conj, grid=grid)


# -- gamma bounds -----------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaBound:
    m: int
    rho: float
    gamma: float
    next_eigenvalue: float

    @property
    def slack(self) -> float:
        return self.gamma - self.next_eigenvalue


def _gamma_function(lams, rho, d):
    def f(z):
        diff = z - lams
        pos = diff > 0
        return float(np.sum(diff[pos] ** (rho - 1.0) * (diff[pos] - 2.0 * rho / d * lams[pos])))

    return f


def gamma_bound(S: Spectrum, m: int, rho: float) -> GammaBound:
    """gamma_m(rho): the root above lambda_m of
    sum_{k<=m} (z - lambda_k)^rho = (2 rho/d) sum_{k<=m} lambda_k (z - lambda_k)^{rho-1}.
    """
    if rho < 2:
        raise DomainError("gamma bounds need rho >= 2")
    if m < 1 or int(m) != m:
        raise DomainError("m must be a positive integer")
    m = int(m)
    nxt = S.eigenvalue(m + 1)
    lams = S.eigenvalues()[:m]
    f = _gamma_function(lams, rho, S.dimension)
    lam_m = float(lams[-1])
    lo = lam_m * (1.0 + 1e-12)
    if f(lo) > 0:
        raise BracketingError(f"gamma_{m}({rho}): function positive just above lambda_m")
    hi = 2.0 * lam_m
    while f(hi) <= 0:
        hi *= 2.0
        if hi > 1e6 * lam_m:
            raise BracketingError(f"gamma_{m}({rho}): no sign change found")
    g = optimize.brentq(f, lo, hi, xtol=1e-14 * hi, rtol=1e-12, maxiter=500)
    return GammaBound(m, float(rho), float(g), nxt)


def gamma_table(S: Spectrum, ms: Sequence[int], rhos: Sequence[float]):
    """GammaBound for every (m, rho), ordered by m then rho."""
    return [gamma_bound(S, m, r) for m in ms for r in rhos]


# -- Bethe sum rule on (0, pi) ----------------------------------------------------------


def _E(omega):
    # int_0^pi e^{i omega x} dx
    omega = np.asarray(omega, float)
    return np.pi * np.exp(0.5j * np.pi * omega) * np.sinc(omega / 2.0)


def bethe_coefficients(j: int, xi: float, K: int) -> np.ndarray:
    """a_{jk}(xi) for k = 1..K with u_k = sqrt(2/pi) sin(kx) on (0, pi)."""
    if j < 1:
        raise DomainError("level index j starts at 1")
    k = np.arange(1, K + 1, dtype=float)

    def C(n):
        return 0.5 * (_E(xi + n) + _E(xi - n))

    return (C(k - j) - C(k + j)) / np.pi


def bethe_check(j: int, xi: float, K: int):
    """(partial_sum, residual) of sum_{k<=K} (k^2 - j^2)|a_jk(xi)|^2 against xi^2."""
    if K < 1:
        raise DomainError("truncation K must be positive")
    a = bethe_coefficients(j, xi, K)
    k = np.arange(1, K + 1, dtype=float)
    s = float(np.sum((k * k - j * j) * np.abs(a) ** 2))
    return s, abs(s - xi * xi)


def bethe_step_margin(z: float, xi: float) -> float:
    """|xi|^2 + sum_k (z - k^2)_+ |a_1k(xi)|^2 - (z - 1)_+ on (0, pi); only k^2 < z contribute."""
    K = max(1, int(math.floor(math.sqrt(max(z, 0.0)))) + 1)
    a = bethe_coefficients(1, xi, K)
    k = np.arange(1, K + 1, dtype=float)
    return xi * xi + float(np.sum(np.maximum(z - k * k, 0.0) * np.abs(a) ** 2)) - max(z - 1.0, 0.0)


# -- remainder term ----------------------------------------------------------------------------


def remainder_term(S: Spectrum, rho: float, z0: float, t: float) -> float:
    """R(t) in Gamma(rho+1)/Gamma(p+1) t^{d/2} Z(t) >= R_rho(z0)/z0^p + R(t), p = rho + d/2.

    R(t) = t^{d/2}/Gamma(p+1) sum_{lambda<z0} e^{-lambda t} gamma(rho+1, (z0-lambda) t)
           - R_rho(z0)/z0^p gamma(p+1, z0 t)/Gamma(p+1)
    """
    d = S.dimension
    p = rho + d / 2.0
    vals, mult = S.values, S.multiplicities
    below = vals < z0
    head = np.sum(
        mult[below] * np.exp(-vals[below] * t) * specfun.lower_incomplete_gamma(rho + 1.0, (z0 - vals[below]) * t)
    )
    first = t ** (d / 2.0) / math.gamma(p + 1.0) * float(head)
    ratio = sf.riesz_mean(S, rho, z0) / z0**p
    return first - ratio * specfun.lower_incomplete_gamma(p + 1.0, z0 * t) / math.gamma(p + 1.0)


def remainder_audit(
    S: Spectrum, rho: float, z0: float, tgrid: GridSpec, tolerance: float = DEFAULT_TOLERANCE
) -> AuditReport:
    """Margins of Gamma(rho+1)/Gamma(p+1) t^{d/2} Z(t) >= R_rho(z0)/z0^p + R(t).

    Z(t) enters through its stored partial sum, the unfavourable side.
    """
    if rho < 2:
        raise DomainError("the remainder inequality needs rho >= 2")
    if z0 > S.completeness_ceiling:
        raise IncompleteSpectrumError("z0 above the completeness ceiling")
    if S.volume is None:
        raise MissingMetadataError("remainder audit needs geometry")
    d = S.dimension
    p = rho + d / 2.0
    t = tgrid.points()
    Z = np.exp(-np.outer(t, S.values)) @ S.multiplicities
    lhs = math.gamma(rho + 1.0) / math.gamma(p + 1.0) * t ** (d / 2.0) * Z
    R = np.array([remainder_term(S, rho, z0, float(x)) for x in t])
    base = sf.riesz_mean(S, rho, z0) / z0**p
    rhs = base + R
    extras = {"remainder": R, "riesz_ratio_at_z0": base}
    return AuditReport(
        f"remainder(rho={rho:g}, z0={z0:g})", t, rhs, lhs, lhs - rhs, tolerance, grid=tgrid, extras=extras
    )


# -- reverse Chebyshev --------------------------------------------------------------------------


def _monotone(x, sign):
    dx = np.diff(x)
    return bool(np.all(dx >= 0)) if sign > 0 else bool(np.all(dx <= 0))


def chebyshev_check(w, a, b) -> float:
    """sum w sum w a b <= sum w a sum w b for oppositely ordered a, b; returns RHS - LHS."""
    w, a, b = (np.asarray(x, float) for x in (w, a, b))
    if not (w.shape == a.shape == b.shape) or w.ndim != 1:
        raise DomainError("w, a and b must be 1-D of equal length")
    if np.any(w < 0):
        raise DomainError("weights must be nonnegative")
    if not ((_monotone(a, 1) and _monotone(b, -1)) or (_monotone(a, -1) and _monotone(b, 1))):
        raise DomainError("one sequence must be nondecreasing and the other nonincreasing")
    return float(np.sum(w * a) * np.sum(w * b) - np.sum(w) * np.sum(w * a * b))


# -- conjectures -----------------------------------------------------------------------------


def conjecture_scan(
    members: Sequence,
    target: str,
    *,
    rho: Optional[float] = None,
    pair: Optional[WeylPair] = None,
    tgrid: Optional[GridSpec] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> AuditReport:
    """Margins of a conjectured bound minus the computed functional (tails counted unfavourably).

    members: sequence of (parameter, Spectrum).  Targets:
      eq_4_7  sum F(lambda_j) <= (4 pi)^{-d/2} |Omega| G(|Omega|^{-2/d}) for a Weyl pair
      eq_4_8  zeta(rho) <= Gamma(rho - d/2)/Gamma(rho) |Omega|^{2 rho/d} / (4 pi)^{d/2}
      eq_4_9  Z(t) <= |Omega| (4 pi t)^{-d/2} exp(-t / |Omega|^{2/d}) on a t grid
    Rows are one per member (eq_4_7, eq_4_8) or per (member, t) (eq_4_9).
    """
    params, xs, lhs, rhs, member_of = [], [], [], [], []
    for i, (param, S) in enumerate(members):
        params.append(param)
        # non-numeric parameters (e.g. "disk") are placed on the grid by member index
        x_member = float(param) if isinstance(param, (int, float, np.number)) else float(i)
        if target == "eq_4_8":
            if rho is None:
                raise DomainError("eq_4_8 needs rho")
            z = sf.spectral_zeta(S, rho)
            b = bounds.upper_bound(S, "zeta", "conjecture", rho=rho).value
            xs.append(x_member)
            lhs.append(z.upper)
            rhs.append(b)
            member_of.append(i)
        elif target == "eq_4_7":
            if pair is None:
                raise DomainError("eq_4_7 needs a Weyl pair")
            s = sf.weyl_pair_sum(S, pair)
            b = bounds.upper_bound(S, "general", "conjecture", pair=pair).value
            xs.append(x_member)
            lhs.append(s.upper)
            rhs.append(b)
            member_of.append(i)
        elif target == "eq_4_9":
            g = tgrid if tgrid is not None else default_tgrid(S, 50, sf.MAX_RELATIVE_TAIL)
            t = g.points()
            Z = sf.heat_trace(S, t)
            b = np.array([bounds.upper_bound(S, "heat", "conjecture", t=float(x)).value for x in t])
            xs.extend(t.tolist())
            lhs.extend((np.asarray(Z.value) + np.asarray(Z.tail_bound)).tolist())
            rhs.extend(b.tolist())
            member_of.extend([i] * len(t))
        else:
            raise DomainError(f"unknown conjecture target {target!r}")
    lhs, rhs = np.array(lhs), np.array(rhs)
    margins = rhs - lhs
    report = AuditReport(
        f"conjecture:{target}", xs, lhs, rhs, margins, tolerance, conjecture=True,
        extras={"parameters": params, "member": member_of},
    )
    if not report.passed:
        k = report.worst_index
        report.extras["witness"] = {
            "parameter": params[member_of[k]],
            "grid_value": float(report.grid_values[k]),
            "margin": float(margins[k]),
        }
    return report


def crossing_rho0(d: int = 2, lo: Optional[float] = None, hi: float = 20.0, xtol: float = 1e-9) -> float:
    """rho where the conjectured zeta constant stops improving on the Li-Yau one.

    Located by bisection on conjecture(rho) - liyau(rho) over (d/2, hi].
    """
    if lo is None:
        lo = d / 2.0 + 1e-6

    def diff(r):
        return bounds.zeta_conjecture_constant(r, d) - bounds.zeta_liyau_constant(r, d)

    flo, fhi = diff(lo), diff(hi)
    if flo * fhi > 0:
        raise BracketingError(f"no crossing of the zeta constants in ({lo}, {hi})")
    return float(optimize.bisect(diff, lo, hi, xtol=xtol, maxiter=200))


# -- transform chains ------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    """One link of a transform chain: numeric image versus its closed form."""

    name: str
    point: float
    numeric: float
    closed: float

    @property
    def relative_error(self) -> float:
        return abs(self.numeric - self.closed) / abs(self.closed)


def kac_chain(volume: float, d: int, ts: Sequence[float]):
    """Laplace image of the rho = 1 Berezin-Li-Yau bound, scaled by t^2 / Gamma(2),
    against Kac's bound |Omega| (4 pi t)^{-d/2}."""
    from . import transforms

    c = bounds.classical_constant(1.0, d) * volume
    p = 1.0 + d / 2.0
    out = []
    for t in ts:
        knot = 50.0 / t
        lap = transforms.numeric_laplace(
            lambda z: c * z**p, t, knot=knot, extrapolation=transforms.Extrapolation.power_law(p)
        )
        out.append(ChainStep("kac", float(t), t * t * lap, volume / (4.0 * math.pi * t) ** (d / 2.0)))
    return out


def melas_chain(
    volume: float,
    second_moment: float,
    d: int,
    melas_constant: float,
    *,
    rho: float = 2.0,
    zs: Sequence[float] = (),
    ts: Sequence[float] = (),
    zeta_rho: float = 3.0,
):
    """Numeric images of the Melas eigenvalue-sum bound along Legendre, Riesz
    iteration, Laplace and Weyl transforms, each paired with its closed form.

    sum_{i<=k} lambda_i >= A k^{1+2/d} + B k       (B = M_d |Omega| / I)
    Legendre   ->  R_1(z) <= L_1 |Omega| (z - B)_+^{1+d/2}
    iteration  ->  R_rho(z) <= L_rho |Omega| (z - B)_+^{rho+d/2}
    Laplace    ->  Z(t) <= |Omega| (4 pi t)^{-d/2} e^{-B t}
    Weyl       ->  zeta(s) <= (4 pi)^{-d/2} Gamma(s - d/2)/Gamma(s) |Omega| B^{d/2-s}
    """
    from . import transforms

    B = melas_constant * volume / second_moment
    A = d / (d + 2.0) * 4.0 * math.pi**2 / (specfun.ball_volume(d) * volume) ** (2.0 / d)
    q = 1.0 + 2.0 / d
    L1 = bounds.classical_constant(1.0, d)
    Lr = bounds.classical_constant(rho, d)
    steps = []

    def f(k):
        return A * np.asarray(k, float) ** q + B * np.asarray(k, float)

    def r1(z):
        return L1 * volume * max(z - B, 0.0) ** (1.0 + d / 2.0)

    for z in zs:
        # maximizer k* = ((z - B)/(q A))^{d/2}; search up to four times that
        kstar = max((max(z - B, 0.0) / (q * A)) ** (d / 2.0), 1.0)
        leg = transforms.legendre_transform(f, z, 4.0 * kstar, n_grid=20001)
        steps.append(ChainStep("legendre", float(z), leg.value, r1(z)))
        it = math.gamma(rho + 1.0) / math.gamma(2.0) * transforms.riemann_liouville(
            r1, rho - 1.0, z, lower=B
        )
        steps.append(ChainStep("riesz_iteration", float(z), it, Lr * volume * max(z - B, 0.0) ** (rho + d / 2.0)))
    p = rho + d / 2.0
    for t in ts:
        knot = B + 60.0 / t
        lap = transforms.numeric_laplace(
            lambda z: Lr * volume * max(z - B, 0.0) ** p,
            t,
            knot=knot,
            extrapolation=transforms.Extrapolation.power_law(p, origin=B),
            breakpoints=[B],
        )
        heat = t ** (rho + 1.0) / math.gamma(rho + 1.0) * lap
        steps.append(ChainStep("laplace", float(t), heat, volume / (4.0 * math.pi * t) ** (d / 2.0) * math.exp(-B * t)))
    s = zeta_rho
    knot = 10.0 * B
    weyl = transforms.weyl_transform(
        lambda x: x ** (-s), d / 2.0, B, knot=knot, extrapolation=transforms.Extrapolation.power_law(-s)
    )
    closed = (4.0 * math.pi) ** (-d / 2.0) * math.gamma(s - d / 2.0) / math.gamma(s) * volume * B ** (d / 2.0 - s)
    steps.append(ChainStep("weyl", float(s), (4.0 * math.pi) ** (-d / 2.0) * volume * weyl, closed))
    return steps
