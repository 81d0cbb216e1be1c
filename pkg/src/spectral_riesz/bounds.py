"""Universal constants and closed-form eigenvalue bounds.

Every bound is computed from spectrum metadata (dimension, volume, second
moment, ground-state sup, lambda_1) and never from the level list, so a
bound and the functional it controls are evaluated independently.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize

from . import specfun
from .errors import DomainError, MissingMetadataError
from .spectra import Spectrum
from .transforms import WeylPair

__all__ = [
    "BoundResult",
    "classical_constant",
    "interpolation_constant",
    "interpolated_riesz_constant",
    "chiti_constant",
    "gagliardo_nirenberg_constant",
    "upper_bound",
    "lower_bound",
    "chiti_esssup_bound",
    "davies_esssup_bound",
    "sigma_nonnegative",
    "sigma_virial",
    "sigma_gn_remark",
    "sigma_gn_derived",
    "schrodinger_sigma",
    "lieb_thirring_oscillator",
    "kac_ray_oscillator",
    "oscillator_phase_volume",
    "zeta_liyau_constant",
    "zeta_polya_constant",
    "zeta_conjecture_constant",
    "CONJECTURE_METHODS",
    "upper_values",
    "lower_values",
]

UPPER = "upper"
LOWER = "lower"

# Methods whose inequalities are conjectured; they are evaluated, never asserted.
CONJECTURE_METHODS = frozenset({"conjecture", "zeta_polya", "polya_eigen"})


@dataclass(frozen=True)
class BoundResult:
    value: float
    direction: str
    label: str
    anchor: str
    conjectural: bool = False

    def __post_init__(self):
        if self.direction not in (UPPER, LOWER):
            raise DomainError(f"direction must be upper or lower, got {self.direction!r}")
        if not math.isfinite(self.value):
            raise DomainError(f"bound {self.label} is not finite")


# -- constants -------------------------------------------------------------


def classical_constant(rho: float, d: int) -> float:
    """L^cl_{rho,d} = Gamma(1 + rho) / ((4 pi)^{d/2} Gamma(1 + rho + d/2))."""
    if rho < 0:
        raise DomainError("classical constant needs rho >= 0")
    _check_dim(d)
    return math.exp(math.lgamma(1.0 + rho) - math.lgamma(1.0 + rho + d / 2.0)) / (4.0 * math.pi) ** (d / 2.0)


def _check_dim(d):
    if d < 1 or int(d) != d:
        raise DomainError("dimension must be a positive integer")


def _k_closed(rho, d):
    h = d / 2.0
    return (1.0 - rho) ** (rho - 1.0) * (1.0 + h) ** (1.0 + h) / (rho + h) ** (rho + h)


def interpolation_constant(rho: float, d: int, check: bool = True):
    """(K_{rho,d}, theta*) with K = inf_theta (1 + theta)^{1+d/2} / theta^{1-rho}.

    The closed form is cross-checked against a numeric minimization over
    log(theta) when ``check`` is set.
    """
    if not 0.0 <= rho < 1.0:
        raise DomainError("interpolation constant needs 0 <= rho < 1")
    _check_dim(d)
    h = d / 2.0
    theta = (1.0 - rho) / (rho + h)
    K = _k_closed(rho, d)
    if check:

        def log_obj(s):
            th = math.exp(s)
            return (1.0 + h) * math.log1p(th) - (1.0 - rho) * s

        res = optimize.minimize_scalar(log_obj, bounds=(-40.0, 10.0), method="bounded", options={"xatol": 1e-12})
        numeric = math.exp(res.fun)
        if abs(numeric - K) > 1e-9 * K:
            raise ArithmeticError(f"closed-form K {K} disagrees with numeric infimum {numeric}")
    return K, theta


def interpolated_riesz_constant(rho: float, d: int) -> float:
    """K_{rho,d} Gamma(1 + rho) Gamma(2 - rho) L^cl_{1,d}; rho = 1 is the limiting value L^cl_{1,d}."""
    if not 0.0 <= rho <= 1.0:
        raise DomainError("interpolated constant needs 0 <= rho <= 1")
    return _k_closed(rho, d) * math.gamma(1.0 + rho) * math.gamma(2.0 - rho) * classical_constant(1.0, d)


def chiti_constant(d: int) -> float:
    """H_d = 2d / (j^2_{d/2-1,1} J^2_{d/2}(j_{d/2-1,1}))."""
    _check_dim(d)
    nu = d / 2.0 - 1.0
    j = specfun.bessel_j_zero(nu, 1)
    return 2.0 * d / (j * j * specfun.bessel_j(d / 2.0, j) ** 2)


def gagliardo_nirenberg_constant(d: int) -> float:
    """K_{GN,d} = (d - 1)^2 / ((d - 2)^2 d), defined for d >= 3."""
    if d < 3 or int(d) != d:
        raise DomainError("K_GN is only defined for d >= 3")
    return (d - 1.0) ** 2 / ((d - 2.0) ** 2 * d)


def zeta_liyau_constant(rho: float, d: int) -> float:
    """((d+2)/d)^rho zeta(2rho/d) C_d^{2rho/d} / (4 pi^2)^rho, the Li-Yau zeta constant for |Omega| = 1."""
    return ((d + 2.0) / d) ** rho * zeta_polya_constant(rho, d)


def zeta_polya_constant(rho: float, d: int) -> float:
    if rho <= d / 2.0:
        raise DomainError("zeta bounds need rho > d/2")
    s = 2.0 * rho / d
    return specfun.euler_zeta(s) * specfun.ball_volume(d) ** s / (4.0 * math.pi**2) ** rho


def zeta_conjecture_constant(rho: float, d: int) -> float:
    """Gamma(rho - d/2) / (Gamma(rho) (4 pi)^{d/2})."""
    if rho <= d / 2.0:
        raise DomainError("zeta bounds need rho > d/2")
    return math.exp(math.lgamma(rho - d / 2.0) - math.lgamma(rho)) / (4.0 * math.pi) ** (d / 2.0)


# -- metadata access ------------------------------------------------------------


def _volume(S: Spectrum) -> float:
    if S.volume is None:
        raise MissingMetadataError("bound needs the domain volume")
    return float(S.volume)


def _melas_shift(S: Spectrum, melas_constant: Optional[float]) -> float:
    """M_d |Omega| / I(Omega)."""
    if melas_constant is None:
        raise MissingMetadataError("Melas bounds need a configured M_d (no default)")
    if not melas_constant > 0:
        raise DomainError("M_d must be positive")
    if S.second_moment is None:
        raise MissingMetadataError("Melas bounds need the second moment I(Omega)")
    return melas_constant * _volume(S) / S.second_moment


def _need(value, name):
    if value is None:
        raise DomainError(f"this bound needs {name}")
    return float(value)


def _need_rho(rho, lo, hi=math.inf, lo_open=False, hi_open=False, what=""):
    rho = _need(rho, "rho")
    bad_lo = rho <= lo if lo_open else rho < lo
    bad_hi = rho >= hi if hi_open else rho > hi
    if bad_lo or bad_hi:
        raise DomainError(f"rho = {rho} outside the range of {what}")
    return rho


def _ramp(x, p):
    return max(x, 0.0) ** p if x > 0 else 0.0


# -- upper bounds ---------------------------------------------------------------


def upper_bound(
    S: Spectrum,
    quantity: str,
    method: str,
    *,
    rho: Optional[float] = None,
    z: Optional[float] = None,
    t: Optional[float] = None,
    pair: Optional[WeylPair] = None,
    melas_constant: Optional[float] = None,
) -> BoundResult:
    """Closed-form upper bound on a spectral functional.

    quantity: riesz (rho, z), counting (z), heat (t), zeta (rho) or general (pair).
    """
    d = S.dimension
    key = (quantity, method)
    conj = method in CONJECTURE_METHODS

    if key == ("riesz", "berezin_li_yau"):
        rho = _need_rho(rho, 1.0, what="the Berezin-Li-Yau bound")
        v = classical_constant(rho, d) * _volume(S) * _need(z, "z") ** (rho + d / 2.0)
        return BoundResult(v, UPPER, "berezin_li_yau", "Laptev-Weidl Riesz-mean bound")
    if key == ("riesz", "interpolated") or key == ("counting", "interpolated"):
        rho = 0.0 if quantity == "counting" else _need_rho(rho, 0.0, 1.0, hi_open=True, what="the interpolated bound")
        K, _ = interpolation_constant(rho, d, check=False)
        c = K * math.gamma(1.0 + rho) * math.gamma(2.0 - rho) * classical_constant(1.0, d)
        v = c * _volume(S) * _need(z, "z") ** (rho + d / 2.0)
        return BoundResult(v, UPPER, "interpolated", "interpolated Berezin-Li-Yau / Laptev-Weidl bound")
    if key == ("counting", "berezin_li_yau"):
        v = ((d + 2.0) / d) ** (d / 2.0) * classical_constant(0.0, d) * _volume(S) * _need(z, "z") ** (d / 2.0)
        return BoundResult(v, UPPER, "berezin_li_yau_counting", "Berezin-Li-Yau counting bound")
    if key == ("riesz", "melas"):
        rho = _need_rho(rho, 1.0, what="the Melas Riesz bound")
        B = _melas_shift(S, melas_constant)
        v = classical_constant(rho, d) * _volume(S) * _ramp(_need(z, "z") - B, rho + d / 2.0)
        return BoundResult(v, UPPER, "melas_riesz", "Melas-corrected Riesz-mean bound")
    if key == ("heat", "kac"):
        t = _need(t, "t")
        return BoundResult(_volume(S) / (4.0 * math.pi * t) ** (d / 2.0), UPPER, "kac", "Kac heat-trace inequality")
    if key == ("heat", "melas"):
        t = _need(t, "t")
        B = _melas_shift(S, melas_constant)
        v = _volume(S) / (4.0 * math.pi * t) ** (d / 2.0) * math.exp(-B * t)
        return BoundResult(v, UPPER, "melas_heat", "Melas-corrected Kac inequality")
    if key == ("heat", "conjecture"):
        t = _need(t, "t")
        vol = _volume(S)
        v = vol / (4.0 * math.pi * t) ** (d / 2.0) * math.exp(-t / vol ** (2.0 / d))
        return BoundResult(v, UPPER, "conjecture_heat", "conjectured improved Kac inequality", True)
    if quantity == "zeta":
        rho = _need_rho(rho, d / 2.0, lo_open=True, what="zeta bounds")
        vol = _volume(S)
        if method == "zeta_liyau":
            v = zeta_liyau_constant(rho, d) * vol ** (2.0 * rho / d)
            return BoundResult(v, UPPER, "zeta_liyau", "Li-Yau spectral zeta bound")
        if method == "zeta_polya":
            v = zeta_polya_constant(rho, d) * vol ** (2.0 * rho / d)
            return BoundResult(v, UPPER, "zeta_polya", "spectral zeta bound under the Polya conjecture", True)
        if method == "melas":
            B = _melas_shift(S, melas_constant)
            v = zeta_conjecture_constant(rho, d) * vol * B ** (d / 2.0 - rho)
            return BoundResult(v, UPPER, "melas_zeta", "Melas-corrected spectral zeta bound")
        if method == "conjecture":
            v = zeta_conjecture_constant(rho, d) * vol ** (2.0 * rho / d)
            return BoundResult(v, UPPER, "conjecture_zeta", "conjectured spectral zeta bound", True)
    if quantity == "general":
        if pair is None:
            raise DomainError("general bounds need a Weyl pair (F, G)")
        vol = _volume(S)
        if method == "melas":
            s = _melas_shift(S, melas_constant)
            v = float(pair.G(s)) * vol / (4.0 * math.pi) ** (d / 2.0)
            return BoundResult(v, UPPER, "melas_general", "Melas-corrected Weyl-pair bound")
        if method == "conjecture":
            v = float(pair.G(vol ** (-2.0 / d))) * vol / (4.0 * math.pi) ** (d / 2.0)
            return BoundResult(v, UPPER, "conjecture_general", "conjectured Weyl-pair bound", True)
    raise DomainError(f"no upper bound {method!r} for {quantity!r}" + (" (conjectural)" if conj else ""))


# -- lower bounds ---------------------------------------------------------------


def _ground_sup(S: Spectrum) -> float:
    if S.ground_ess_sup is None:
        raise MissingMetadataError("bound needs the ground-state sup")
    return float(S.ground_ess_sup)


def lower_bound(
    S: Spectrum,
    quantity: str,
    method: str,
    *,
    rho: Optional[float] = None,
    z: Optional[float] = None,
    t: Optional[float] = None,
    k: Optional[int] = None,
    pair: Optional[WeylPair] = None,
    melas_constant: Optional[float] = None,
) -> BoundResult:
    """Closed-form lower bound on a spectral functional.

    quantity: riesz (rho, z), heat (t), zeta (rho), eigenvalue_sum (k),
    eigenvalue (k), lambda1, or general (pair).  lambda_1 is read as metadata.
    """
    d = S.dimension
    key = (quantity, method)
    lam1 = S.lambda1

    if key == ("riesz", "laptev"):
        rho = _need_rho(rho, 1.0, what="the Laptev bound")
        u = _ground_sup(S)
        v = classical_constant(rho, d) / (u * u) * _ramp(_need(z, "z") - lam1, rho + d / 2.0)
        return BoundResult(v, LOWER, "laptev", "Laptev ground-state lower bound")
    if key == ("riesz", "hermi"):
        rho = _need_rho(rho, 1.0, 1.0, what="the Chiti-Laptev bound (rho = 1 only)")
        v = 2.0 / (d + 2.0) / chiti_constant(d) * lam1 ** (-d / 2.0) * _ramp(_need(z, "z") - lam1, 1.0 + d / 2.0)
        return BoundResult(v, LOWER, "hermi", "Chiti-Laptev universal lower bound")
    if key == ("riesz", "riesz_low"):
        rho = _need_rho(rho, 1.0, what="the universal Riesz lower bound")
        c = math.exp(math.lgamma(1.0 + rho) + math.lgamma(1.0 + d / 2.0) - math.lgamma(1.0 + rho + d / 2.0))
        v = c / chiti_constant(d) * lam1 ** (-d / 2.0) * _ramp(_need(z, "z") - lam1, rho + d / 2.0)
        return BoundResult(v, LOWER, "riesz_low", "universal Riesz-mean lower bound")
    if key == ("heat", "heat_low"):
        t = _need(t, "t")
        v = math.gamma(1.0 + d / 2.0) / chiti_constant(d) * math.exp(-lam1 * t) / (lam1 * t) ** (d / 2.0)
        return BoundResult(v, LOWER, "heat_low", "universal heat-trace lower bound")
    if key == ("zeta", "zeta_low"):
        rho = _need_rho(rho, d / 2.0, lo_open=True, what="the zeta lower bound")
        c = math.gamma(1.0 + d / 2.0) / chiti_constant(d) * math.exp(math.lgamma(rho - d / 2.0) - math.lgamma(rho))
        return BoundResult(c * lam1 ** (-rho), LOWER, "zeta_low", "universal spectral zeta lower bound")
    if key == ("general", "general"):
        if pair is None:
            raise DomainError("general bounds need a Weyl pair (F, G)")
        v = math.gamma(1.0 + d / 2.0) / chiti_constant(d) * lam1 ** (-d / 2.0) * float(pair.G(lam1))
        return BoundResult(v, LOWER, "general_low", "universal Weyl-pair lower bound")
    if key == ("eigenvalue_sum", "liyau_sum"):
        k = _need_k(k)
        v = d / (d + 2.0) * 4.0 * math.pi**2 * k ** (1.0 + 2.0 / d) / (specfun.ball_volume(d) * _volume(S)) ** (2.0 / d)
        return BoundResult(v, LOWER, "liyau_sum", "Berezin-Li-Yau eigenvalue-sum bound")
    if key == ("eigenvalue_sum", "melas_sum"):
        k = _need_k(k)
        base = lower_bound(S, "eigenvalue_sum", "liyau_sum", k=k).value
        v = base + _melas_shift(S, melas_constant) * k
        return BoundResult(v, LOWER, "melas_sum", "Melas eigenvalue-sum bound")
    if key == ("eigenvalue", "liyau_eigen"):
        k = _need_k(k)
        v = d / (d + 2.0) * 4.0 * math.pi**2 * k ** (2.0 / d) / (specfun.ball_volume(d) * _volume(S)) ** (2.0 / d)
        return BoundResult(v, LOWER, "liyau_eigen", "Li-Yau individual eigenvalue bound")
    if key == ("eigenvalue", "polya_eigen"):
        k = _need_k(k)
        v = 4.0 * math.pi**2 * k ** (2.0 / d) / (specfun.ball_volume(d) * _volume(S)) ** (2.0 / d)
        return BoundResult(v, LOWER, "polya_eigen", "Polya conjecture eigenvalue bound", True)
    if key == ("lambda1", "faber_krahn"):
        j = specfun.bessel_j_zero(d / 2.0 - 1.0, 1)
        v = specfun.ball_volume(d) ** (2.0 / d) * j * j / _volume(S) ** (2.0 / d)
        return BoundResult(v, LOWER, "faber_krahn", "Rayleigh-Faber-Krahn inequality")
    raise DomainError(f"no lower bound {method!r} for {quantity!r}")


def _need_k(k):
    if k is None or int(k) != k or k < 1:
        raise DomainError("eigenvalue index k must be a positive integer")
    return int(k)


# -- ground state -----------------------------------------------------------------


def chiti_esssup_bound(lambda1: float, d: int) -> float:
    """Upper bound H_d L^cl_{0,d} lambda_1^{d/2} on the squared ground-state sup."""
    if not lambda1 > 0:
        raise DomainError("lambda1 must be positive")
    return chiti_constant(d) * classical_constant(0.0, d) * lambda1 ** (d / 2.0)


def davies_esssup_bound(lambda1: float, d: int) -> float:
    """Upper bound e^{1/(8 pi)} lambda_1^{d/4} on the ground-state sup itself."""
    if not lambda1 > 0:
        raise DomainError("lambda1 must be positive")
    _check_dim(d)
    return math.exp(1.0 / (8.0 * math.pi)) * lambda1 ** (d / 4.0)


# -- Assumption Sigma ----------------------------------------------------------------


def sigma_nonnegative() -> float:
    """sigma for a nonnegative potential."""
    return 1.0


def sigma_virial(beta: float) -> float:
    """sigma = beta / (2 + beta) when x . grad V <= beta V."""
    if not beta > 0:
        raise DomainError("virial exponent beta must be positive")
    return beta / (2.0 + beta)


def sigma_gn_remark(norm: float, d: int) -> float:
    """sigma = 1 / (1 - ||V||_{d/2} / K_GN), requiring ||V||_{d/2} < K_GN."""
    K = gagliardo_nirenberg_constant(d)
    if not 0 <= norm < K:
        raise DomainError(f"need 0 <= ||V||_(d/2) < K_GN = {K}")
    return 1.0 / (1.0 - norm / K)


def sigma_gn_derived(norm: float, d: int) -> float:
    """sigma = 1 / (1 - K_GN ||V_-||_{d/2}), requiring ||V_-||_{d/2} < 1 / K_GN."""
    K = gagliardo_nirenberg_constant(d)
    if not 0 <= norm < 1.0 / K:
        raise DomainError(f"need 0 <= ||V_-||_(d/2) < 1/K_GN = {1.0 / K}")
    return 1.0 / (1.0 - K * norm)


def schrodinger_sigma(recipe: str, **params) -> float:
    """Dispatch to one of the sigma recipes: nonnegative, virial, gn_remark, gn_derived."""
    if recipe == "nonnegative":
        return sigma_nonnegative()
    if recipe == "virial":
        return sigma_virial(params["beta"])
    if recipe == "gn_remark":
        return sigma_gn_remark(params["norm"], params["d"])
    if recipe == "gn_derived":
        return sigma_gn_derived(params["norm"], params["d"])
    raise DomainError(f"unknown sigma recipe {recipe!r}")


# -- harmonic oscillator ---------------------------------------------------------------


def oscillator_phase_volume(p: float, z: float, d: int) -> float:
    """int_{R^d} (z - |x|^2)_+^p dx in closed form."""
    if z <= 0:
        return 0.0
    _check_dim(d)
    return (
        specfun.ball_volume(d)
        * z ** (p + d / 2.0)
        * math.exp(math.lgamma(d / 2.0 + 1.0) + math.lgamma(p + 1.0) - math.lgamma(p + d / 2.0 + 1.0))
    )


def lieb_thirring_oscillator(rho: float, z: float, d: int) -> float:
    """L^cl_{rho,d} int (z - |x|^2)_+^{rho+d/2} dx, bounding R_rho(z) for V = |x|^2."""
    if rho < 1:
        raise DomainError("the Lieb-Thirring form is stated for rho >= 1")
    return classical_constant(rho, d) * oscillator_phase_volume(rho + d / 2.0, z, d)


def kac_ray_oscillator(t: float, d: int) -> float:
    """(4 pi t)^{-d/2} int e^{-t|x|^2} dx = (2t)^{-d}."""
    if not t > 0:
        raise DomainError("t must be positive")
    _check_dim(d)
    return (4.0 * math.pi * t) ** (-d / 2.0) * (math.pi / t) ** (d / 2.0)


def upper_values(S, quantity, method, grid, **kw):
    """Vector of upper-bound values over a grid of z (riesz/counting) or t (heat)."""
    name = "t" if quantity == "heat" else "z"
    return np.array([upper_bound(S, quantity, method, **{name: float(x)}, **kw).value for x in grid])


def lower_values(S, quantity, method, grid, **kw):
    name = "t" if quantity == "heat" else "z"
    return np.array([lower_bound(S, quantity, method, **{name: float(x)}, **kw).value for x in grid])
