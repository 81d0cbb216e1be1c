"""Exactly known model spectra with geometry metadata.

A :class:`Spectrum` stores distinct eigenvalue levels with multiplicities
and a completeness ceiling: every eigenvalue at or below the ceiling is
present with its full multiplicity, so any functional that only sees
eigenvalues below the ceiling is evaluated exactly.
"""

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import specfun
from .errors import (
    AssumptionViolation,
    DomainError,
    EmptySpectrumError,
    IncompleteSpectrumError,
    MissingMetadataError,
    OrderingError,
)

__all__ = [
    "Spectrum",
    "box_spectrum",
    "interval_spectrum",
    "ball_spectrum",
    "oscillator_spectrum",
    "explicit_spectrum",
    "merge_levels",
    "MERGE_RTOL",
]

MERGE_RTOL = 1e-11

DIRICHLET = "dirichlet"
OSCILLATOR = "oscillator"
EXPLICIT = "explicit"


def _readonly(a, dtype):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ordered eigenvalue levels with multiplicities and optional metadata.

    ``kind`` selects how truncation tails are certified: ``"dirichlet"``
    (Li-Yau lower bound on omitted eigenvalues, needs ``volume``),
    ``"oscillator"`` (closed form) or ``"explicit"`` (only when the list is
    exhaustive, i.e. the ceiling is infinite).
    """

    dimension: int
    values: np.ndarray
    multiplicities: np.ndarray
    completeness_ceiling: float
    volume: Optional[float] = None
    second_moment: Optional[float] = None
    ground_ess_sup: Optional[float] = None
    sigma: Optional[float] = None
    kinetic: Optional[np.ndarray] = None
    kind: str = field(default=EXPLICIT)

    def __post_init__(self):
        if self.dimension < 1 or int(self.dimension) != self.dimension:
            raise DomainError("dimension must be a positive integer")
        object.__setattr__(self, "values", _readonly(self.values, float))
        object.__setattr__(self, "multiplicities", _readonly(self.multiplicities, np.int64))
        values, mult = self.values, self.multiplicities
        if values.ndim != 1 or values.shape != mult.shape:
            raise OrderingError("levels must be a flat list of (value, multiplicity)")
        if len(values) == 0:
            raise EmptySpectrumError("spectrum has no levels")
        if not np.all(np.isfinite(values)):
            raise OrderingError("eigenvalues must be finite")
        if np.any(np.diff(values) <= 0):
            raise OrderingError("eigenvalues must be strictly increasing")
        if np.any(mult < 1):
            raise OrderingError("multiplicities must be >= 1")
        if self.kind == DIRICHLET and values[0] <= 0:
            raise OrderingError("Dirichlet eigenvalues must be positive")
        if self.completeness_ceiling < values[-1]:
            raise OrderingError("completeness ceiling below the largest stored level")
        for name in ("volume", "second_moment", "ground_ess_sup", "sigma"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise DomainError(f"{name} must be positive")
        if self.kinetic is not None:
            kin = _readonly(self.kinetic, float)
            object.__setattr__(self, "kinetic", kin)
            if kin.shape != values.shape:
                raise OrderingError("kinetic needs one value per level")
            if self.sigma is None:
                raise MissingMetadataError("kinetic data requires sigma")
            if np.any(kin <= 0):
                raise AssumptionViolation("kinetic energies must be positive")
            excess = kin - self.sigma * values
            if np.any(excess > 1e-12 * np.abs(values)):
                k = int(np.argmax(excess))
                raise AssumptionViolation(
                    f"T_k = {kin[k]} exceeds sigma * lambda_k = {self.sigma * values[k]}"
                )

    # -- views ---------------------------------------------------------
    @property
    def levels(self):
        return [(float(v), int(m)) for v, m in zip(self.values, self.multiplicities)]

    @property
    def lambda1(self) -> float:
        return float(self.values[0])

    @property
    def count(self) -> int:
        """Number of stored eigenvalues counted with multiplicity."""
        return int(self.multiplicities.sum())

    @property
    def exhaustive(self) -> bool:
        return math.isinf(self.completeness_ceiling)

    def eigenvalues(self) -> np.ndarray:
        """Stored eigenvalues repeated according to multiplicity."""
        return np.repeat(self.values, self.multiplicities)

    def eigenvalue(self, k: int) -> float:
        """k-th eigenvalue (1-based, counted with multiplicity)."""
        if k < 1:
            raise DomainError("eigenvalue index starts at 1")
        cum = np.cumsum(self.multiplicities)
        if k > cum[-1]:
            raise IncompleteSpectrumError(f"eigenvalue {k} lies above the completeness ceiling")
        return float(self.values[np.searchsorted(cum, k)])

    def scaled(self, c: float) -> "Spectrum":
        """Spectrum with every eigenvalue multiplied by ``c`` (metadata dropped)."""
        return Spectrum(
            self.dimension,
            self.values * c,
            self.multiplicities,
            self.completeness_ceiling * c,
            kind=EXPLICIT,
        )

    def with_laplacian_kinetic(self) -> "Spectrum":
        """Copy carrying T_k = lambda_k and sigma = 1, the V = 0 case of Assumption Sigma."""
        return Spectrum(
            self.dimension,
            self.values,
            self.multiplicities,
            self.completeness_ceiling,
            volume=self.volume,
            second_moment=self.second_moment,
            ground_ess_sup=self.ground_ess_sup,
            sigma=1.0,
            kinetic=self.values.copy(),
            kind=self.kind,
        )

    # -- serialization -------------------------------------------------
    def to_dict(self) -> dict:
        out = {
            "dimension": int(self.dimension),
            "levels": [[v, m] for v, m in self.levels],
            "completeness_ceiling": None if self.exhaustive else float(self.completeness_ceiling),
        }
        for name in ("volume", "second_moment", "ground_ess_sup", "sigma"):
            v = getattr(self, name)
            if v is not None:
                out[name] = float(v)
        if self.kinetic is not None:
            out["kinetic"] = [float(x) for x in self.kinetic]
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "Spectrum":
        try:
            dimension = int(data["dimension"])
            levels = data["levels"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed spectrum document: {exc}") from None
        values = [float(v) for v, _ in levels]
        mult = [int(m) for _, m in levels]
        ceiling = data.get("completeness_ceiling")
        ceiling = math.inf if ceiling is None else float(ceiling)
        kinetic = data.get("kinetic")
        kw = dict(
            volume=data.get("volume"),
            second_moment=data.get("second_moment"),
            ground_ess_sup=data.get("ground_ess_sup"),
            sigma=data.get("sigma"),
            kinetic=None if kinetic is None else np.asarray(kinetic, float),
        )
        kind = EXPLICIT
        if _looks_like_oscillator(dimension, values, mult, kw):
            kind = OSCILLATOR
        elif kw["volume"] is not None and kw["kinetic"] is None:
            kind = DIRICHLET
        return cls(dimension, values, mult, ceiling, kind=kind, **kw)

    @classmethod
    def from_json(cls, text: str) -> "Spectrum":
        return cls.from_dict(json.loads(text))


def _looks_like_oscillator(d, values, mult, kw):
    if kw["volume"] is not None or kw["sigma"] != 0.5 or kw["kinetic"] is None:
        return False
    for n, (v, m) in enumerate(zip(values, mult)):
        if v != 2 * n + d or m != math.comb(n + d - 1, d - 1):
            return False
    return np.allclose(kw["kinetic"], np.asarray(values) / 2, rtol=0, atol=0)


def merge_levels(raw: np.ndarray, rtol: float = MERGE_RTOL):
    """Group sorted eigenvalues into (values, multiplicities).

    Two values belong to the same level when their relative difference is at
    most ``rtol``; the level value is the first (smallest) member.
    """
    raw = np.sort(np.asarray(raw, dtype=float))
    values, mult = [], []
    for x in raw:
        if values and (x - values[-1]) <= rtol * abs(values[-1]):
            mult[-1] += 1
        else:
            values.append(float(x))
            mult.append(1)
    return np.array(values), np.array(mult, dtype=np.int64)


def _lattice_eigenvalues(lengths: Sequence[float], lambda_max: float):
    """pi^2 sum (n_i/a_i)^2 over n_i >= 1 at or below lambda_max."""
    base = [math.pi**2 / (float(a) ** 2) for a in lengths]
    out = []

    def rec(i, partial, owed):
        # owed: the smallest possible contribution of coordinates i..d-1
        if i == len(base):
            out.append(partial)
            return
        rest = owed - base[i]
        n = 1
        while partial + base[i] * n * n + rest <= lambda_max:
            rec(i + 1, partial + base[i] * n * n, rest)
            n += 1

    rec(0, 0.0, sum(base))
    return np.array(out)


def box_spectrum(lengths: Sequence[float], lambda_max: float) -> Spectrum:
    """Dirichlet Laplacian on the box prod (0, a_i)."""
    lengths = [float(a) for a in lengths]
    if not lengths or any(not a > 0 for a in lengths):
        raise DomainError("box lengths must be positive")
    d = len(lengths)
    lam1 = math.pi**2 * sum(1.0 / a**2 for a in lengths)
    if lambda_max < lam1:
        raise EmptySpectrumError(f"lambda_max {lambda_max} below the first eigenvalue {lam1}")
    values, mult = merge_levels(_lattice_eigenvalues(lengths, lambda_max))
    volume = float(np.prod(lengths))
    return Spectrum(
        d,
        values,
        mult,
        float(lambda_max),
        volume=volume,
        second_moment=volume * sum(a * a for a in lengths) / 12.0,
        ground_ess_sup=math.sqrt(2.0**d / volume),
        kind=DIRICHLET,
    )


def interval_spectrum(length: float, lambda_max: float) -> Spectrum:
    return box_spectrum([length], lambda_max)


def ball_spectrum(d: int, radius: float, lambda_max: float) -> Spectrum:
    """Dirichlet Laplacian on the ball of radius R in dimension 1, 2 or 3."""
    if d not in (1, 2, 3):
        raise DomainError(f"ball spectra are only available for d in (1, 2, 3), got {d}")
    if not radius > 0:
        raise DomainError("radius must be positive")
    R = float(radius)
    if d == 1:
        spec = box_spectrum([2.0 * R], lambda_max)
        return Spectrum(
            1,
            spec.values,
            spec.multiplicities,
            spec.completeness_ceiling,
            volume=2.0 * R,
            second_moment=2.0 * R**3 / 3.0,
            ground_ess_sup=1.0 / math.sqrt(R),
            kind=DIRICHLET,
        )
    x_max = R * math.sqrt(lambda_max)
    raw = []
    order = 0
    while True:
        nu = order if d == 2 else order + 0.5
        # j_{nu,1} > nu certifies that no higher order contributes.
        if nu >= x_max:
            break
        zeros = specfun.bessel_j_zeros_below(nu, x_max)
        if len(zeros) == 0:
            break
        if d == 2:
            m = 1 if order == 0 else 2
        else:
            m = 2 * order + 1
        for j in zeros:
            raw.extend([(j / R) ** 2] * m)
        order += 1
    if not raw:
        raise EmptySpectrumError(f"lambda_max {lambda_max} below the first eigenvalue")
    values, mult = merge_levels(np.array(raw))
    if d == 2:
        j01 = specfun.bessel_j_zero(0, 1)
        volume = math.pi * R**2
        second = math.pi * R**4 / 2.0
        ess = 1.0 / (math.sqrt(math.pi) * R * abs(specfun.bessel_j(1, j01)))
    else:
        volume = 4.0 * math.pi * R**3 / 3.0
        second = 4.0 * math.pi * R**5 / 5.0
        ess = math.sqrt(math.pi / (2.0 * R**3))
    return Spectrum(
        d,
        values,
        mult,
        float(lambda_max),
        volume=volume,
        second_moment=second,
        ground_ess_sup=ess,
        kind=DIRICHLET,
    )


def oscillator_spectrum(d: int, lambda_max: float) -> Spectrum:
    """Harmonic oscillator -Delta + |x|^2 on R^d: levels 2N + d."""
    if d < 1 or int(d) != d:
        raise DomainError("dimension must be a positive integer")
    if lambda_max < d:
        raise EmptySpectrumError(f"lambda_max {lambda_max} below the first eigenvalue {d}")
    n_max = int(math.floor((lambda_max - d) / 2.0))
    values = np.array([2.0 * n + d for n in range(n_max + 1)])
    mult = np.array([math.comb(n + d - 1, d - 1) for n in range(n_max + 1)])
    return Spectrum(
        int(d),
        values,
        mult,
        float(lambda_max),
        sigma=0.5,
        kinetic=values / 2.0,
        kind=OSCILLATOR,
    )


def explicit_spectrum(
    levels,
    dimension: int,
    *,
    exhaustive: bool = False,
    volume=None,
    second_moment=None,
    ground_ess_sup=None,
    sigma=None,
    kinetic=None,
    dirichlet: bool = False,
) -> Spectrum:
    """Spectrum from a list of (eigenvalue, multiplicity) pairs.

    The completeness ceiling is the largest supplied eigenvalue, or infinity
    when ``exhaustive`` declares the list to be the entire spectrum.
    """
    levels = list(levels)
    if not levels:
        raise EmptySpectrumError("no levels supplied")
    try:
        values = [float(v) for v, _ in levels]
        mult = [int(m) for _, m in levels]
    except (TypeError, ValueError) as exc:
        raise OrderingError(f"levels must be (value, multiplicity) pairs: {exc}") from None
    ceiling = math.inf if exhaustive else max(values)
    return Spectrum(
        int(dimension),
        values,
        mult,
        ceiling,
        volume=volume,
        second_moment=second_moment,
        ground_ess_sup=ground_ess_sup,
        sigma=sigma,
        kinetic=kinetic,
        kind=DIRICHLET if dirichlet else EXPLICIT,
    )


def reenumerate_box(lengths, lambda_max, scale=2.0):
    """Box eigenvalues <= lambda_max with every loop bound multiplied by ``scale``.

    Independent completeness check for :func:`box_spectrum`.
    """
    lengths = [float(a) for a in lengths]
    bounds = [int(scale * a * math.sqrt(lambda_max) / math.pi) + 2 for a in lengths]
    out = []
    for ns in itertools.product(*[range(1, b + 1) for b in bounds]):
        v = math.pi**2 * sum((n / a) ** 2 for n, a in zip(ns, lengths))
        if v <= lambda_max:
            out.append(v)
    return np.sort(np.array(out))
