"""Riesz means, heat traces and spectral zeta functions with certified tails,
together with the universal and geometric eigenvalue inequalities built on them."""

from .audits import (
    AuditReport,
    bound_audit,
    conjecture_scan,
    gamma_bound,
    monotonicity_audit,
    ratio_form_audit,
    remainder_audit,
    universal_audit,
)
from .bounds import BoundResult, lower_bound, upper_bound
from .errors import (
    ConfigurationError,
    DomainError,
    IncompleteSpectrumError,
    MissingMetadataError,
    NumericalError,
    SpectralError,
    TailUncertifiableError,
)
from .grid import GridSpec
from .spectra import (
    Spectrum,
    ball_spectrum,
    box_spectrum,
    explicit_spectrum,
    interval_spectrum,
    oscillator_spectrum,
)
from .spectral_functions import counting, heat_trace, riesz_mean, spectral_zeta
from .transforms import WeylPair

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "BoundResult",
    "ConfigurationError",
    "DomainError",
    "GridSpec",
    "IncompleteSpectrumError",
    "MissingMetadataError",
    "NumericalError",
    "SpectralError",
    "Spectrum",
    "TailUncertifiableError",
    "WeylPair",
    "ball_spectrum",
    "bound_audit",
    "box_spectrum",
    "conjecture_scan",
    "counting",
    "explicit_spectrum",
    "gamma_bound",
    "heat_trace",
    "interval_spectrum",
    "lower_bound",
    "monotonicity_audit",
    "oscillator_spectrum",
    "ratio_form_audit",
    "remainder_audit",
    "riesz_mean",
    "spectral_zeta",
    "universal_audit",
    "upper_bound",
]
