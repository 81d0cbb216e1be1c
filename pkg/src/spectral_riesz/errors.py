"""Exception hierarchy.

Errors split into two families so the CLI can map them onto exit codes:
configuration problems (missing metadata, out-of-range parameters) and
numerical problems (incomplete spectra, uncertifiable tails, root brackets).
"""


class SpectralError(Exception):
    """Base class for all package errors."""


class ConfigurationError(SpectralError, ValueError):
    """A request is malformed or the inputs lack required metadata."""


class DomainError(ConfigurationError):
    """An argument lies outside the domain of the operation."""


class MissingMetadataError(ConfigurationError):
    """A spectrum lacks geometry, kinetic data, ground-state sup or M_d."""


class OrderingError(ConfigurationError):
    """Eigenvalue levels are not strictly increasing or multiplicities invalid."""


class AssumptionViolation(ConfigurationError):
    """Kinetic energies violate T_k <= sigma * lambda_k."""


class NumericalError(SpectralError, ArithmeticError):
    """A numerical procedure could not produce a certified answer."""


class IncompleteSpectrumError(NumericalError):
    """Evaluation point lies above the completeness ceiling."""


class EmptySpectrumError(NumericalError):
    """Requested ceiling is below the first eigenvalue."""


class TailUncertifiableError(NumericalError):
    """Truncation tail cannot be bounded (or is too large to be useful)."""

    def __init__(self, message, threshold=None):
        super().__init__(message)
        self.threshold = threshold


class DivergenceError(NumericalError):
    """The requested integral or series diverges."""


class BracketingError(NumericalError):
    """Root bracketing failed."""


class ConvergenceError(NumericalError):
    """Iteration or quadrature did not converge."""
