"""Exception classes shared across the package."""


class InvsqError(Exception):
    """Base class for all package errors."""


class DomainError(InvsqError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class ConfigurationError(InvsqError, ValueError):
    """A run configuration or mesh specification is invalid."""


class NumericalError(InvsqError, RuntimeError):
    """A linear solve or eigensolve failed or did not converge."""


class RootNotFoundError(NumericalError):
    """A one-dimensional root search exhausted its interval without a root."""


class InsufficientDataError(InvsqError, ValueError):
    """Too few data points to perform the requested fit."""


class UnitarityError(NumericalError):
    """The solved amplitude violates Im(1/T) = -k beyond tolerance."""


class NoThresholdSolutionError(NumericalError):
    """No kernel eigenvalue close enough to 1 at zero energy."""
