"""Exception types raised across the package."""


class NLWError(Exception):
    """Base class for all package errors."""


class DomainError(NLWError, ValueError):
    """An argument lies outside the domain of the operation."""


class ResolutionError(NLWError, ValueError):
    """The radial grid is too coarse for the requested spectral content."""


class MeasureUndefinedError(NLWError, ValueError):
    """Gibbs measure requested for a power where it does not exist (alpha >= 4)."""


class ParameterError(NLWError, ValueError):
    """Exponents or indices violate an admissibility condition."""


class IntegrationError(NLWError, RuntimeError):
    """Time integration left the safe range (blow-up guard tripped)."""


class NoConvergenceError(NLWError, RuntimeError):
    """Picard iteration failed to contract.

    Attributes
    ----------
    increments : list of float
        Sup-in-time increments of successive iterates.
    """

    def __init__(self, message, increments=()):
        super().__init__(message)
        self.increments = list(increments)


class ConfigError(NLWError, ValueError):
    """Invalid run configuration (unknown key, bad value)."""
