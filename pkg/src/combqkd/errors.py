"""Exception hierarchy shared by all combqkd modules."""


class CombQKDError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CombQKDError, ValueError):
    """An input is outside the domain an operation is defined on."""


class NonPhysical(CombQKDError):
    """A covariance matrix violates the uncertainty principle beyond tolerance."""


class AboveThreshold(CombQKDError):
    """Parametric gain at or above the total cavity loss rate; no steady state."""


class InfeasibleSpacing(CombQKDError):
    """Comb spacing below the waveshaper's minimum demultiplexing interval."""


class AllocationFailed(CombQKDError):
    """Exhaustive assignment search found no conflict-free comb allocation."""


class ConfigError(CombQKDError):
    """A run configuration failed to parse or validate."""
