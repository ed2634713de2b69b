"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class UndefinedStatisticError(ValueError):
    """A photon-counting statistic is undefined (vacuum has no mean photon number)."""


class NumericalConsistencyError(ArithmeticError):
    """An internal cross-check failed, e.g. a Wigner value with a large imaginary residue."""


class SeriesOverflowError(ArithmeticError):
    """A series evaluation produced a non-finite intermediate or result."""


class ConvergenceError(RuntimeError):
    """Grid refinement exhausted its budget without stabilizing.

    Carries the last two successive estimates so callers can inspect how far
    apart the refinement levels still were.
    """

    def __init__(self, message, estimates=None):
        super().__init__(message)
        self.estimates = estimates


class ConfigError(ValueError):
    """A configuration file or CLI argument failed validation.

    ``key`` holds the dotted path of the offending entry when known.
    """

    def __init__(self, message, key=None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key


class TruncationWarning(UserWarning):
    """The requested Fock cutoff is below the recommended one for the state."""
