"""Exception hierarchy shared across the package."""


class LamesusyError(Exception):
    """Base class for all package errors."""


class DomainError(LamesusyError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class NumericalError(LamesusyError, RuntimeError):
    """A numerical procedure failed to converge or lost validity."""


class IncompleteSpectrumError(NumericalError):
    """Fewer band edges were found than requested.

    Carries whatever was found so callers can report partial results.
    """

    def __init__(self, message, found=()):
        super().__init__(message)
        self.found = list(found)


class InvalidGroundStateError(NumericalError):
    """The state used to build a partner potential has a node."""
