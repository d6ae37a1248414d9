"""Exception types shared across the package."""


class TmcalcError(Exception):
    """Base class for all package errors."""


class PoleError(TmcalcError):
    """A function was evaluated at (or too close to) one of its poles."""


class DomainError(TmcalcError):
    """Arguments fall outside the supported parameter/argument region."""


class NonconvergenceError(TmcalcError):
    """An iteration or series failed to converge within its budget."""


class ToleranceError(TmcalcError):
    """Requested accuracy was not reached; carries the best estimate."""

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class OverflowSignal(TmcalcError):
    """Result overflows double precision; a scaled form is available."""

    def __init__(self, message, mantissa=None, exponent=None):
        super().__init__(message)
        self.mantissa = mantissa
        self.exponent = exponent
