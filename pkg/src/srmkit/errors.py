"""Exception types. Each maps onto one CLI exit code."""


class SrmError(ValueError):
    """Base class for all library errors."""

    exit_code = 1


class ValidationError(SrmError):
    """Malformed input: bad document, bad shapes, constraint violations."""

    exit_code = 2


class PreconditionError(SrmError):
    """Input is well formed but an operation's precondition does not hold."""

    exit_code = 3


class GUStructureError(SrmError):
    """The Gram matrix is not consistent with the claimed group labeling."""

    exit_code = 4

    def __init__(self, message, pair=None, deviation=None):
        super().__init__(message)
        self.pair = pair
        self.deviation = deviation
