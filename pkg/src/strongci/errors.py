"""Exception hierarchy shared by all strongci modules."""


class StrongCIError(Exception):
    """Base class for every error raised by this package."""


class InvalidConfigError(StrongCIError, ValueError):
    """A configuration or parameter value is out of its allowed range."""


class InvalidObservationError(StrongCIError, ValueError):
    """An observation fed into a stream is not a finite real number."""


class InvalidInputError(StrongCIError, ValueError):
    """A function argument is malformed (non-finite, empty grid, ...)."""


class UndefinedEstimateError(StrongCIError, ArithmeticError):
    """The least-squares estimate is undefined because gamma0 == 0."""


class RejectedModelError(StrongCIError):
    """The running intersection is empty, so the AR(1) model was rejected."""


class DegenerateStatisticError(StrongCIError, ArithmeticError):
    """A simulated Brownian functional has a zero denominator."""


class ParseError(StrongCIError, ValueError):
    """An input file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
