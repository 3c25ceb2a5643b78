"""Exception hierarchy shared by all modules."""


class FormalJetsError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(FormalJetsError, ValueError):
    """Operands live in spaces of different dimensions."""


class ZeroSeriesError(FormalJetsError, ValueError):
    """An operation needs a nonzero series (to the known precision)."""


class TruncationError(FormalJetsError, ValueError):
    """A series is not known to a high enough degree for the request."""


class DomainError(FormalJetsError, ValueError):
    """Mathematically invalid input (bad fiber, inconsistent oracle, ...)."""


class CrossCheckError(FormalJetsError, AssertionError):
    """Two independent computation routes disagreed. Always a bug."""


class ParseError(FormalJetsError):
    """Malformed session text, with a 1-based source position."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
