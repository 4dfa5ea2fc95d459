"""Exception types raised across the package."""


class GaussrateError(Exception):
    """Base class for all package errors."""


class SizeError(GaussrateError, ValueError):
    """Matrix or vector dimensions are outside what an operation supports."""


class DomainError(GaussrateError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InvalidChannelError(GaussrateError, ValueError):
    """A (T, N, d) triple is not a completely positive trace-preserving map."""


class UnsupportedRegimeError(GaussrateError, ValueError):
    """The requested quantity is not defined for this channel (e.g. tau = 1)."""


class CompletionError(GaussrateError, ArithmeticError):
    """Numerical construction failed to meet its residual tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
