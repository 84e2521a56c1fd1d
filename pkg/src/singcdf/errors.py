"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SingCdfError(Exception):
    """Base class for all errors raised by :mod:`singcdf`."""


class ValidationError(SingCdfError, ValueError):
    """A model description violates one of its invariants."""


class NonStochasticRow(ValidationError):
    pass


class NotInvariant(ValidationError):
    def __init__(self, message: str, max_residual: float, witness=None):
        super().__init__(message)
        self.max_residual = max_residual
        self.witness = witness


class InfiniteMean(ValidationError):
    pass


class BadShape(ValidationError):
    pass


class PrefixTooLong(SingCdfError):
    pass


class NoConvergence(SingCdfError):
    """Cylinder mass along the digit ray did not fall below the tolerance."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class Inconclusive(SingCdfError):
    pass


class ZeroDenominator(SingCdfError, ZeroDivisionError):
    pass


class DomainError(SingCdfError, ValueError):
    pass


class QuadratureFailure(SingCdfError):
    pass
