"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class CharMomentError(Exception):
    """Base class for library errors."""


class DomainError(CharMomentError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ParameterError(CharMomentError, ValueError):
    """A method parameter violates the validity window of a representation."""


class CapabilityError(CharMomentError):
    """A model cannot supply the requested derivative order."""


class ConvergenceError(CharMomentError, ArithmeticError):
    """Numerical quadrature or acceleration did not converge."""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result
