"""Exception types raised across the package."""

from __future__ import annotations


class PlateGapError(Exception):
    """Base class for all package errors."""


class SmoothnessError(PlateGapError, ValueError):
    """Derivatives were requested beyond what a profile provides, or at a kink."""


class QuadratureError(PlateGapError, ArithmeticError):
    """Adaptive quadrature ran out of panel budget.

    The best available estimate is kept on ``estimate`` together with the
    error estimate ``error``.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class HypothesisError(PlateGapError, ValueError):
    """Parameters violate the hypotheses of the inequality being checked."""


class DegenerateProfileError(PlateGapError, ZeroDivisionError):
    """A Rayleigh quotient denominator vanished."""


class BracketError(PlateGapError, RuntimeError):
    """A root bracket could not be located."""


class EigenSolveError(PlateGapError, RuntimeError):
    """The generalized eigensolver failed or produced inconsistent pairs."""

    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = list(log or [])
