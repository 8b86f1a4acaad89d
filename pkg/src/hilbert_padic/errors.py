"""Exception hierarchy shared by every module."""

from __future__ import annotations


class HilbertPadicError(Exception):
    """Base class for library errors."""


class InputError(HilbertPadicError):
    """Malformed or out-of-range input data."""


class PrecisionExhausted(HilbertPadicError):
    """A valuation or comparison is not determined at the working precision."""


class NotAUnit(HilbertPadicError):
    """Inversion requested for a series of positive valuation."""


class HypothesisViolated(HilbertPadicError):
    """The input does not satisfy the hypotheses of the requested construction."""


class NonIntegralExponent(HilbertPadicError):
    """A u-exponent required by a construction is not an integer."""


class IterationCap(HilbertPadicError):
    """A fixed-point iteration did not stabilise within its cap."""


class DegenerateInput(HilbertPadicError):
    """Newton polygon input with too few usable points."""


class UnsupportedKind(HilbertPadicError):
    """Unknown model kind requested."""


class TooLarge(HilbertPadicError):
    """Enumeration would exceed the configured size limit."""


class MissingData(HilbertPadicError):
    """A valuation point lacks data needed by the operation."""


class UndeterminedDynamics(HilbertPadicError):
    """No pointwise image law is available at this valuation point."""


class TooSingular(HilbertPadicError):
    """Hodge heights are not determined by the valuations alone."""


class NormalizationViolated(HilbertPadicError):
    """Weights are not ordered as the bound ledger requires."""


class NotSolvable(HilbertPadicError):
    """A linear system over the window ring has no solution of the required form."""


class StabilityFailure(HilbertPadicError):
    """A lattice expected to be Frobenius-stable is not."""
