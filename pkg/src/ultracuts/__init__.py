"""Exact computation with a nonarchimedean real closed field model.

The field elements are truncated generalized power series over the
rationals with a two-level exponent group.  On top of the arithmetic the
package provides the induced ultrametric with its balls, symbolic cuts of
the field, the orderings and places of the rational function field that
those cuts induce, Sturm-based real root isolation, and cut projections
along branches of plane curves.
"""

from .errors import (
    DimensionMismatch,
    DivisionByZero,
    IncompatibleModes,
    IndeterminateAtPrecision,
    NewtonNoConvergence,
    NonRepresentableRoot,
    ParseError,
    PoleAtRealization,
    PureElement,
    UltracutsError,
    UnknownIdentifier,
    Unrealizable,
)
from .series import (
    DEFAULT_PRECISION,
    INFINITY,
    Exponent,
    GroupMode,
    Series,
    format_series,
)

__all__ = [
    "DEFAULT_PRECISION",
    "INFINITY",
    "DimensionMismatch",
    "DivisionByZero",
    "Exponent",
    "GroupMode",
    "IncompatibleModes",
    "IndeterminateAtPrecision",
    "NewtonNoConvergence",
    "NonRepresentableRoot",
    "ParseError",
    "PoleAtRealization",
    "PureElement",
    "Series",
    "UltracutsError",
    "UnknownIdentifier",
    "Unrealizable",
    "format_series",
]
