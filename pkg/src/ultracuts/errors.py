"""Exception types shared by all ultracuts modules."""

from __future__ import annotations


class UltracutsError(Exception):
    """Base class for every library-specific failure."""


class IncompatibleModes(UltracutsError):
    """Values from differently ordered exponent groups were mixed."""


class DivisionByZero(UltracutsError):
    """Division by a provably zero series."""


class IndeterminateAtPrecision(UltracutsError):
    """The stored terms do not determine the requested answer.

    Raised instead of guessing so that every delivered sign, valuation and
    comparison is exact.  Callers can retry with a finer error order.
    """


class NonRepresentableRoot(UltracutsError):
    """A root computation would leave the rational coefficient domain."""


class DimensionMismatch(UltracutsError):
    """Points of different affine dimensions were combined."""


class PureElement(UltracutsError):
    """A base-field element bounds two cuts; the caller must pick a side."""


class Unrealizable(UltracutsError):
    """The cut has no realization point in the two-level extension."""


class PoleAtRealization(UltracutsError):
    """A denominator vanished exactly at a realization point.

    Cannot happen for a nonzero denominator polynomial, so this signals a
    bug in the caller rather than a precision problem.
    """


class NewtonNoConvergence(UltracutsError):
    """The Newton seed violates the simple-root condition."""


class ParseError(UltracutsError):
    """Expression text could not be parsed."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownIdentifier(UltracutsError):
    """An expression used a name that is not bound in the environment."""
