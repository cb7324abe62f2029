"""Orderings of the rational function field induced by cuts of the base field.

Each representable cut is realized by an explicit evaluation point for
``x`` in the two-level extension.  Signs of rational functions with
respect to the induced ordering, the value of the associated place, the
two-element value-group index and the same-place criterion are all plain
series computations against that point.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Union

from .cuts import (
    BallEdgeCut,
    Cut,
    MinusInfinityCut,
    PlusInfinityCut,
    PrincipalCut,
    Side,
    cut_ball,
)
from .errors import PoleAtRealization, Unrealizable
from .poly import SeriesPoly
from .series import (
    INFINITY,
    Exponent,
    GroupMode,
    RatLike,
    Series,
    _InfinityType,
)
from .ultrametric import BallRelation, GroupCut, GroupCutKind, balls_comparable

PlaceValue = Union[Fraction, _InfinityType]


@dataclass(frozen=True)
class RationalFn:
    """Quotient of polynomials in one variable over the base field."""

    num: SeriesPoly
    den: SeriesPoly

    def __post_init__(self) -> None:
        if self.den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")

    @staticmethod
    def from_poly(num: SeriesPoly, den: Optional[SeriesPoly] = None) -> "RationalFn":
        if den is None:
            den = SeriesPoly.constant(1, num.mode)
        return RationalFn(num, den)

    @staticmethod
    def x(mode: GroupMode = GroupMode.AUX_INFINITESIMAL) -> "RationalFn":
        return RationalFn.from_poly(SeriesPoly.x(mode))

    @staticmethod
    def constant(value: Union[Series, RatLike], mode: GroupMode = GroupMode.AUX_INFINITESIMAL) -> "RationalFn":
        return RationalFn.from_poly(SeriesPoly.constant(value, mode))

    @property
    def mode(self) -> GroupMode:
        return self.num.mode if not self.num.is_zero else self.den.mode

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __add__(self, other: Union["RationalFn", RatLike]) -> "RationalFn":
        other = self._coerce(other)
        return RationalFn(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> "RationalFn":
        return RationalFn(-self.num, self.den)

    def __sub__(self, other: Union["RationalFn", RatLike]) -> "RationalFn":
        return self + (-self._coerce(other))

    def __mul__(self, other: Union["RationalFn", RatLike]) -> "RationalFn":
        other = self._coerce(other)
        return RationalFn(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: Union["RationalFn", RatLike]) -> "RationalFn":
        other = self._coerce(other)
        if other.num.is_zero:
            raise ZeroDivisionError("division by the zero function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def pow_int(self, k: int) -> "RationalFn":
        if k < 0:
            return RationalFn.from_poly(self.den, self.num).pow_int(-k)
        result = RationalFn.constant(1, self.mode)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self) -> "RationalFn":
        return RationalFn(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def _coerce(self, other: Union["RationalFn", RatLike]) -> "RationalFn":
        if isinstance(other, RationalFn):
            return other
        return RationalFn.constant(other, self.mode)

    def __str__(self) -> str:
        if self.den.degree == 0 and self.den.coefficient(0) == Series.constant(1, self.mode):
            return str(self.num)
        return f"({self.num}) / ({self.den})"


@dataclass(frozen=True)
class Realization:
    """A cut together with the extension point realizing it as a value of x."""

    cut: Cut
    point: Series
    mode: GroupMode


def realize(cut: Cut) -> Realization:
    """Evaluation point whose induced cut is the given one.

    Principal and improper cuts use the aux-dominant mode (the auxiliary
    infinitesimal sits beyond every base-field scale); ball edges use the
    aux-infinitesimal mode with the point adjacent to the radius boundary.
    """
    if isinstance(cut, PlusInfinityCut):
        point = Series.monomial(1, Exponent(0, -1), GroupMode.AUX_DOMINANT)
        return Realization(cut, point, GroupMode.AUX_DOMINANT)
    if isinstance(cut, MinusInfinityCut):
        point = Series.monomial(-1, Exponent(0, -1), GroupMode.AUX_DOMINANT)
        return Realization(cut, point, GroupMode.AUX_DOMINANT)
    if isinstance(cut, PrincipalCut):
        return _realize_adjacent(cut, cut.at, cut.side)
    if isinstance(cut, BallEdgeCut):
        ball = cut.ball
        if not isinstance(ball.center, Series):
            raise Unrealizable("affine balls do not realize cuts of the line")
        kind = ball.radius.kind
        if kind is GroupCutKind.ALL:
            raise Unrealizable("the whole-field ball has no adjacent point")
        if kind is GroupCutKind.SINGLETON:
            return _realize_adjacent(cut, ball.center, cut.side)
        if kind is GroupCutKind.AT_LEAST:
            step = Exponent(ball.radius.gamma.base, Fraction(-1))
        elif kind is GroupCutKind.GREATER_THAN:
            step = Exponent(ball.radius.gamma.base, Fraction(1))
        else:  # ALL_POSITIVE
            step = Exponent(Fraction(0), Fraction(1))
        sign = 1 if cut.side is Side.PLUS else -1
        center = ball.center.as_mode(GroupMode.AUX_INFINITESIMAL)
        point = center + Series.monomial(sign, step, GroupMode.AUX_INFINITESIMAL)
        return Realization(cut, point, GroupMode.AUX_INFINITESIMAL)
    raise Unrealizable(f"unsupported cut {cut!r}")


def _realize_adjacent(cut: Cut, at: Series, side: Side) -> Realization:
    sign = 1 if side is Side.PLUS else -1
    base = at.as_mode(GroupMode.AUX_DOMINANT)
    point = base + Series.monomial(sign, Exponent(0, 1), GroupMode.AUX_DOMINANT)
    return Realization(cut, point, GroupMode.AUX_DOMINANT)


def _evaluate_parts(cut: Cut, f: RationalFn) -> tuple[Series, Series]:
    point = realize(cut).point
    n = f.num.evaluate(point)
    d = f.den.evaluate(point)
    if d.is_provably_zero:
        raise PoleAtRealization(
            "denominator vanished exactly at a realization point"
        )
    return n, d


def ordering_sign(cut: Cut, f: RationalFn) -> int:
    """Sign of ``f`` in the ordering induced by the cut; 0 only for f = 0."""
    if f.is_zero:
        return 0
    n, d = _evaluate_parts(cut, f)
    return n.sign() * d.sign()


class PsiClass(Enum):
    LOWER = "lower"
    UPPER = "upper"


def psi(cut: Cut) -> Callable[[Union[Series, RatLike]], PsiClass]:
    """Classifier a -> Lower/Upper given by the sign of ``x - a`` at the cut."""
    x = RationalFn.x()

    def classify(a: Union[Series, RatLike]) -> PsiClass:
        a_series = a if isinstance(a, Series) else Series.constant(a)
        shifted = x - RationalFn.constant(a_series.as_mode(GroupMode.AUX_INFINITESIMAL))
        return PsiClass.LOWER if ordering_sign(cut, shifted) > 0 else PsiClass.UPPER

    return classify


def place_value(cut: Cut, f: RationalFn) -> PlaceValue:
    """Value of ``f`` under the place of the induced ordering.

    The standard part of ``num/den`` at the realization point depends only
    on the two leading terms: equal valuations give the ratio of leading
    coefficients, otherwise the value is 0 or infinity.
    """
    if f.is_zero:
        return Fraction(0)
    n, d = _evaluate_parts(cut, f)
    vn, vd = n.valuation(), d.valuation()
    mode = n.mode
    cmp = vn.compare(vd, mode)
    if cmp > 0:
        return Fraction(0)
    if cmp < 0:
        return INFINITY
    return n.terms[0][1] / d.terms[0][1]


def classify_index(cut: Cut) -> int:
    """Index of doubling in the value group of the induced ordering.

    Every representable cut is an edge of an ultrametric ball (principal
    cuts of singletons, improper cuts of the whole field), and ball cuts
    have index 2.  The index-1 case would be a non-ball cut, which has no
    finite description in this model, so the value 1 is never returned.
    """
    _ = cut_ball(cut)
    return 2


def place_equal(c1: Cut, c2: Cut) -> bool:
    """Whether two cuts induce one place: they are edges of a single ball."""
    return balls_comparable(cut_ball(c1), cut_ball(c2)) is BallRelation.EQUAL
