"""Symbolic cuts of the series field and the cut induced by an extension element.

Representable cuts are the two improper cuts, principal cuts immediately
beside a field element, and the two edge cuts of an ultrametric ball.  The
edge cut with side ``+`` has the ball's lower closure as its lower cut
set; side ``-`` puts the whole ball in the upper cut set.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import IncompatibleModes, IndeterminateAtPrecision, PureElement
from .series import Exponent, GroupMode, RatLike, Series
from .ultrametric import (
    Ball,
    BallRelation,
    GroupCut,
    ball_member,
    ball_to_json,
    balls_comparable,
)


class Side(Enum):
    PLUS = "+"
    MINUS = "-"

    def flipped(self) -> "Side":
        return Side.MINUS if self is Side.PLUS else Side.PLUS


class Position(Enum):
    BELOW = "below"
    ABOVE = "above"


@dataclass(frozen=True)
class Cut:
    """Base class; concrete cuts are the four subclasses below."""


@dataclass(frozen=True)
class MinusInfinityCut(Cut):
    def __str__(self) -> str:
        return "-inf"


@dataclass(frozen=True)
class PlusInfinityCut(Cut):
    def __str__(self) -> str:
        return "+inf"


@dataclass(frozen=True)
class PrincipalCut(Cut):
    """Cut immediately below (side -) or above (side +) a field element."""

    at: Series
    side: Side

    def __str__(self) -> str:
        return f"cut{self.side.value}({self.at})"


@dataclass(frozen=True)
class BallEdgeCut(Cut):
    """Cut at the lower (side -) or upper (side +) edge of a ball."""

    ball: Ball
    side: Side

    def __str__(self) -> str:
        return f"ball{self.side.value}[{self.ball.radius}]({self.ball.center})"


MINUS_INFINITY = MinusInfinityCut()
PLUS_INFINITY = PlusInfinityCut()


def cut_ball(cut: Cut) -> Ball:
    """The ball whose edge the cut is (singleton for principal, all for inf)."""
    if isinstance(cut, BallEdgeCut):
        return cut.ball
    if isinstance(cut, PrincipalCut):
        return Ball(cut.at, GroupCut.singleton())
    # The improper cuts are the two edges of the whole-field ball.
    return Ball(Series.zero(GroupMode.AUX_INFINITESIMAL), GroupCut.whole_group())


def cut_side(cut: Cut) -> Side:
    if isinstance(cut, (BallEdgeCut, PrincipalCut)):
        return cut.side
    return Side.PLUS if isinstance(cut, PlusInfinityCut) else Side.MINUS


def element_vs_cut(c: Union[Series, RatLike], cut: Cut) -> Position:
    """Whether a field element lies in the lower or upper cut set."""
    if isinstance(cut, MinusInfinityCut):
        return Position.ABOVE
    if isinstance(cut, PlusInfinityCut):
        return Position.BELOW
    if isinstance(cut, PrincipalCut):
        c = _coerce_to(c, cut.at)
        cmp = c.compare(cut.at)
        below = cmp < 0 or (cmp == 0 and cut.side is Side.PLUS)
        return Position.BELOW if below else Position.ABOVE
    ball = cut.ball
    center = ball.center
    if not isinstance(center, Series):
        raise IncompatibleModes("field elements compare only against field balls")
    c = _coerce_to(c, center)
    inside = ball_member(ball, c)
    if cut.side is Side.PLUS:
        below = inside or c.compare(center) < 0
    else:
        below = (not inside) and c.compare(center) < 0
    return Position.BELOW if below else Position.ABOVE


def _coerce_to(c: Union[Series, RatLike], reference: Series) -> Series:
    if not isinstance(c, Series):
        return Series.constant(c, reference.mode)
    return c.as_mode(reference.mode)


def cut_equal(c1: Cut, c2: Cut) -> bool:
    """Equality of cut sets: same side of one and the same ball."""
    if cut_side(c1) is not cut_side(c2):
        return False
    return balls_comparable(cut_ball(c1), cut_ball(c2)) is BallRelation.EQUAL


def induced_cut(w: Series) -> Cut:
    """The cut of the base field determined by a two-level extension element.

    Splitting ``w = c + s*eps^(q,r)*(1 + higher)`` at its first mixed term,
    ``w`` sits at an edge of the ball around ``c`` whose radius boundary is
    ``q``: just inside (r > 0, boundary excluded) or just outside
    (r < 0, boundary included), on the side given by the sign of ``s``.
    """
    if w.mode is not GroupMode.AUX_INFINITESIMAL:
        raise IncompatibleModes(
            "only aux-infinitesimal elements induce cuts of the base field"
        )
    pure = [(e, c) for e, c in w.terms if e.is_pure]
    mixed = [(e, c) for e, c in w.terms if not e.is_pure]
    if not mixed:
        if w.is_exact:
            raise PureElement(
                "a base-field element bounds two cuts; choose a principal side"
            )
        raise IndeterminateAtPrecision(
            f"no mixed term known below {w.error_order}"
        )
    (q_exp, s) = mixed[0]
    # Terms hidden beyond w's error order come after the first mixed term,
    # so their distance to the stored pure part lies inside the ball radius:
    # the truncated pure part is an exact representative of the center.
    center = Series.make(w.mode, pure, None)
    boundary = Exponent(q_exp.base, 0)
    if q_exp.aux > 0:
        radius = GroupCut.greater_than(boundary)
    else:
        radius = GroupCut.at_least(boundary)
    side = Side.PLUS if s > 0 else Side.MINUS
    return BallEdgeCut(Ball(center, radius), side)


def cut_to_json(cut: Cut) -> dict:
    if isinstance(cut, MinusInfinityCut):
        return {"kind": "minus-infinity"}
    if isinstance(cut, PlusInfinityCut):
        return {"kind": "plus-infinity"}
    if isinstance(cut, PrincipalCut):
        return {"kind": "principal", "side": cut.side.value, "at": cut.at.to_json()}
    return {
        "kind": "ball-edge",
        "side": cut.side.value,
        "ball": ball_to_json(cut.ball),
    }
