"""The natural ultrametric, its balls, and the affine distance family.

The distance between field elements is ``d(a, b) = v(b - a)`` with values
in the exponent group (larger distance value = closer points).  A ball is
a center together with an upper cut set of the value group; every member
of a ball is one of its centers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .errors import DimensionMismatch
from .series import Exponent, GroupMode, RatLike, Series, exp_min


class GroupCutKind(Enum):
    AT_LEAST = "at-least"
    GREATER_THAN = "greater-than"
    ALL_POSITIVE = "all-positive"
    ALL = "all"
    SINGLETON = "singleton"


@dataclass(frozen=True)
class GroupCut:
    """Upper cut set of the value group, used as a ball radius.

    ``AT_LEAST(g)`` is ``{v >= g}``, ``GREATER_THAN(g)`` is ``{v > g}``,
    ``ALL_POSITIVE`` is ``{v > 0}``, ``ALL`` the whole group (ball = whole
    field) and ``SINGLETON`` the empty set (one-point ball, only the
    distance +inf qualifies).
    """

    kind: GroupCutKind
    gamma: Optional[Exponent] = None

    def __post_init__(self) -> None:
        needs_gamma = self.kind in (GroupCutKind.AT_LEAST, GroupCutKind.GREATER_THAN)
        if needs_gamma and self.gamma is None:
            raise ValueError(f"{self.kind.value} radius needs a boundary exponent")
        if not needs_gamma and self.gamma is not None:
            raise ValueError(f"{self.kind.value} radius takes no boundary exponent")

    @staticmethod
    def at_least(gamma: Union[Exponent, RatLike]) -> "GroupCut":
        return GroupCut(GroupCutKind.AT_LEAST, _as_exponent(gamma))

    @staticmethod
    def greater_than(gamma: Union[Exponent, RatLike]) -> "GroupCut":
        gamma = _as_exponent(gamma)
        if gamma.is_zero:
            return GroupCut(GroupCutKind.ALL_POSITIVE)
        return GroupCut(GroupCutKind.GREATER_THAN, gamma)

    @staticmethod
    def all_positive() -> "GroupCut":
        return GroupCut(GroupCutKind.ALL_POSITIVE)

    @staticmethod
    def whole_group() -> "GroupCut":
        return GroupCut(GroupCutKind.ALL)

    @staticmethod
    def singleton() -> "GroupCut":
        return GroupCut(GroupCutKind.SINGLETON)

    def _canonical(self) -> tuple[GroupCutKind, Optional[Exponent]]:
        # {v > 0} and ALL_POSITIVE denote the same subset of the group.
        if self.kind is GroupCutKind.GREATER_THAN and self.gamma.is_zero:
            return (GroupCutKind.ALL_POSITIVE, None)
        return (self.kind, self.gamma)

    def _bound(self) -> tuple[Exponent, bool]:
        """Boundary exponent and strictness for the two bounded kinds."""
        kind, gamma = self._canonical()
        if kind is GroupCutKind.AT_LEAST:
            return gamma, False
        if kind is GroupCutKind.GREATER_THAN:
            return gamma, True
        if kind is GroupCutKind.ALL_POSITIVE:
            return Exponent(0, 0), True
        raise ValueError(f"{kind.value} has no boundary")

    def contains(self, distance: Exponent, mode: GroupMode) -> bool:
        """Membership of a finite distance value in the radius set."""
        kind, _ = self._canonical()
        if kind is GroupCutKind.ALL:
            return True
        if kind is GroupCutKind.SINGLETON:
            return False
        gamma, strict = self._bound()
        cmp = distance.compare(gamma, mode)
        return cmp > 0 or (cmp == 0 and not strict)

    def same_set(self, other: "GroupCut", mode: GroupMode) -> bool:
        a, b = self._canonical(), other._canonical()
        if a[0] is not b[0]:
            return False
        if a[1] is None:
            return True
        return a[1].compare(b[1], mode) == 0

    def is_subset_of(self, other: "GroupCut", mode: GroupMode) -> bool:
        """Upper-set inclusion; any two radius sets are comparable."""
        a_kind, _ = self._canonical()
        b_kind, _ = other._canonical()
        if b_kind is GroupCutKind.ALL or a_kind is GroupCutKind.SINGLETON:
            return True
        if a_kind is GroupCutKind.ALL or b_kind is GroupCutKind.SINGLETON:
            return False
        ga, strict_a = self._bound()
        gb, strict_b = other._bound()
        cmp = ga.compare(gb, mode)
        # In a dense group {v >= g} strictly contains {v > g}.
        if cmp == 0:
            return strict_a or not strict_b
        return cmp > 0

    def doubled(self) -> "GroupCut":
        """The radius set scaled by 2, the image under squaring distances."""
        kind, gamma = self._canonical()
        if gamma is None:
            return GroupCut(kind)
        return GroupCut(kind, gamma.scaled(2))

    def __str__(self) -> str:
        kind, gamma = self._canonical()
        if kind is GroupCutKind.ALL_POSITIVE:
            return ">0"
        if kind is GroupCutKind.ALL:
            return "all"
        if kind is GroupCutKind.SINGLETON:
            return "point"
        op = ">=" if kind is GroupCutKind.AT_LEAST else ">"
        suffix = (
            str(gamma.base)
            if gamma.aux == 0
            else f"({gamma.base},{gamma.aux})"
        )
        return f"{op}{suffix}"


def _as_exponent(value: Union[Exponent, RatLike]) -> Exponent:
    if isinstance(value, Exponent):
        return value
    return Exponent(Fraction(value), Fraction(0))


@dataclass(frozen=True)
class Point:
    """Element of affine n-space over the series field."""

    coords: tuple[Series, ...]

    def __post_init__(self) -> None:
        if not self.coords:
            raise ValueError("a point needs at least one coordinate")
        mode = self.coords[0].mode
        if any(c.mode is not mode for c in self.coords):
            raise ValueError("point coordinates must share one group mode")

    @property
    def mode(self) -> GroupMode:
        return self.coords[0].mode

    @property
    def dim(self) -> int:
        return len(self.coords)


Center = Union[Series, Point]


@dataclass(frozen=True)
class Ball:
    """Ultrametric ball: a center and a radius cut of the value group."""

    center: Center
    radius: GroupCut

    @property
    def mode(self) -> GroupMode:
        return self.center.mode


def dist(a: Center, b: Center) -> Optional[Exponent]:
    """Ultrametric distance ``v(b - a)``; ``None`` encodes +inf (a = b)."""
    if isinstance(a, Point) or isinstance(b, Point):
        if not (isinstance(a, Point) and isinstance(b, Point)):
            raise DimensionMismatch("cannot mix field elements and points")
        if a.dim != b.dim:
            raise DimensionMismatch(f"dimensions {a.dim} and {b.dim}")
        best: Optional[Exponent] = None
        for x, y in zip(a.coords, b.coords):
            best = exp_min(best, dist(x, y), a.mode)
        return best
    return (b - a).valuation()


def dist_p(a: Point, b: Point, p: Union[int, float]) -> Optional[Exponent]:
    """The affine ultrametric ``d_p``; all choices of p agree with d_inf."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim}")
    if p is math.inf:
        return dist(a, b)
    if not isinstance(p, int) or p < 1:
        raise ValueError("p must be a positive integer or math.inf")
    total = Series.zero(a.mode)
    for x, y in zip(a.coords, b.coords):
        diff = y - x
        if diff.is_provably_zero:
            continue
        total = total + diff.abs().pow_int(p)
    v = total.valuation()
    return None if v is None else v.scaled(Fraction(1, p))


def ball_member(ball: Ball, q: Center) -> bool:
    """Membership: the distance to the center lies in the radius set or is +inf."""
    d = dist(ball.center, q)
    if d is None:
        return True
    return ball.radius.contains(d, ball.mode)


class BallRelation(Enum):
    DISJOINT = "disjoint"
    SUBSET = "first-inside-second"
    SUPERSET = "second-inside-first"
    EQUAL = "equal"


def balls_comparable(b1: Ball, b2: Ball) -> BallRelation:
    """Classify two balls by inclusion; intersecting balls are always nested."""
    mode = b1.mode
    d = dist(b1.center, b2.center)
    if d is None:
        in1 = in2 = True
    else:
        in1 = b1.radius.contains(d, mode)
        in2 = b2.radius.contains(d, mode)
    if not in1 and not in2:
        return BallRelation.DISJOINT
    if in1 and not in2:
        return BallRelation.SUPERSET
    if in2 and not in1:
        return BallRelation.SUBSET
    # Each center lies in the other ball, so both share all their centers
    # and inclusion is decided by the radius sets alone.
    if b1.radius.same_set(b2.radius, mode):
        return BallRelation.EQUAL
    if b1.radius.is_subset_of(b2.radius, mode):
        return BallRelation.SUBSET
    return BallRelation.SUPERSET


def ball_to_json(ball: Ball) -> dict:
    center = ball.center
    if isinstance(center, Point):
        center_json: object = {"point": [c.to_json() for c in center.coords]}
    else:
        center_json = center.to_json()
    return {"radius": str(ball.radius), "center": center_json}
