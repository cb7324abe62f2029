"""Exact arithmetic for truncated generalized power series over the rationals.

A :class:`Series` is a finite, ordered sum of rational multiples of
``eps^b * t^a`` plus an optional error order, where ``eps`` is the base
infinitesimal and ``t`` an auxiliary one.  Exponents live in the group
``Q x Q`` ordered lexicographically; the :class:`GroupMode` says which
component is compared first, i.e. whether ``t`` is infinitesimal relative
to every power of ``eps`` or dominates them all.

All operations are exact on the stored terms.  Precision is explicit: a
finite ``error_order`` means "terms at or beyond this exponent are
unknown", and queries that the stored terms cannot decide raise
:class:`IndeterminateAtPrecision` instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import (
    DivisionByZero,
    IncompatibleModes,
    IndeterminateAtPrecision,
    NonRepresentableRoot,
)

RatLike = Union[int, Fraction]


class GroupMode(Enum):
    """How the two exponent components are ordered lexicographically."""

    #: ``t`` is infinitesimal relative to the eps-scale: base compared first.
    AUX_INFINITESIMAL = "aux-infinitesimal"
    #: ``t`` dominates every power of eps: aux compared first.
    AUX_DOMINANT = "aux-dominant"


class _InfinityType:
    """Marker for an infinite standard part (image of the place at a pole)."""

    _instance: Optional["_InfinityType"] = None

    def __new__(cls) -> "_InfinityType":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"


INFINITY = _InfinityType()


@dataclass(frozen=True)
class Exponent:
    """Element of the two-level exponent group ``Q x Q``."""

    base: Fraction
    aux: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", Fraction(self.base))
        object.__setattr__(self, "aux", Fraction(self.aux))

    def key(self, mode: GroupMode) -> tuple[Fraction, Fraction]:
        """Sort key realizing the mode's lexicographic order."""
        if mode is GroupMode.AUX_INFINITESIMAL:
            return (self.base, self.aux)
        return (self.aux, self.base)

    def compare(self, other: "Exponent", mode: GroupMode) -> int:
        a, b = self.key(mode), other.key(mode)
        return (a > b) - (a < b)

    def sign(self, mode: GroupMode) -> int:
        """Positive iff the first-compared nonzero component is positive."""
        return self.compare(ZERO_EXPONENT, mode)

    @property
    def is_zero(self) -> bool:
        return self.base == 0 and self.aux == 0

    @property
    def is_pure(self) -> bool:
        """True when the aux component vanishes (exponent of a base-field element)."""
        return self.aux == 0

    def __add__(self, other: "Exponent") -> "Exponent":
        return Exponent(self.base + other.base, self.aux + other.aux)

    def __sub__(self, other: "Exponent") -> "Exponent":
        return Exponent(self.base - other.base, self.aux - other.aux)

    def __neg__(self) -> "Exponent":
        return Exponent(-self.base, -self.aux)

    def scaled(self, factor: RatLike) -> "Exponent":
        factor = Fraction(factor)
        return Exponent(self.base * factor, self.aux * factor)

    def __str__(self) -> str:
        return f"({self.base},{self.aux})"


ZERO_EXPONENT = Exponent(Fraction(0), Fraction(0))

#: Absolute truncation used when an exact input forces an infinite expansion.
DEFAULT_PRECISION = Exponent(Fraction(8), Fraction(0))


def exp_min(a: Optional[Exponent], b: Optional[Exponent], mode: GroupMode) -> Optional[Exponent]:
    """Minimum of two exponents where ``None`` stands for plus infinity."""
    if a is None:
        return b
    if b is None:
        return a
    return a if a.compare(b, mode) <= 0 else b


def _eo_sum(a: Optional[Exponent], b: Optional[Exponent]) -> Optional[Exponent]:
    if a is None or b is None:
        return None
    return a + b


@dataclass(frozen=True)
class Series:
    """Truncated generalized power series; use :meth:`make` to construct."""

    mode: GroupMode
    terms: tuple[tuple[Exponent, Fraction], ...]
    error_order: Optional[Exponent] = None  # None means exact

    # -- construction -------------------------------------------------

    @staticmethod
    def make(
        mode: GroupMode,
        terms: Iterable[tuple[Exponent, RatLike]] = (),
        error_order: Optional[Exponent] = None,
    ) -> "Series":
        """Normalize: merge exponents, drop zeros and terms at/beyond the error order."""
        merged: dict[Exponent, Fraction] = {}
        for e, c in terms:
            c = Fraction(c)
            if e in merged:
                merged[e] += c
            else:
                merged[e] = c
        items = [(e, c) for e, c in merged.items() if c != 0]
        if error_order is not None:
            items = [(e, c) for e, c in items if e.compare(error_order, mode) < 0]
        items.sort(key=lambda item: item[0].key(mode))
        return Series(mode, tuple(items), error_order)

    @staticmethod
    def constant(value: RatLike, mode: GroupMode = GroupMode.AUX_INFINITESIMAL) -> "Series":
        return Series.make(mode, [(ZERO_EXPONENT, Fraction(value))])

    @staticmethod
    def monomial(
        coeff: RatLike,
        exponent: Exponent,
        mode: GroupMode = GroupMode.AUX_INFINITESIMAL,
    ) -> "Series":
        return Series.make(mode, [(exponent, Fraction(coeff))])

    @staticmethod
    def zero(mode: GroupMode = GroupMode.AUX_INFINITESIMAL) -> "Series":
        return Series.make(mode, [])

    @staticmethod
    def eps(mode: GroupMode = GroupMode.AUX_INFINITESIMAL, power: RatLike = 1) -> "Series":
        """The base infinitesimal ``eps`` (or a rational power of it)."""
        return Series.monomial(1, Exponent(Fraction(power), Fraction(0)), mode)

    @staticmethod
    def aux(mode: GroupMode, power: RatLike = 1) -> "Series":
        """The auxiliary infinitesimal ``t`` (or a rational power of it)."""
        return Series.monomial(1, Exponent(Fraction(0), Fraction(power)), mode)

    # -- structure queries --------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.error_order is None

    @property
    def is_provably_zero(self) -> bool:
        return not self.terms and self.is_exact

    @property
    def is_pure(self) -> bool:
        """True when every stored exponent has aux component zero."""
        return all(e.is_pure for e, _ in self.terms)

    def leading(self) -> tuple[Exponent, Fraction]:
        """First (lowest) term; raises when no term is known."""
        if self.terms:
            return self.terms[0]
        if self.is_exact:
            raise DivisionByZero("series is exactly zero")
        raise IndeterminateAtPrecision(
            f"no term known below the error order {self.error_order}"
        )

    def valuation(self) -> Optional[Exponent]:
        """Leading exponent; ``None`` encodes the valuation of exact zero (+inf)."""
        if self.terms:
            return self.terms[0][0]
        if self.is_exact:
            return None
        raise IndeterminateAtPrecision(
            f"valuation not determined below {self.error_order}"
        )

    def value_lower_bound(self) -> Optional[Exponent]:
        """Provable lower bound on the valuation; ``None`` means plus infinity."""
        if self.terms:
            return self.terms[0][0]
        return self.error_order  # None for exact zero

    def sign(self) -> int:
        if self.terms:
            c = self.terms[0][1]
            return 1 if c > 0 else -1
        if self.is_exact:
            return 0
        raise IndeterminateAtPrecision(
            f"sign not determined below {self.error_order}"
        )

    def standard_part(self) -> Union[Fraction, _InfinityType]:
        """Image under the place that kills infinitesimals, or INFINITY."""
        v = self.valuation()
        if v is None:
            return Fraction(0)
        s = v.sign(self.mode)
        if s > 0:
            return Fraction(0)
        if s < 0:
            return INFINITY
        return self.terms[0][1]

    def coefficient(self, exponent: Exponent) -> Fraction:
        for e, c in self.terms:
            if e == exponent:
                return c
        return Fraction(0)

    # -- mode handling -------------------------------------------------

    def _require_same_mode(self, other: "Series") -> None:
        if self.mode is not other.mode:
            raise IncompatibleModes(f"{self.mode.value} vs {other.mode.value}")

    def as_mode(self, mode: GroupMode) -> "Series":
        """Relabel a pure (aux-free) series into another mode.

        Sound because the two lexicographic orders agree on aux-free
        exponents.
        """
        if mode is self.mode:
            return self
        if not self.is_pure or (self.error_order is not None and not self.error_order.is_pure):
            raise IncompatibleModes(
                "only series with aux-free exponents can change mode"
            )
        return Series(mode, self.terms, self.error_order)

    def _coerce(self, value: Union["Series", RatLike]) -> "Series":
        if isinstance(value, Series):
            return value
        return Series.constant(value, self.mode)

    # -- ring operations ----------------------------------------------

    def with_error_order(self, error_order: Optional[Exponent]) -> "Series":
        """Clamp to the finer of the existing and the given error order."""
        eo = exp_min(self.error_order, error_order, self.mode)
        if eo == self.error_order:
            return self
        return Series.make(self.mode, self.terms, eo)

    def __add__(self, other: Union["Series", RatLike]) -> "Series":
        other = self._coerce(other)
        self._require_same_mode(other)
        eo = exp_min(self.error_order, other.error_order, self.mode)
        return Series.make(self.mode, self.terms + other.terms, eo)

    def __radd__(self, other: RatLike) -> "Series":
        return self.__add__(other)

    def __neg__(self) -> "Series":
        return Series(self.mode, tuple((e, -c) for e, c in self.terms), self.error_order)

    def __sub__(self, other: Union["Series", RatLike]) -> "Series":
        return self.__add__(-self._coerce(other))

    def __rsub__(self, other: RatLike) -> "Series":
        return (-self).__add__(other)

    def __mul__(self, other: Union["Series", RatLike]) -> "Series":
        other = self._coerce(other)
        self._require_same_mode(other)
        # Pessimistic propagation: a*O(eo_b), b*O(eo_a) and O(eo_a)*O(eo_b).
        candidates = [
            _eo_sum(self.error_order, other.value_lower_bound()),
            _eo_sum(other.error_order, self.value_lower_bound()),
            _eo_sum(self.error_order, other.error_order),
        ]
        eo: Optional[Exponent] = None
        for cand in candidates:
            eo = exp_min(eo, cand, self.mode)
        products = [
            (ea + eb, ca * cb)
            for ea, ca in self.terms
            for eb, cb in other.terms
        ]
        return Series.make(self.mode, products, eo)

    def __rmul__(self, other: RatLike) -> "Series":
        return self.__mul__(other)

    def scale_monomial(self, coeff: RatLike, exponent: Exponent) -> "Series":
        """Exact multiplication by ``coeff * eps^.. t^..`` (no error inflation)."""
        coeff = Fraction(coeff)
        if coeff == 0:
            raise ValueError("zero monomial factor")
        terms = tuple((e + exponent, c * coeff) for e, c in self.terms)
        eo = None if self.error_order is None else self.error_order + exponent
        return Series(self.mode, terms, eo)

    def _expansion_target(
        self, increment: Exponent, target: Optional[Exponent], cap: Optional[Exponent]
    ) -> Exponent:
        """Pick the truncation order of a geometric/binomial expansion.

        ``target`` is the order dictated by the inputs' own error orders
        (None when the inputs are exact); ``cap`` is the requested absolute
        truncation for the exact case.  The expansion advances by
        ``increment`` per step, so the chosen order must be reachable in the
        lexicographic order.
        """
        mode = self.mode
        goal = target
        if goal is None:
            goal = exp_min(cap, None, mode) or DEFAULT_PRECISION
        elif cap is not None:
            goal = exp_min(goal, cap, mode)
        first_inc = increment.key(mode)[0]
        first_goal = goal.key(mode)[0]
        if first_inc == 0 and first_goal > 0:
            raise IndeterminateAtPrecision(
                f"truncation order {goal} is not reachable from expansion "
                f"step {increment}; pass a precision commensurable with the "
                "operand scales"
            )
        return goal

    def inverse(self, precision: Optional[Exponent] = None) -> "Series":
        """Multiplicative inverse via a geometric expansion.

        ``precision`` truncates the expansion when the input is exact and
        the inverse does not terminate; defaults to :data:`DEFAULT_PRECISION`.
        """
        if self.is_provably_zero:
            raise DivisionByZero("inverse of exact zero")
        e0, c0 = self.leading()
        # self = c0*eps^e0 * (1 + r) with v(r) > 0
        r = (self - Series.monomial(c0, e0, self.mode)).scale_monomial(
            Fraction(1, 1) / c0, -e0
        )
        input_target = (
            None if self.error_order is None else self.error_order - e0
        )
        if not r.terms:
            bracket = Series.constant(1, self.mode).with_error_order(
                r.error_order
            )
        else:
            cap_target = None if precision is None else precision + e0
            target = self._expansion_target(r.terms[0][0], input_target, cap_target)
            bracket = _geometric_sum(r, target)
        result = bracket.scale_monomial(Fraction(1, 1) / c0, -e0)
        if self.error_order is not None:
            result = result.with_error_order(self.error_order - e0 - e0)
        return result

    def div(
        self, other: Union["Series", RatLike], precision: Optional[Exponent] = None
    ) -> "Series":
        other = self._coerce(other)
        self._require_same_mode(other)
        return self * other.inverse(precision)

    def __truediv__(self, other: Union["Series", RatLike]) -> "Series":
        return self.div(other)

    def __rtruediv__(self, other: RatLike) -> "Series":
        return Series.constant(other, self.mode).div(self)

    def pow_int(self, k: int, precision: Optional[Exponent] = None) -> "Series":
        if k < 0:
            return self.inverse(precision).pow_int(-k)
        result = Series.constant(1, self.mode)
        power = self
        while k:
            if k & 1:
                result = result * power
            k >>= 1
            if k:
                power = power * power
        return result

    def __pow__(self, k: int) -> "Series":
        return self.pow_int(k)

    def nth_root(self, n: int, precision: Optional[Exponent] = None) -> "Series":
        """Positive-leading n-th root via a binomial expansion.

        The leading coefficient must have an exact rational n-th root and be
        positive when ``n`` is even; otherwise :class:`NonRepresentableRoot`.
        """
        if n <= 0:
            raise ValueError("root index must be a positive integer")
        if self.is_provably_zero:
            return self
        e0, c0 = self.leading()
        if c0 < 0 and n % 2 == 0:
            raise NonRepresentableRoot("even root of a negative series")
        root_c = _rational_nth_root(abs(c0), n)
        if root_c is None:
            raise NonRepresentableRoot(
                f"leading coefficient {c0} has no rational {n}-th root"
            )
        if c0 < 0:
            root_c = -root_c
        e_root = e0.scaled(Fraction(1, n))
        u = (self - Series.monomial(c0, e0, self.mode)).scale_monomial(
            Fraction(1, 1) / c0, -e0
        )
        input_target = None if self.error_order is None else self.error_order - e0
        if not u.terms:
            bracket = Series.constant(1, self.mode).with_error_order(u.error_order)
        else:
            cap_target = None if precision is None else precision - e_root
            target = self._expansion_target(u.terms[0][0], input_target, cap_target)
            bracket = _binomial_sum(u, Fraction(1, n), target)
        result = bracket.scale_monomial(root_c, e_root)
        if self.error_order is not None:
            result = result.with_error_order(self.error_order - e0 + e_root)
        return result

    # -- order ---------------------------------------------------------

    def compare(self, other: Union["Series", RatLike]) -> int:
        """Total order of the field: -1, 0 or +1; raises when undecidable."""
        return (self - self._coerce(other)).sign()

    def __lt__(self, other: Union["Series", RatLike]) -> bool:
        return self.compare(other) < 0

    def __le__(self, other: Union["Series", RatLike]) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: Union["Series", RatLike]) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: Union["Series", RatLike]) -> bool:
        return self.compare(other) >= 0

    def abs(self) -> "Series":
        return -self if self.sign() < 0 else self

    def agrees_with(self, other: Union["Series", RatLike]) -> bool:
        """True when the difference has no term below the common error order."""
        diff = self - self._coerce(other)
        return not diff.terms

    # -- presentation ---------------------------------------------------

    def __str__(self) -> str:
        return format_series(self)

    def to_json(self) -> dict:
        return {
            "mode": self.mode.value,
            "terms": [
                [str(e.base), str(e.aux), c.numerator, c.denominator]
                for e, c in self.terms
            ],
            "error_order": None
            if self.error_order is None
            else [str(self.error_order.base), str(self.error_order.aux)],
        }

    @staticmethod
    def from_json(data: dict) -> "Series":
        mode = GroupMode(data["mode"])
        terms = [
            (Exponent(Fraction(b), Fraction(a)), Fraction(num, den))
            for b, a, num, den in data["terms"]
        ]
        eo = data.get("error_order")
        error_order = None if eo is None else Exponent(Fraction(eo[0]), Fraction(eo[1]))
        return Series.make(mode, terms, error_order)


def _geometric_sum(r: Series, target: Exponent) -> Series:
    """``1/(1+r)`` summed until the remainder valuation reaches ``target``."""
    mode = r.mode
    acc = Series.constant(1, mode)
    power = Series.constant(1, mode)
    achieved: Optional[Exponent] = None
    for _ in range(100000):
        power = power * (-r)
        bound = power.value_lower_bound()
        if bound is None or bound.compare(target, mode) >= 0:
            achieved = bound
            break
        acc = acc + power
    else:  # pragma: no cover - guarded by reachability analysis
        raise IndeterminateAtPrecision("geometric expansion did not converge")
    return acc.with_error_order(exp_min(achieved, target, mode))


def _binomial_sum(u: Series, alpha: Fraction, target: Exponent) -> Series:
    """``(1+u)^alpha`` summed until the remainder valuation reaches ``target``."""
    mode = u.mode
    acc = Series.constant(1, mode)
    power = Series.constant(1, mode)
    coeff = Fraction(1)
    k = 0
    achieved: Optional[Exponent] = None
    for _ in range(100000):
        power = power * u
        coeff = coeff * (alpha - k) / (k + 1)
        k += 1
        bound = power.value_lower_bound()
        if bound is None or bound.compare(target, mode) >= 0:
            achieved = bound
            break
        if coeff != 0:
            acc = acc + power.scale_monomial(coeff, ZERO_EXPONENT)
    else:  # pragma: no cover
        raise IndeterminateAtPrecision("binomial expansion did not converge")
    return acc.with_error_order(exp_min(achieved, target, mode))


def _int_nth_root(m: int, n: int) -> int:
    """Floor of the n-th root of a nonnegative integer."""
    if m < 0:
        raise ValueError("negative radicand")
    if m == 0:
        return 0
    x = 1 << ((m.bit_length() + n - 1) // n + 1)
    while True:
        y = ((n - 1) * x + m // x ** (n - 1)) // n
        if y >= x:
            return x
        x = y


def _rational_nth_root(q: Fraction, n: int) -> Optional[Fraction]:
    """Exact rational n-th root of a nonnegative rational, or None."""
    num = _int_nth_root(q.numerator, n)
    den = _int_nth_root(q.denominator, n)
    if num**n == q.numerator and den**n == q.denominator:
        return Fraction(num, den)
    return None


# -- canonical text form ----------------------------------------------


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _format_power(symbol: str, power: Fraction) -> str:
    if power == 1:
        return symbol
    if power.denominator == 1 and power >= 0:
        return f"{symbol}^{power.numerator}"
    return f"{symbol}^({format_fraction(power)})"


def format_exponent_monomial(e: Exponent) -> str:
    parts = []
    if e.base != 0:
        parts.append(_format_power("eps", e.base))
    if e.aux != 0:
        parts.append(_format_power("t", e.aux))
    return "*".join(parts)


def format_series(s: Series) -> str:
    """Canonical text form, parseable by the expression language."""
    chunks: list[str] = []
    for e, c in s.terms:
        mono = format_exponent_monomial(e)
        mag = abs(c)
        if not mono:
            body = format_fraction(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_fraction(mag)}*{mono}"
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if c > 0 else f"- {body}")
    if s.error_order is not None:
        mono = format_exponent_monomial(s.error_order) or "1"
        o_term = f"O({mono})"
        chunks.append(f"+ {o_term}" if chunks else o_term)
    if not chunks:
        return "0"
    return " ".join(chunks)
