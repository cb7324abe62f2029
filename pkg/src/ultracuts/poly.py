"""Dense univariate polynomials with series coefficients.

Shared machinery for the root-isolation and orderings modules: ring
arithmetic, evaluation, derivatives, pseudo-remainders (kept exact by
avoiding coefficient division), gcd, squarefree parts and a Newton
refinement step for series-valued roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import IndeterminateAtPrecision, NewtonNoConvergence
from .series import Exponent, GroupMode, RatLike, Series

CoeffLike = Union[Series, RatLike]


@dataclass(frozen=True)
class SeriesPoly:
    """Polynomial sum(coeffs[k] * x^k); trailing exact zeros are stripped."""

    mode: GroupMode
    coeffs: tuple[Series, ...]

    @staticmethod
    def make(mode: GroupMode, coeffs: Iterable[CoeffLike]) -> "SeriesPoly":
        lifted = [
            c.as_mode(mode) if isinstance(c, Series) else Series.constant(c, mode)
            for c in coeffs
        ]
        while lifted and lifted[-1].is_provably_zero:
            lifted.pop()
        return SeriesPoly(mode, tuple(lifted))

    @staticmethod
    def constant(value: CoeffLike, mode: GroupMode = GroupMode.AUX_INFINITESIMAL) -> "SeriesPoly":
        return SeriesPoly.make(mode, [value])

    @staticmethod
    def x(mode: GroupMode = GroupMode.AUX_INFINITESIMAL) -> "SeriesPoly":
        return SeriesPoly.make(mode, [0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Series:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, k: int) -> Series:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Series.zero(self.mode)

    # -- ring operations ----------------------------------------------

    def _coerce(self, other: Union["SeriesPoly", CoeffLike]) -> "SeriesPoly":
        if isinstance(other, SeriesPoly):
            return other
        return SeriesPoly.constant(other, self.mode)

    def __add__(self, other: Union["SeriesPoly", CoeffLike]) -> "SeriesPoly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return SeriesPoly.make(
            self.mode,
            [self.coefficient(k) + other.coefficient(k) for k in range(n)],
        )

    def __neg__(self) -> "SeriesPoly":
        return SeriesPoly(self.mode, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Union["SeriesPoly", CoeffLike]) -> "SeriesPoly":
        return self + (-self._coerce(other))

    def __mul__(self, other: Union["SeriesPoly", CoeffLike]) -> "SeriesPoly":
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return SeriesPoly(self.mode, ())
        out = [Series.zero(self.mode)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return SeriesPoly.make(self.mode, out)

    def __rmul__(self, other: CoeffLike) -> "SeriesPoly":
        return self.__mul__(other)

    def scale(self, factor: CoeffLike) -> "SeriesPoly":
        factor = (
            factor if isinstance(factor, Series) else Series.constant(factor, self.mode)
        )
        return SeriesPoly.make(self.mode, [c * factor for c in self.coeffs])

    def derivative(self) -> "SeriesPoly":
        return SeriesPoly.make(
            self.mode, [c * k for k, c in enumerate(self.coeffs)][1:]
        )

    def evaluate(self, point: Series) -> Series:
        """Horner evaluation; coefficients are lifted into the point's mode."""
        acc = Series.zero(point.mode)
        for c in reversed(self.coeffs):
            acc = acc * point + c.as_mode(point.mode)
        return acc

    def shift(self, a: Series) -> "SeriesPoly":
        """The polynomial ``p(x + a)`` via iterated synthetic division."""
        coeffs = [c.as_mode(a.mode) for c in self.coeffs]
        n = len(coeffs)
        for i in range(n - 1):
            for k in range(n - 2, i - 1, -1):
                coeffs[k] = coeffs[k] + coeffs[k + 1] * a
        return SeriesPoly.make(a.mode, coeffs)

    def compose_monomial(self, coeff: RatLike, exponent: Exponent) -> "SeriesPoly":
        """The polynomial ``p(m * x)`` for a monomial ``m``; exact."""
        out = []
        for k, c in enumerate(self.coeffs):
            if c.is_provably_zero:
                out.append(c)
            else:
                out.append(c.scale_monomial(Fraction(coeff) ** k, exponent.scaled(k)))
        return SeriesPoly.make(self.mode, out)

    # -- euclidean structure --------------------------------------------

    def divmod(
        self, other: "SeriesPoly", precision: Optional[Exponent] = None
    ) -> tuple["SeriesPoly", "SeriesPoly"]:
        """Classical division; exact when the divisor's lead inverts exactly."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        inv_lead = other.leading().inverse(precision)
        quotient = [Series.zero(self.mode)] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d = other.degree
        while len(rem) - 1 >= d:
            lead = rem[-1]
            if lead.is_provably_zero:
                rem.pop()
                continue
            k = len(rem) - 1 - d
            q = lead * inv_lead
            quotient[k] = quotient[k] + q
            for j in range(d + 1):
                rem[k + j] = rem[k + j] - q * other.coeffs[j]
            rem.pop()
        return (
            SeriesPoly.make(self.mode, quotient),
            SeriesPoly.make(self.mode, rem),
        )

    def pseudo_rem(self, other: "SeriesPoly") -> "SeriesPoly":
        """Pseudo-remainder scaled by an even power of the divisor's lead.

        The even power keeps the multiplier positive, so Sturm sign
        sequences are unaffected, and no coefficient division ever happens:
        exact inputs stay exact.
        """
        if other.is_zero:
            raise ZeroDivisionError("pseudo-remainder by zero")
        c = other.leading()
        rem = self
        steps = 0
        d = other.degree
        while not rem.is_zero and rem.degree >= d:
            lead = rem.leading()
            k = rem.degree - d
            shifted = SeriesPoly.make(
                self.mode,
                [Series.zero(self.mode)] * k + [lead * b for b in other.coeffs],
            )
            rem = rem.scale(c) - shifted
            steps += 1
            # scale() may leave an inexact-lead coefficient; degree drop is
            # guaranteed because the lead cancels exactly
            rem = _drop_exact_lead_zero(rem)
        if steps % 2 == 1:
            rem = rem.scale(c)
        return rem

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        chunks = []
        for k, c in enumerate(self.coeffs):
            if c.is_provably_zero:
                continue
            body = f"({c})" if len(c.terms) > 1 or c.error_order is not None else f"{c}"
            if k == 0:
                chunks.append(body)
            elif k == 1:
                chunks.append(f"{body}*x")
            else:
                chunks.append(f"{body}*x^{k}")
        return " + ".join(chunks)


def _drop_exact_lead_zero(p: SeriesPoly) -> SeriesPoly:
    coeffs = list(p.coeffs)
    while coeffs and coeffs[-1].is_provably_zero:
        coeffs.pop()
    return SeriesPoly(p.mode, tuple(coeffs))


def poly_gcd(a: SeriesPoly, b: SeriesPoly) -> SeriesPoly:
    """A (scaled) greatest common divisor via pseudo-remainders."""
    while not b.is_zero:
        a, b = b, a.pseudo_rem(b)
    return a


def squarefree_part(p: SeriesPoly, precision: Optional[Exponent] = None) -> SeriesPoly:
    """``p`` divided by gcd(p, p'); multiplicities collapse to one."""
    if p.is_zero or p.degree < 1:
        return p
    g = poly_gcd(p, p.derivative())
    if g.degree < 1:
        return p
    q, _ = p.divmod(g, precision)
    return q


def squarefree_decomposition(
    p: SeriesPoly, precision: Optional[Exponent] = None
) -> list[tuple[SeriesPoly, int]]:
    """Yun decomposition ``p = prod f_i^i`` (unit factors dropped)."""
    out: list[tuple[SeriesPoly, int]] = []
    if p.is_zero or p.degree < 1:
        return out
    g = poly_gcd(p, p.derivative())
    if g.degree < 1:
        return [(p, 1)]
    w, _ = p.divmod(g, precision)
    y, _ = p.derivative().divmod(g, precision)
    i = 1
    while w.degree >= 1:
        z = y - w.derivative()
        f = poly_gcd(w, z)
        if f.degree >= 1:
            out.append((f, i))
            w, _ = w.divmod(f, precision)
            y, _ = z.divmod(f, precision)
        else:
            y = z
        i += 1
        if i > p.degree + 1:  # pragma: no cover - defensive
            raise RuntimeError("squarefree decomposition did not terminate")
    return out


def newton_root(
    p: SeriesPoly,
    seed: Series,
    target: Exponent,
    max_steps: int = 60,
) -> Series:
    """Refine a simple root of ``p`` by Newton iteration.

    Requires ``v(p(seed)) > 2 v(p'(seed))``; converges quadratically and
    stops once the residual has no term below ``target`` (or vanishes
    exactly).
    """
    dp = p.derivative()
    mode = seed.mode
    residual = p.evaluate(seed)
    slope = dp.evaluate(seed)
    if residual.is_provably_zero:
        return seed
    try:
        v_res = residual.valuation()
        v_slope = slope.valuation()
    except IndeterminateAtPrecision:
        v_res, v_slope = None, Exponent(0, 0)
    if v_res is not None and (
        v_slope is None
        or v_res.compare(v_slope.scaled(2), mode) <= 0
    ):
        raise NewtonNoConvergence(
            f"seed residual valuation {v_res} does not exceed twice the "
            f"derivative valuation {v_slope}"
        )
    y = seed
    last_bound: Optional[Exponent] = v_res
    for _ in range(max_steps):
        residual = p.evaluate(y)
        bound = residual.value_lower_bound()
        if bound is None or bound.compare(target, mode) >= 0:
            return y.with_error_order(target)
        if last_bound is not None and bound.compare(last_bound, mode) < 0:
            raise NewtonNoConvergence("residual valuation stopped improving")
        last_bound = bound
        correction = residual.div(dp.evaluate(y), precision=target)
        y = y - correction
    raise NewtonNoConvergence(f"no convergence within {max_steps} steps")
