"""Exact real root counting, isolation, and monotonic decomposition.

Sturm chains are built with positively scaled pseudo-remainders so that
exact inputs stay exact.  Isolation works scale by scale: a Newton
polygon splits the roots by valuation, the reduced edge polynomial
locates the rational-size window of each root, and rational bisection
separates roots within one window.  Clusters that agree beyond their
common leading term are recursed into after shifting by that term.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import IndeterminateAtPrecision, NonRepresentableRoot
from .places import RationalFn
from .poly import SeriesPoly, newton_root, squarefree_decomposition, squarefree_part
from .series import Exponent, GroupMode, Series, exp_min

_MAX_CLUSTER_DEPTH = 16


@dataclass(frozen=True)
class Interval:
    """Open interval; ``None`` bounds mean minus/plus infinity."""

    lo: Optional[Series]
    hi: Optional[Series]

    def __post_init__(self) -> None:
        if self.lo is not None and self.hi is not None:
            if self.lo.compare(self.hi) >= 0:
                raise ValueError("interval needs lo < hi")

    def contains(self, x: Series) -> bool:
        if self.lo is not None and x.compare(self.lo) <= 0:
            return False
        if self.hi is not None and x.compare(self.hi) >= 0:
            return False
        return True

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"({lo}, {hi})"


WHOLE_LINE = Interval(None, None)


class Direction(Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


# -- Sturm counting ----------------------------------------------------


def sturm_chain(p: SeriesPoly) -> list[SeriesPoly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero and chain[-1].degree >= 1:
        nxt = -chain[-2].pseudo_rem(chain[-1])
        if nxt.is_zero:
            break
        chain.append(nxt)
    return chain


def _sign_at(q: SeriesPoly, x: Optional[Series], at_plus_infinity: bool) -> int:
    if q.is_zero:
        return 0
    if x is None:
        lead_sign = q.leading().sign()
        if at_plus_infinity:
            return lead_sign
        return lead_sign * (-1 if q.degree % 2 else 1)
    return q.evaluate(x).sign()


def _variations(chain: Sequence[SeriesPoly], x: Optional[Series], plus: bool) -> int:
    signs = [s for q in chain if (s := _sign_at(q, x, plus)) != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def sturm_count(p: SeriesPoly, interval: Interval = WHOLE_LINE) -> int:
    """Number of distinct roots of ``p`` in the open interval."""
    if p.is_zero:
        raise ValueError("cannot count roots of the zero polynomial")
    p = squarefree_part(p)
    if p.degree < 1:
        return 0
    chain = sturm_chain(p)
    v_lo = _variations(chain, interval.lo, plus=False)
    v_hi = _variations(chain, interval.hi, plus=True)
    count = v_lo - v_hi
    # The chain counts roots in (lo, hi]; an exact root at hi is excluded.
    if interval.hi is not None and p.evaluate(interval.hi).is_provably_zero:
        count -= 1
    return count


# -- Newton polygon ----------------------------------------------------


def _newton_polygon(p: SeriesPoly) -> list[tuple[Exponent, list[Fraction]]]:
    """Root scales of ``p`` with the reduced polynomial of each scale.

    Returns pairs ``(gamma, e)``: the nonzero roots of valuation ``gamma``
    have leading coefficients among the real roots of ``e``.
    """
    mode = p.mode
    pts: list[tuple[int, Exponent, Fraction]] = []
    fog: list[tuple[int, Exponent]] = []
    for k, c in enumerate(p.coeffs):
        if c.terms:
            pts.append((k, c.terms[0][0], c.terms[0][1]))
        elif not c.is_exact:
            fog.append((k, c.error_order))
    if len(pts) < 2:
        return []

    def cross(o, a, b) -> int:
        lhs = (b[1] - o[1]).scaled(a[0] - o[0])
        rhs = (a[1] - o[1]).scaled(b[0] - o[0])
        return (lhs - rhs).sign(mode)

    hull: list[tuple[int, Exponent, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2 and cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)

    # A coefficient with no known term could change the polygon only if its
    # error order reaches below the hull.
    for k, eo in fog:
        for (i, vi, _), (j, vj, _) in zip(hull, hull[1:]):
            if i <= k <= j:
                on_edge = vi + (vj - vi).scaled(Fraction(k - i, j - i))
                if eo.compare(on_edge, mode) < 0:
                    raise IndeterminateAtPrecision(
                        f"coefficient of x^{k} is unknown below {eo}, which may "
                        "reshape the root-scale polygon"
                    )

    out = []
    for (i, vi, _), (j, vj, _) in zip(hull, hull[1:]):
        slope = (vj - vi).scaled(Fraction(1, j - i))
        gamma = -slope
        e = [Fraction(0)] * (j - i + 1)
        for k, vk, ck in pts:
            if i <= k <= j and (vi + slope.scaled(k - i)).compare(vk, mode) == 0:
                e[k - i] = ck
        out.append((gamma, e))
    return out


# -- rational-coefficient isolation -----------------------------------


def _fraction_poly(coeffs: Sequence[Fraction], mode: GroupMode) -> SeriesPoly:
    return SeriesPoly.make(mode, list(coeffs))


def _rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """All rational roots, by the rational root theorem on the integerized poly."""
    denom_lcm = 1
    for c in coeffs:
        denom_lcm = denom_lcm * c.denominator // _gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    if not ints:
        return []
    shift = 0
    while ints[shift] == 0:
        shift += 1
    a0, an = abs(ints[shift]), abs(ints[-1])
    candidates = {Fraction(0)} if shift else set()
    for num in _divisors(a0):
        for den in _divisors(an):
            candidates.add(Fraction(num, den))
            candidates.add(Fraction(-num, den))
    poly = _fraction_poly([Fraction(c) for c in ints], GroupMode.AUX_INFINITESIMAL)
    return sorted(
        c for c in candidates if poly.evaluate(Series.constant(c)).is_provably_zero
    )


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def _rational_windows(coeffs: Sequence[Fraction], mode: GroupMode) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational windows isolating the real roots of ``e``.

    Window endpoints are never roots, never zero, and no window straddles
    zero (``e(0) != 0`` is required).
    """
    e = squarefree_part(_fraction_poly(coeffs, mode))
    if e.degree < 1:
        return []
    cs = [e.coefficient(k).coefficient(Exponent(0, 0)) for k in range(e.degree + 1)]
    assert cs[0] != 0, "edge polynomial cannot vanish at zero"
    lead = cs[-1]
    upper = 2 + sum(abs(c / lead) for c in cs[:-1])
    lower = 1 / (2 + sum(abs(c / cs[0]) for c in cs[1:]))

    def count(lo: Fraction, hi: Fraction) -> int:
        return sturm_count(
            e, Interval(Series.constant(lo, mode), Series.constant(hi, mode))
        )

    windows: list[tuple[Fraction, Fraction]] = []
    stack = [(lower, upper), (-upper, -lower)]
    while stack:
        lo, hi = stack.pop()
        n = count(lo, hi)
        if n == 0:
            continue
        if n == 1:
            windows.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if e.evaluate(Series.constant(mid, mode)).is_provably_zero:
            # Shrink a private window around the exact root mid.
            delta = (hi - lo) / 4
            while count(mid - delta, mid + delta) > 1:
                delta /= 2
            windows.append((mid - delta, mid + delta))
            stack.append((lo, mid - delta))
            stack.append((mid + delta, hi))
        else:
            stack.append((lo, mid))
            stack.append((mid, hi))
    windows.sort()
    # Re-open strict gaps between touching windows so that downstream
    # between-breakpoint intervals are never empty.
    for i in range(len(windows) - 1):
        lo, hi = windows[i + 1]
        while windows[i][1] >= lo:
            mid = (lo + hi) / 2
            if e.evaluate(Series.constant(mid, mode)).is_provably_zero:
                lo = (lo + mid) / 2  # mid is the window's root; stay below it
            elif count(mid, hi) == 1:
                lo = mid
            else:
                hi = mid
        windows[i + 1] = (lo, hi)
    return windows


# -- isolation over the series field -----------------------------------


@dataclass(frozen=True)
class RootEnclosure:
    """Isolating interval plus the exact root when one was pinned down."""

    interval: Interval
    exact: Optional[Series]

    def sample(self) -> Series:
        if self.exact is not None:
            return self.exact
        return (self.interval.lo + self.interval.hi) * Fraction(1, 2)


def _try_exact_root(p: SeriesPoly, seed: Series) -> Optional[Series]:
    """Newton from the seed; accept only a residual that vanishes exactly."""
    if p.evaluate(seed).is_provably_zero:
        return seed
    try:
        target = Exponent(Fraction(64), Fraction(0))
        root = newton_root(p, seed, target, max_steps=12)
    except Exception:
        return None
    if root.is_exact and p.evaluate(root).is_provably_zero:
        return root
    return None


def _isolate_whole_line(p: SeriesPoly, depth: int) -> list[RootEnclosure]:
    mode = p.mode
    if p.degree < 1:
        return []
    found: list[RootEnclosure] = []

    zero = Series.zero(mode)
    has_zero_root = p.coefficient(0).is_provably_zero
    reduced_coeffs = list(p.coeffs)
    while reduced_coeffs and reduced_coeffs[0].is_provably_zero:
        reduced_coeffs.pop(0)
    reduced = SeriesPoly.make(mode, reduced_coeffs)
    if not reduced.coefficient(0).terms and not reduced.coefficient(0).is_exact:
        raise IndeterminateAtPrecision(
            "constant coefficient is unknown at this precision"
        )

    smallest_window_edge: Optional[Series] = None
    for gamma, e_coeffs in _newton_polygon(reduced):
        scale = Series.monomial(1, gamma, mode)
        rational_roots = _rational_roots(e_coeffs)
        for r1, r2 in _rational_windows(e_coeffs, mode):
            lo = scale.scale_monomial(r1, Exponent(0, 0))
            hi = scale.scale_monomial(r2, Exponent(0, 0))
            window = Interval(lo, hi)
            inner = lo.abs() if lo.abs().compare(hi.abs()) < 0 else hi.abs()
            smallest_window_edge = (
                inner
                if smallest_window_edge is None
                or inner.compare(smallest_window_edge) < 0
                else smallest_window_edge
            )
            m = sturm_count(reduced, window)
            if m == 0:
                continue
            center = next((c for c in rational_roots if r1 < c < r2), None)
            if m == 1:
                exact = None
                if center is not None:
                    exact = _try_exact_root(
                        reduced, Series.monomial(center, gamma, mode)
                    )
                found.append(RootEnclosure(window, exact))
                continue
            # A cluster shares its leading term; separate beyond it.
            if depth <= 0:
                raise NonRepresentableRoot(
                    "root cluster exceeds the supported refinement depth"
                )
            if center is None:
                raise NonRepresentableRoot(
                    "root cluster around an irrational leading coefficient"
                )
            pivot = Series.monomial(center, gamma, mode)
            gap = min(center - r1, r2 - center)
            delta = Series.monomial(gap / 2, gamma, mode)
            shifted = p.shift(pivot)
            subs = _isolate_core(shifted, Interval(-delta, delta), depth - 1)
            if len(subs) != m:
                raise NonRepresentableRoot(
                    "could not separate all members of a root cluster"
                )
            for sub in subs:
                sub_lo = pivot + sub.interval.lo
                sub_hi = pivot + sub.interval.hi
                exact = None if sub.exact is None else pivot + sub.exact
                found.append(RootEnclosure(Interval(sub_lo, sub_hi), exact))

    if has_zero_root:
        if smallest_window_edge is None:
            edge = Series.constant(1, mode)
        else:
            edge = smallest_window_edge * Fraction(1, 2)
        found.append(RootEnclosure(Interval(-edge, edge), zero))

    def _cmp(a: RootEnclosure, b: RootEnclosure) -> int:
        return a.sample().compare(b.sample())

    found.sort(key=functools.cmp_to_key(_cmp))
    return found


def _isolate_core(p: SeriesPoly, interval: Interval, depth: int) -> list[RootEnclosure]:
    everything = _isolate_whole_line(p, depth)
    if interval.lo is None and interval.hi is None:
        return everything
    kept: list[RootEnclosure] = []
    for enc in everything:
        lo = enc.interval.lo
        hi = enc.interval.hi
        if interval.lo is not None and (lo is None or lo.compare(interval.lo) < 0):
            lo = interval.lo
        if interval.hi is not None and (hi is None or hi.compare(interval.hi) > 0):
            hi = interval.hi
        if lo is not None and hi is not None and lo.compare(hi) >= 0:
            continue
        clipped = Interval(lo, hi)
        if enc.exact is not None:
            if clipped.contains(enc.exact):
                kept.append(RootEnclosure(clipped, enc.exact))
        elif sturm_count(p, clipped) == 1:
            kept.append(RootEnclosure(clipped, None))
    return kept


def isolate_roots_detailed(
    p: SeriesPoly, interval: Interval = WHOLE_LINE
) -> list[RootEnclosure]:
    """Disjoint enclosures of the distinct real roots of ``p`` in the interval."""
    if p.is_zero:
        raise ValueError("cannot isolate roots of the zero polynomial")
    reduced = squarefree_part(p)
    return _isolate_core(reduced, interval, _MAX_CLUSTER_DEPTH)


def isolate_roots(p: SeriesPoly, interval: Interval = WHOLE_LINE) -> list[Interval]:
    return [enc.interval for enc in isolate_roots_detailed(p, interval)]


# -- monotonic decomposition -------------------------------------------


def monotonic_decomposition(
    f: RationalFn,
) -> list[tuple[Interval, Direction]]:
    """Split the line at poles and sign changes of the derivative.

    Between consecutive breakpoints the function has no pole and is
    strictly monotonic; the direction is the sign of the derivative's
    numerator at an interior sample point.
    """
    mode = f.mode
    derivative_num = (
        f.num.derivative() * f.den - f.num * f.den.derivative()
    )
    if derivative_num.is_zero:
        raise ValueError("monotonic decomposition needs a nonconstant function")
    odd_part = SeriesPoly.constant(1, mode)
    for factor, mult in squarefree_decomposition(derivative_num):
        if mult % 2 == 1:
            odd_part = odd_part * factor
    breaks_poly = odd_part if f.den.degree < 1 else odd_part * f.den
    free_samples = [Series.constant(c, mode) for c in (0, 1, -1, 2)]
    if breaks_poly.degree < 1:
        return [(WHOLE_LINE, _direction_at(derivative_num, free_samples))]
    enclosures = isolate_roots_detailed(breaks_poly)
    if not enclosures:
        return [(WHOLE_LINE, _direction_at(derivative_num, free_samples))]

    bounds: list[tuple[Series, Series]] = []  # (left edge, right edge) per breakpoint
    for enc in enclosures:
        if enc.exact is not None:
            bounds.append((enc.exact, enc.exact))
        else:
            bounds.append((enc.interval.lo, enc.interval.hi))

    out: list[tuple[Interval, Direction]] = []
    first = bounds[0][0]
    out.append(
        (Interval(None, first), _direction_at(derivative_num, [first - 1, first - 2, first - 3]))
    )
    for (_, right), (next_left, _) in zip(bounds, bounds[1:]):
        samples = [
            right + (next_left - right) * q
            for q in (Fraction(1, 2), Fraction(1, 4), Fraction(3, 4), Fraction(1, 8))
        ]
        out.append((Interval(right, next_left), _direction_at(derivative_num, samples)))
    last = bounds[-1][1]
    out.append(
        (Interval(last, None), _direction_at(derivative_num, [last + 1, last + 2, last + 3]))
    )
    return out


def _direction_at(derivative_num: SeriesPoly, samples: list[Series]) -> Direction:
    # f' = derivative_num / den^2, and the square is positive off the poles.
    # An exact zero means the sample hit an even-multiplicity root of the
    # derivative (not a breakpoint); another sample in the interval decides.
    for sample in samples:
        sign = derivative_num.evaluate(sample).sign()
        if sign != 0:
            return Direction.INCREASING if sign > 0 else Direction.DECREASING
    raise IndeterminateAtPrecision("derivative sign undecided on an interval")
