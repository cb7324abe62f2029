"""Root counting, isolation across scales, and monotonic decomposition."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ultracuts.places import RationalFn
from ultracuts.poly import SeriesPoly, squarefree_part
from ultracuts.realroots import (
    Direction,
    Interval,
    WHOLE_LINE,
    isolate_roots,
    isolate_roots_detailed,
    monotonic_decomposition,
    sturm_count,
)
from ultracuts.series import Exponent, GroupMode, Series

M = GroupMode.AUX_INFINITESIMAL
EPS = Series.eps(M)
ONE = Series.constant(1, M)


def E(base, aux=0) -> Exponent:
    return Exponent(Fraction(base), Fraction(aux))


def poly(*coeffs) -> SeriesPoly:
    return SeriesPoly.make(M, coeffs)


def poly_with_roots(*roots) -> SeriesPoly:
    p = poly(1)
    for r in roots:
        r = r if isinstance(r, Series) else Series.constant(r, M)
        p = p * poly(-r, 1)
    return p


def interval(lo, hi) -> Interval:
    conv = lambda v: None if v is None else (v if isinstance(v, Series) else Series.constant(v, M))
    return Interval(conv(lo), conv(hi))


class TestSturmCount:
    def test_infinitesimal_root_pair(self):
        p = poly(-EPS, 0, 1)  # x^2 - eps
        assert sturm_count(p, interval(0, 1)) == 1
        assert sturm_count(p) == 2

    def test_no_real_roots(self):
        assert sturm_count(poly(1, 0, 1)) == 0

    def test_two_rational_roots(self):
        p = poly_with_roots(1, 2)
        assert sturm_count(p, interval(0, 3)) == 2

    def test_open_interval_excludes_endpoint_roots(self):
        p = poly_with_roots(1, 2)
        assert sturm_count(p, interval(1, 2)) == 0
        assert sturm_count(p, interval(1, 3)) == 1

    def test_multiple_roots_counted_once(self):
        p = poly_with_roots(1, 1, 2)
        assert sturm_count(p, interval(0, 3)) == 2

    def test_series_coefficient_roots(self):
        r1, r2 = 1 + EPS, 1 + 2 * EPS
        p = poly_with_roots(r1, r2)
        assert sturm_count(p, WHOLE_LINE) == 2
        mid = 1 + EPS * Fraction(3, 2)
        assert sturm_count(p, interval(1, mid)) == 1

    def test_known_random_rational_roots(self):
        rng = random.Random(109)
        for _ in range(25):
            roots = sorted({Fraction(rng.randint(-6, 6)) for _ in range(rng.randint(1, 4))})
            p = poly_with_roots(*roots)
            assert sturm_count(p) == len(roots)
            lo, hi = Fraction(rng.randint(-8, -7)), Fraction(rng.randint(7, 8))
            inside = [r for r in roots if lo < r < hi]
            assert sturm_count(p, interval(lo, hi)) == len(inside)


class TestIsolateRoots:
    def test_eps_scale_pair(self):
        p = poly(-EPS, 0, 1)  # roots +-eps^(1/2)
        boxes = isolate_roots(p)
        assert len(boxes) == 2
        sqrt_eps = Series.eps(M, Fraction(1, 2))
        assert boxes[0].contains(-sqrt_eps)
        assert boxes[1].contains(sqrt_eps)
        for box in boxes:
            signs = (p.evaluate(box.lo).sign(), p.evaluate(box.hi).sign())
            assert signs[0] * signs[1] < 0

    def test_no_roots_gives_empty(self):
        assert isolate_roots(poly(1, 0, 1)) == []

    def test_linear(self):
        boxes = isolate_roots_detailed(poly(-3, 1))
        assert len(boxes) == 1
        assert boxes[0].exact == Series.constant(3, M)

    def test_mixed_scales(self):
        # Roots at three different valuations plus zero.
        p = poly_with_roots(0, EPS, -EPS, 2, Series.monomial(1, E(-1), M))
        detailed = isolate_roots_detailed(p)
        assert len(detailed) == 5
        exact = [enc.exact for enc in detailed]
        assert exact[0] == -EPS.as_mode(M)
        assert exact[1] == Series.zero(M)
        assert exact[2] == EPS
        assert exact[3] == Series.constant(2, M)
        assert exact[4] == Series.monomial(1, E(-1), M)

    def test_cluster_split_beyond_leading_term(self):
        r1, r2 = 1 + EPS, 1 + 2 * EPS
        p = poly_with_roots(r1, r2)
        detailed = isolate_roots_detailed(p)
        assert len(detailed) == 2
        assert detailed[0].exact == r1
        assert detailed[1].exact == r2

    def test_interval_clipping(self):
        p = poly_with_roots(-1, 1, 3)
        boxes = isolate_roots(p, interval(0, 2))
        assert len(boxes) == 1
        assert boxes[0].contains(ONE)

    def test_sign_change_on_every_enclosure(self):
        rng = random.Random(113)
        for _ in range(15):
            roots = sorted({Fraction(rng.randint(-5, 5), rng.randint(1, 2)) for _ in range(rng.randint(1, 3))})
            p = poly_with_roots(*roots)
            boxes = isolate_roots(p)
            assert len(boxes) == len(roots)
            sq = squarefree_part(p)
            for box, root in zip(boxes, roots):
                assert box.contains(Series.constant(root, M))
                assert sq.evaluate(box.lo).sign() * sq.evaluate(box.hi).sign() < 0


class TestMonotonicDecomposition:
    def test_parabola(self):
        f = RationalFn.from_poly(poly(0, 0, 1))  # x^2
        parts = monotonic_decomposition(f)
        assert len(parts) == 2
        (i1, d1), (i2, d2) = parts
        assert d1 is Direction.DECREASING and d2 is Direction.INCREASING
        assert i1.lo is None and i1.hi == Series.zero(M)
        assert i2.lo == Series.zero(M) and i2.hi is None

    def test_reciprocal(self):
        f = RationalFn.from_poly(poly(1)) / RationalFn.x()
        parts = monotonic_decomposition(f)
        assert len(parts) == 2
        assert all(d is Direction.DECREASING for _, d in parts)

    def test_eps_scale_saddle(self):
        # x^3 - 3 eps^2 x has derivative 3(x - eps)(x + eps).
        f = RationalFn.from_poly(poly(0, -3 * EPS * EPS, 0, 1))
        parts = monotonic_decomposition(f)
        assert [d for _, d in parts] == [
            Direction.INCREASING,
            Direction.DECREASING,
            Direction.INCREASING,
        ]
        assert parts[0][0].hi == -EPS
        assert parts[1][0] == Interval(-EPS, EPS)
        assert parts[2][0].lo == EPS

    def test_monotone_line(self):
        f = RationalFn.from_poly(poly(3, 1))
        parts = monotonic_decomposition(f)
        assert parts == [(WHOLE_LINE, Direction.INCREASING)]

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            monotonic_decomposition(RationalFn.constant(5))

    def test_directions_match_function_growth(self):
        rng = random.Random(127)
        for _ in range(10):
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(4)] + [Fraction(rng.randint(1, 3))]
            f = RationalFn.from_poly(poly(*coeffs))
            for box, direction in monotonic_decomposition(f):
                lo = box.lo if box.lo is not None else (box.hi - 2)
                hi = box.hi if box.hi is not None else (box.lo + 2)
                a = lo + (hi - lo) * Fraction(1, 3)
                b = lo + (hi - lo) * Fraction(2, 3)
                fa = f.num.evaluate(a)
                fb = f.num.evaluate(b)
                cmp = fa.compare(fb)
                if direction is Direction.INCREASING:
                    assert cmp < 0
                else:
                    assert cmp > 0

    def test_coverage_of_line(self):
        # Exact breakpoints: union of interval closures covers the line.
        f = RationalFn.from_poly(poly(0, -3 * EPS * EPS, 0, 1))
        parts = monotonic_decomposition(f)
        assert parts[0][0].lo is None and parts[-1][0].hi is None
        for (a, _), (b, _) in zip(parts, parts[1:]):
            assert a.hi == b.lo
