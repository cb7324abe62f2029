"""Arithmetic, ordering and valuation of the series kernel."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ultracuts.errors import (
    DivisionByZero,
    IncompatibleModes,
    IndeterminateAtPrecision,
    NonRepresentableRoot,
)
from ultracuts.series import INFINITY, Exponent, GroupMode, Series

from _samplers import nonzero_series, series

M = GroupMode.AUX_INFINITESIMAL
D = GroupMode.AUX_DOMINANT
EPS = Series.eps(M)
ONE = Series.constant(1, M)


def E(base, aux=0) -> Exponent:
    return Exponent(Fraction(base), Fraction(aux))


class TestAdd:
    def test_exact_cancellation(self):
        assert (EPS + EPS * EPS) + (-EPS) == EPS * EPS

    def test_term_at_error_order_absorbed(self):
        a = Series.make(M, [(E(0), 1)], E(3))
        b = Series.monomial(1, E(3), M)
        total = a + b
        assert total.terms == ((E(0), Fraction(1)),)
        assert total.error_order == E(3)

    def test_zero_identity(self):
        rng = random.Random(7)
        for _ in range(30):
            s = series(rng)
            assert Series.zero(M) + s == s

    def test_mode_mismatch(self):
        with pytest.raises(IncompatibleModes):
            Series.eps(M) + Series.eps(D)


class TestMul:
    def test_exponent_addition(self):
        h = Series.eps(M, Fraction(1, 2))
        assert h * h == EPS

    def test_exact_product(self):
        assert (ONE + EPS) * (ONE - EPS) == ONE - EPS * EPS

    def test_error_propagation_rule(self):
        a = Series.make(M, [(E(0), 1)], E(2))  # 1 + O(eps^2)
        prod = a * EPS
        assert prod.terms == ((E(1), Fraction(1)),)
        assert prod.error_order == E(3)

    def test_error_propagation_contains_exact_product(self):
        # Oracle: replace the O-term by explicit trailing terms and check the
        # exact product agrees with the truncated one below its error order.
        a_main = ONE + 2 * EPS
        tail = Series.monomial(5, E(2), M) + Series.monomial(-3, E(3), M)
        a_trunc = (a_main + tail).with_error_order(E(2))
        b = 3 + EPS
        exact = (a_main + tail) * b
        truncated = a_trunc * b
        assert truncated.agrees_with(exact)


class TestDiv:
    def test_geometric(self):
        g = ONE.div(ONE - EPS, precision=E(4))
        assert g == Series.make(M, [(E(0), 1), (E(1), 1), (E(2), 1), (E(3), 1)], E(4))

    def test_monomial_quotient_exact(self):
        assert EPS.div(EPS) == ONE

    def test_matches_multiplication_back(self):
        r = (3 + EPS).div(ONE - EPS, precision=E(3))
        assert r.terms == ((E(0), Fraction(3)), (E(1), Fraction(4)), (E(2), Fraction(4)))
        assert (r * (ONE - EPS)).agrees_with(3 + EPS)

    def test_division_by_exact_zero(self):
        with pytest.raises(DivisionByZero):
            ONE.div(Series.zero(M))

    def test_division_by_unknown(self):
        fog = Series.make(M, [], E(3))
        with pytest.raises(IndeterminateAtPrecision):
            ONE.div(fog)

    def test_random_inverse(self):
        rng = random.Random(11)
        for _ in range(40):
            s = nonzero_series(rng)
            inv = s.inverse(precision=E(6))
            assert (s * inv).agrees_with(ONE)


class TestNthRoot:
    def test_monomial_square_root(self):
        assert (EPS * EPS).nth_root(2) == EPS

    def test_binomial_expansion(self):
        r = (ONE + EPS).nth_root(2, precision=E(3))
        assert r.terms == (
            (E(0), Fraction(1)),
            (E(1), Fraction(1, 2)),
            (E(2), Fraction(-1, 8)),
        )
        assert (r * r).agrees_with(ONE + EPS)

    def test_even_root_of_negative(self):
        with pytest.raises(NonRepresentableRoot):
            Series.constant(-1, M).nth_root(2)

    def test_irrational_leading_coefficient(self):
        with pytest.raises(NonRepresentableRoot):
            Series.constant(2, M).nth_root(2)

    def test_cube_root_of_negative(self):
        r = Series.monomial(-8, E(3), M).nth_root(3)
        assert r == Series.monomial(-2, E(1), M)

    def test_roots_square_back(self):
        rng = random.Random(13)
        for _ in range(100):
            terms = [
                (E(rng.randint(0, 3), 0), Fraction(rng.randint(-4, 4)))
                for _ in range(rng.randint(1, 3))
            ]
            s = Series.make(M, terms)
            if not s.terms:
                s = s + 1
            n = rng.choice([2, 3])
            a = s.pow_int(2 * n)  # leading coefficient is an exact n-th power
            root = a.nth_root(n, precision=E(8))
            assert root.pow_int(n).agrees_with(a)


class TestSignValuationStandardPart:
    def test_sign_dominated_by_leading(self):
        s = Series.monomial(-2, E(-1), M) + 5
        assert s.sign() == -1

    def test_sign_of_exact_zero(self):
        assert Series.zero(M).sign() == 0

    def test_sign_indeterminate(self):
        with pytest.raises(IndeterminateAtPrecision):
            Series.make(M, [], E(3)).sign()

    def test_valuation(self):
        s = Series.eps(M, Fraction(1, 2)) + 3 * EPS
        assert s.valuation() == E(Fraction(1, 2))
        assert Series.zero(M).valuation() is None

    def test_valuation_multiplicative_example(self):
        a = 2 * EPS
        b = Series.monomial(1, E(-1), M) + 1
        assert (a * b).valuation() == E(0)

    def test_standard_part(self):
        assert (3 + EPS).standard_part() == 3
        assert Series.monomial(1, E(-1), M).standard_part() is INFINITY
        assert (3 + EPS).div(ONE - EPS).standard_part() == 3

    def test_compare(self):
        assert EPS.compare(Fraction(1, 1000)) < 0
        assert (ONE + EPS).compare(1) > 0
        assert Series.monomial(1, E(-1), M).compare(10**6) > 0


class TestFieldProperties:
    def test_associativity_distributivity(self):
        rng = random.Random(3)
        for _ in range(60):
            a, b, c = (series(rng) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c

    def test_valuation_additive_on_products(self):
        rng = random.Random(5)
        for _ in range(200):
            a, b = nonzero_series(rng), nonzero_series(rng)
            assert (a * b).valuation() == a.valuation() + b.valuation()

    def test_valuation_of_sums(self):
        rng = random.Random(17)
        for _ in range(200):
            a, b = nonzero_series(rng), nonzero_series(rng)
            va, vb = a.valuation(), b.valuation()
            s = a + b
            if va != vb:
                lo = va if va.compare(vb, M) < 0 else vb
                assert s.valuation() == lo
            elif s.terms:
                assert s.valuation().compare(va, M) >= 0

    def test_sign_multiplicative(self):
        rng = random.Random(19)
        for _ in range(200):
            a, b = series(rng), series(rng)
            assert (a * b).sign() == a.sign() * b.sign()

    def test_total_order_on_exact_series(self):
        rng = random.Random(23)
        for _ in range(100):
            a, b, c = (series(rng) for _ in range(3))
            assert (a.compare(b) == 0) == (a == b)
            assert a.compare(b) == -b.compare(a)
            if a.compare(b) <= 0 and b.compare(c) <= 0:
                assert a.compare(c) <= 0


class TestModeRelabeling:
    def test_pure_series_change_mode(self):
        s = 3 + EPS
        d = s.as_mode(D)
        assert d.mode is D and d.terms == s.terms

    def test_mixed_series_refuse(self):
        s = Series.monomial(1, E(1, 1), M)
        with pytest.raises(IncompatibleModes):
            s.as_mode(D)


class TestAuxOrdering:
    def test_aux_infinitesimal_between_scales(self):
        # In aux-infinitesimal mode t is larger than every power of eps
        # but below every positive rational.
        t = Series.aux(M)
        assert t.compare(EPS) > 0
        assert t.compare(Fraction(1, 10**6)) < 0
        assert t.sign() == 1

    def test_aux_dominant_beyond_all_eps_scales(self):
        t = Series.aux(D)
        assert t.compare(Series.eps(D, 100)) < 0
        assert t.sign() == 1
        tinv = Series.aux(D, -1)
        assert tinv.compare(Series.eps(D, -100)) > 0


class TestJsonRoundTrip:
    def test_round_trip(self):
        rng = random.Random(29)
        for _ in range(40):
            s = series(rng, pure=False)
            assert Series.from_json(s.to_json()) == s

    def test_round_trip_with_error_order(self):
        s = Series.make(M, [(E(0), 1), (E(Fraction(1, 2)), Fraction(-3, 4))], E(5))
        assert Series.from_json(s.to_json()) == s
