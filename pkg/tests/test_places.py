"""Orderings, places and the same-place criterion."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ultracuts.cuts import (
    MINUS_INFINITY,
    PLUS_INFINITY,
    BallEdgeCut,
    Position,
    PrincipalCut,
    Side,
    cut_equal,
    element_vs_cut,
    induced_cut,
)
from ultracuts.errors import Unrealizable
from ultracuts.places import (
    INFINITY,
    PsiClass,
    RationalFn,
    classify_index,
    ordering_sign,
    place_equal,
    place_value,
    psi,
    realize,
)
from ultracuts.poly import SeriesPoly
from ultracuts.series import Exponent, GroupMode, Series
from ultracuts.ultrametric import Ball, GroupCut

from _samplers import series

M = GroupMode.AUX_INFINITESIMAL
EPS = Series.eps(M)
ZERO = Series.zero(M)
ONE = Series.constant(1, M)
X = RationalFn.x()


def E(base, aux=0) -> Exponent:
    return Exponent(Fraction(base), Fraction(aux))


def fn(*coeffs) -> RationalFn:
    return RationalFn.from_poly(SeriesPoly.make(M, coeffs))


def all_cut_kinds(rng: random.Random, center=None):
    """One cut of every representable kind around a sampled center."""
    c = center if center is not None else series(rng)
    gamma = Fraction(rng.randint(-2, 2), rng.randint(1, 2))
    kinds = []
    for side in (Side.PLUS, Side.MINUS):
        kinds.append(PrincipalCut(c, side))
        kinds.append(BallEdgeCut(Ball(c, GroupCut.singleton()), side))
        kinds.append(BallEdgeCut(Ball(c, GroupCut.at_least(gamma)), side))
        kinds.append(BallEdgeCut(Ball(c, GroupCut.greater_than(gamma)), side))
        kinds.append(BallEdgeCut(Ball(c, GroupCut.all_positive()), side))
    kinds.extend([PLUS_INFINITY, MINUS_INFINITY])
    return kinds


class TestRealize:
    def test_principal_above_zero(self):
        r = realize(PrincipalCut(ZERO, Side.PLUS))
        assert r.mode is GroupMode.AUX_DOMINANT
        assert r.point == Series.aux(GroupMode.AUX_DOMINANT)

    def test_ball_edge_below_one(self):
        cut = BallEdgeCut(Ball(ONE, GroupCut.all_positive()), Side.MINUS)
        r = realize(cut)
        expected = ONE.as_mode(M) - Series.monomial(1, E(0, 1), M)
        assert r.point == expected

    def test_whole_field_ball_unrealizable(self):
        cut = BallEdgeCut(Ball(ZERO, GroupCut.whole_group()), Side.PLUS)
        with pytest.raises(Unrealizable):
            realize(cut)

    def test_round_trip_on_ball_edges(self):
        rng = random.Random(73)
        count = 0
        while count < 60:
            cuts = all_cut_kinds(rng)
            for cut in cuts:
                if not isinstance(cut, BallEdgeCut):
                    continue
                if cut.ball.radius.kind.value == "singleton":
                    continue
                back = induced_cut(realize(cut).point)
                assert cut_equal(back, cut)
                count += 1


class TestOrderingSign:
    def test_x_positive_just_above_zero(self):
        assert ordering_sign(PrincipalCut(ZERO, Side.PLUS), X) == 1

    def test_infinitesimal_ball_edge(self):
        cut = BallEdgeCut(Ball(ZERO, GroupCut.all_positive()), Side.PLUS)
        assert ordering_sign(cut, X - RationalFn.constant(EPS)) == 1
        assert ordering_sign(cut, X - RationalFn.constant(ONE)) == -1

    def test_square_positive(self):
        a = series(random.Random(79))
        cut = PrincipalCut(a, Side.PLUS)
        sq = (X - RationalFn.constant(a)) * (X - RationalFn.constant(a))
        assert ordering_sign(cut, sq) == 1

    def test_zero_function(self):
        assert ordering_sign(PLUS_INFINITY, RationalFn.constant(0)) == 0

    def test_ordering_axioms_sampled(self):
        rng = random.Random(83)
        for _ in range(25):
            cut = rng.choice(all_cut_kinds(rng))
            f = fn(series(rng), series(rng), series(rng))
            g = fn(series(rng), series(rng))
            if f.is_zero or g.is_zero:
                continue
            sf, sg = ordering_sign(cut, f), ordering_sign(cut, g)
            assert sf != 0 and sg != 0
            assert ordering_sign(cut, f * g) == sf * sg
            assert ordering_sign(cut, -f) == -sf


class TestPsi:
    def test_principal(self):
        classify = psi(PrincipalCut(ZERO, Side.PLUS))
        assert classify(ZERO) is PsiClass.LOWER
        assert classify(EPS) is PsiClass.UPPER

    def test_ball_below_one(self):
        cut = BallEdgeCut(Ball(ONE, GroupCut.all_positive()), Side.MINUS)
        assert psi(cut)(ONE) is PsiClass.UPPER

    def test_agreement_with_element_vs_cut(self):
        rng = random.Random(89)
        for cut in all_cut_kinds(rng):
            classify = psi(cut)
            for _ in range(50):
                a = series(rng)
                expected = (
                    PsiClass.LOWER
                    if element_vs_cut(a, cut) is Position.BELOW
                    else PsiClass.UPPER
                )
                assert classify(a) is expected


class TestPlaceValue:
    def test_archimedean_evaluation(self):
        cut = PrincipalCut(Series.constant(3, M), Side.MINUS)
        assert place_value(cut, X * X) == 9

    def test_pole_gives_infinity(self):
        cut = BallEdgeCut(Ball(ZERO, GroupCut.all_positive()), Side.PLUS)
        assert place_value(cut, RationalFn.constant(1) / X) is INFINITY

    def test_affine_function(self):
        cut = BallEdgeCut(Ball(ONE, GroupCut.all_positive()), Side.MINUS)
        f = (X + RationalFn.constant(1)) / RationalFn.constant(2)
        assert place_value(cut, f) == 1

    def test_place_is_multiplicative_and_additive(self):
        rng = random.Random(97)
        done = 0
        while done < 40:
            cut = rng.choice(all_cut_kinds(rng))
            f = fn(series(rng), series(rng))
            g = fn(series(rng), series(rng))
            if f.is_zero or g.is_zero:
                continue
            vf, vg = place_value(cut, f), place_value(cut, g)
            vsum, vprod = place_value(cut, f + g), place_value(cut, f * g)
            if all(isinstance(v, Fraction) for v in (vf, vg, vsum, vprod)):
                assert vsum == vf + vg
                assert vprod == vf * vg
                done += 1


class TestClassifyIndex:
    def test_always_two(self):
        rng = random.Random(101)
        for cut in all_cut_kinds(rng):
            assert classify_index(cut) == 2


class TestPlaceEqual:
    def test_opposite_edges_of_one_ball(self):
        ball = Ball(ONE, GroupCut.all_positive())
        assert place_equal(BallEdgeCut(ball, Side.PLUS), BallEdgeCut(ball, Side.MINUS))

    def test_different_centers(self):
        b1 = Ball(ONE, GroupCut.all_positive())
        b2 = Ball(Series.constant(-1, M), GroupCut.all_positive())
        assert not place_equal(
            BallEdgeCut(b1, Side.MINUS), BallEdgeCut(b2, Side.PLUS)
        )

    def test_principal_sides_pair(self):
        a = series(random.Random(103))
        assert place_equal(PrincipalCut(a, Side.PLUS), PrincipalCut(a, Side.MINUS))

    def test_improper_cuts_pair(self):
        assert place_equal(PLUS_INFINITY, MINUS_INFINITY)

    def test_equal_places_agree_on_functions(self):
        rng = random.Random(107)
        for _ in range(25):
            center = series(rng)
            gamma = Fraction(rng.randint(-2, 2))
            radius = rng.choice(
                [GroupCut.at_least(gamma), GroupCut.greater_than(gamma), GroupCut.all_positive()]
            )
            ball = Ball(center, radius)
            c1 = BallEdgeCut(ball, Side.PLUS)
            c2 = BallEdgeCut(Ball(center, radius), Side.MINUS)
            assert place_equal(c1, c2)
            for _ in range(20):
                f = fn(series(rng), series(rng)) / fn(series(rng, nonzero=True))
                assert place_value(c1, f) == place_value(c2, f)

    def test_unequal_places_differ_somewhere(self):
        # Falsification direction: a place-value mismatch forces inequality.
        c1 = BallEdgeCut(Ball(ONE, GroupCut.all_positive()), Side.MINUS)
        c2 = BallEdgeCut(Ball(Series.constant(-1, M), GroupCut.all_positive()), Side.PLUS)
        assert place_value(c1, X) == 1
        assert place_value(c2, X) == -1
        assert not place_equal(c1, c2)
