"""Expression parsing, printing and evaluation."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ultracuts.cuts import BallEdgeCut, PrincipalCut, Side, MINUS_INFINITY, PLUS_INFINITY
from ultracuts.errors import ParseError, UnknownIdentifier
from ultracuts.expr import (
    Add,
    Aux,
    Const,
    Div,
    Eps,
    Mul,
    Neg,
    Pow,
    Root,
    Sub,
    Var,
    eval_curve_fn,
    eval_rational_fn,
    eval_series,
    parse,
    parse_ball,
    parse_cut,
    parse_point_or_series,
    parse_series,
    print_ast,
)
from ultracuts.series import Exponent, GroupMode, Series, format_series
from ultracuts.ultrametric import GroupCutKind, Point

M = GroupMode.AUX_INFINITESIMAL
EPS = Series.eps(M)


def E(base, aux=0) -> Exponent:
    return Exponent(Fraction(base), Fraction(aux))


class TestParse:
    def test_power_with_rational_exponent(self):
        ast = parse("1 + eps^(1/2)")
        assert ast == Add(Const(Fraction(1)), Pow(Eps(), Fraction(1, 2)))

    def test_variables_from_environment(self):
        ast = parse("y/x", frozenset({"x", "y"}))
        assert ast == Div(Var("y"), Var("x"))

    def test_sqrt(self):
        ast = parse("sqrt(1+eps)")
        assert ast == Root(2, Add(Const(Fraction(1)), Eps()))

    def test_unknown_identifier(self):
        with pytest.raises(UnknownIdentifier):
            parse("q + 1")

    def test_syntax_error_position(self):
        with pytest.raises(ParseError) as err:
            parse("1 + + 2)")
        assert "position" in str(err.value)

    def test_precedence(self):
        ast = parse("1 + 2*eps^2")
        assert ast == Add(Const(Fraction(1)), Mul(Const(Fraction(2)), Pow(Eps(), Fraction(2))))

    def test_unary_minus(self):
        assert parse("-eps") == Neg(Eps())

    def test_negative_exponent(self):
        assert parse("eps^-1") == Pow(Eps(), Fraction(-1))
        assert parse("eps^(-3/2)") == Pow(Eps(), Fraction(-3, 2))


class TestPrintRoundTrip:
    def _random_ast(self, rng: random.Random, depth: int):
        if depth == 0:
            # Grammar-shaped leaves: nonnegative integer literals only.
            return rng.choice([Const(Fraction(rng.randint(0, 5))), Eps(), Aux()])
        kind = rng.randrange(7)
        sub = lambda: self._random_ast(rng, depth - 1)
        if kind == 0:
            return Add(sub(), sub())
        if kind == 1:
            return Sub(sub(), sub())
        if kind == 2:
            return Mul(sub(), sub())
        if kind == 3:
            return Div(sub(), sub())
        if kind == 4:
            return Neg(sub())
        if kind == 5:
            return Pow(sub(), Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
        return Root(rng.choice([2, 3]), sub())

    def test_parse_print_identity(self):
        rng = random.Random(139)
        for _ in range(60):
            ast = self._random_ast(rng, rng.randint(1, 3))
            assert parse(print_ast(ast)) == ast

    def test_series_text_form_round_trip(self):
        samples = [
            EPS + 1,
            Series.make(M, [(E(0), Fraction(3, 2)), (E(Fraction(1, 2)), -1)], E(3)),
            Series.monomial(-2, E(2, -1), M) + Series.monomial(1, E(0, 2), M),
            Series.zero(M),
            Series.make(M, [], E(4)),
        ]
        for s in samples:
            assert parse_series(format_series(s), M) == s


class TestEvalSeries:
    def test_product(self):
        assert eval_series(parse("eps*eps")) == EPS * EPS

    def test_geometric(self):
        got = eval_series(parse("1/(1-eps)"), precision=E(4))
        assert got == Series.make(M, [(E(0), 1), (E(1), 1), (E(2), 1), (E(3), 1)], E(4))

    def test_sqrt_returns_positive_root(self):
        # sqrt(x^2) for x = -eps is +eps, the principal root.
        x = -EPS
        got = eval_series(parse("sqrt(x^2)", frozenset({"x"})), env={"x": x})
        assert got == EPS
        assert (got * got).agrees_with(x * x)

    def test_homomorphism_random(self):
        rng = random.Random(149)
        for _ in range(40):
            a = Const(Fraction(rng.randint(-4, 4)))
            b = rng.choice([Eps(), Const(Fraction(rng.randint(1, 4)))])
            assert eval_series(Add(a, b)) == eval_series(a) + eval_series(b)
            assert eval_series(Mul(a, b)) == eval_series(a) * eval_series(b)
            assert eval_series(Neg(b)) == -eval_series(b)

    def test_aux_in_both_modes(self):
        assert eval_series(parse("t"), M) == Series.aux(M)
        D = GroupMode.AUX_DOMINANT
        assert eval_series(parse("t"), D) == Series.aux(D)


class TestEvalFunctions:
    def test_rational_fn(self):
        f = eval_rational_fn(parse("(x-1)/(x+1)", frozenset({"x"})))
        assert f.num.degree == 1 and f.den.degree == 1

    def test_rational_fn_rejects_roots(self):
        with pytest.raises(ParseError):
            eval_rational_fn(parse("sqrt(x)", frozenset({"x"})))

    def test_curve_fn(self):
        z = eval_curve_fn(parse("y/x", frozenset({"x", "y"})))
        assert z.num == ((0, 1, Series.constant(1, M)),)
        assert z.den == ((1, 0, Series.constant(1, M)),)


class TestComposedForms:
    def test_parse_ball(self):
        ball = parse_ball("B[>=1/2](1+eps)")
        assert ball.radius.kind is GroupCutKind.AT_LEAST
        assert ball.radius.gamma == E(Fraction(1, 2))
        assert ball.center == 1 + EPS

    def test_parse_ball_all_positive(self):
        assert parse_ball("B[>0](0)").radius.kind is GroupCutKind.ALL_POSITIVE

    def test_parse_point_ball(self):
        ball = parse_ball("B[point](3)")
        assert ball.radius.kind is GroupCutKind.SINGLETON

    def test_parse_affine_center(self):
        value = parse_point_or_series("(eps, 1+eps)")
        assert isinstance(value, Point)
        assert value.dim == 2

    def test_parse_cut_forms(self):
        assert parse_cut("-inf") is MINUS_INFINITY
        assert parse_cut("+inf") is PLUS_INFINITY
        c = parse_cut("cut+(1)")
        assert isinstance(c, PrincipalCut) and c.side is Side.PLUS
        b = parse_cut("ball-[>0](1)")
        assert isinstance(b, BallEdgeCut) and b.side is Side.MINUS
        assert b.ball.radius.kind is GroupCutKind.ALL_POSITIVE
