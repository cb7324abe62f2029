"""Expression language shared by the CLI: series, functions, balls and cuts.

Grammar (EBNF):

    expr     = term { ("+" | "-") term } ;
    term     = factor { ("*" | "/") factor } ;
    factor   = "-" factor | power ;
    power    = atom [ "^" exponent ] ;
    exponent = integer | "-" integer | "(" rational ")" ;
    rational = [ "-" ] integer [ "/" integer ] ;
    atom     = integer | name | "(" expr ")"
             | "sqrt" "(" expr ")" | "root" "(" integer "," expr ")" ;

``eps`` is the base infinitesimal, ``t`` the auxiliary one; further names
come from the evaluation environment.  Power exponents must be rational
literals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

from .curve import CurveFunction
from .errors import ParseError, UnknownIdentifier
from .places import RationalFn
from .poly import SeriesPoly
from .series import Exponent, GroupMode, Series
from .ultrametric import Ball, GroupCut, Point
from .cuts import (
    MINUS_INFINITY,
    PLUS_INFINITY,
    BallEdgeCut,
    Cut,
    PrincipalCut,
    Side,
)

# -- abstract syntax -----------------------------------------------------


@dataclass(frozen=True)
class Ast:
    pass


@dataclass(frozen=True)
class Const(Ast):
    """Literal constant.

    The grammar produces only nonnegative integer literals; negative and
    fractional constants appear as ``Neg`` and ``Div`` nodes.
    """

    value: Fraction


@dataclass(frozen=True)
class Eps(Ast):
    pass


@dataclass(frozen=True)
class Aux(Ast):
    pass


@dataclass(frozen=True)
class Var(Ast):
    name: str


@dataclass(frozen=True)
class Add(Ast):
    left: Ast
    right: Ast


@dataclass(frozen=True)
class Sub(Ast):
    left: Ast
    right: Ast


@dataclass(frozen=True)
class Mul(Ast):
    left: Ast
    right: Ast


@dataclass(frozen=True)
class Div(Ast):
    left: Ast
    right: Ast


@dataclass(frozen=True)
class Pow(Ast):
    base: Ast
    exponent: Fraction


@dataclass(frozen=True)
class Root(Ast):
    degree: int
    arg: Ast


@dataclass(frozen=True)
class Neg(Ast):
    arg: Ast


# -- tokenizer / parser ---------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\+|\-|\*|/|\(|\)|,))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        if m.group(1):
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, names: frozenset[str]):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.names = names

    def peek(self) -> Optional[tuple[str, str, int]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.next()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError(f"expected {op!r}", tok[2])

    def parse(self) -> Ast:
        ast = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"trailing input {tok[1]!r}", tok[2])
        return ast

    def expr(self) -> Ast:
        node = self.term()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.next()
            rhs = self.term()
            node = Add(node, rhs) if tok[1] == "+" else Sub(node, rhs)
        return node

    def term(self) -> Ast:
        node = self.factor()
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "*/":
            self.next()
            rhs = self.factor()
            node = Mul(node, rhs) if tok[1] == "*" else Div(node, rhs)
        return node

    def factor(self) -> Ast:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "-":
            self.next()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Ast:
        base = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.next()
            return Pow(base, self.exponent_literal())
        return base

    def exponent_literal(self) -> Fraction:
        tok = self.next()
        if tok[0] == "int":
            return Fraction(int(tok[1]))
        if tok[0] == "op" and tok[1] == "-":
            inner = self.next()
            if inner[0] != "int":
                raise ParseError("expected an integer exponent", inner[2])
            return Fraction(-int(inner[1]))
        if tok[0] == "op" and tok[1] == "(":
            value = self.rational_literal()
            self.expect_op(")")
            return value
        raise ParseError("expected a rational exponent literal", tok[2])

    def rational_literal(self) -> Fraction:
        sign = 1
        tok = self.next()
        if tok[0] == "op" and tok[1] == "-":
            sign = -1
            tok = self.next()
        if tok[0] != "int":
            raise ParseError("expected an integer", tok[2])
        num = int(tok[1])
        nxt = self.peek()
        if nxt and nxt[0] == "op" and nxt[1] == "/":
            self.next()
            den_tok = self.next()
            if den_tok[0] != "int":
                raise ParseError("expected a denominator", den_tok[2])
            return Fraction(sign * num, int(den_tok[1]))
        return Fraction(sign * num)

    def atom(self) -> Ast:
        tok = self.next()
        if tok[0] == "int":
            return Const(Fraction(int(tok[1])))
        if tok[0] == "name":
            name = tok[1]
            if name == "eps":
                return Eps()
            if name == "t":
                return Aux()
            if name == "sqrt":
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Root(2, arg)
            if name == "root":
                self.expect_op("(")
                deg_tok = self.next()
                if deg_tok[0] != "int":
                    raise ParseError("root degree must be an integer", deg_tok[2])
                self.expect_op(",")
                arg = self.expr()
                self.expect_op(")")
                return Root(int(deg_tok[1]), arg)
            if name not in self.names:
                raise UnknownIdentifier(f"unknown identifier {name!r}")
            return Var(name)
        if tok[0] == "op" and tok[1] == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2])


def parse(text: str, names: frozenset[str] = frozenset()) -> Ast:
    """Parse expression text; unknown identifiers are rejected."""
    return _Parser(text, names).parse()


def print_ast(ast: Ast) -> str:
    """Fully parenthesized text form; ``parse(print_ast(a))`` recovers ``a``."""
    if isinstance(ast, Const):
        v = ast.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"
    if isinstance(ast, Eps):
        return "eps"
    if isinstance(ast, Aux):
        return "t"
    if isinstance(ast, Var):
        return ast.name
    if isinstance(ast, Add):
        return f"({print_ast(ast.left)} + {print_ast(ast.right)})"
    if isinstance(ast, Sub):
        return f"({print_ast(ast.left)} - {print_ast(ast.right)})"
    if isinstance(ast, Mul):
        return f"({print_ast(ast.left)} * {print_ast(ast.right)})"
    if isinstance(ast, Div):
        return f"({print_ast(ast.left)} / {print_ast(ast.right)})"
    if isinstance(ast, Pow):
        e = ast.exponent
        suffix = str(e.numerator) if e.denominator == 1 and e >= 0 else f"({e})"
        return f"{print_ast(ast.base)}^{suffix}"
    if isinstance(ast, Root):
        if ast.degree == 2:
            return f"sqrt({print_ast(ast.arg)})"
        return f"root({ast.degree}, {print_ast(ast.arg)})"
    if isinstance(ast, Neg):
        return f"(-{print_ast(ast.arg)})"
    raise TypeError(f"not an AST node: {ast!r}")


# -- evaluation ------------------------------------------------------------


def _eval_generic(
    ast: Ast,
    env: Mapping[str, object],
    lift: Callable[[Fraction], object],
    pow_rational: Callable[[object, Fraction], object],
    root: Callable[[object, int], object],
    div: Optional[Callable[[object, object], object]] = None,
):
    def go(node: Ast):
        if isinstance(node, Const):
            return lift(node.value)
        if isinstance(node, Eps):
            if "eps" not in env:
                raise UnknownIdentifier("'eps' is not available in this context")
            return env["eps"]
        if isinstance(node, Aux):
            if "t" not in env:
                raise UnknownIdentifier("'t' is not available in this context")
            return env["t"]
        if isinstance(node, Var):
            if node.name not in env:
                raise UnknownIdentifier(f"unbound variable {node.name!r}")
            return env[node.name]
        if isinstance(node, Add):
            return go(node.left) + go(node.right)
        if isinstance(node, Sub):
            return go(node.left) - go(node.right)
        if isinstance(node, Mul):
            return go(node.left) * go(node.right)
        if isinstance(node, Div):
            if div is not None:
                return div(go(node.left), go(node.right))
            return go(node.left) / go(node.right)
        if isinstance(node, Neg):
            return -go(node.arg)
        if isinstance(node, Pow):
            return pow_rational(go(node.base), node.exponent)
        if isinstance(node, Root):
            return root(go(node.arg), node.degree)
        raise TypeError(f"not an AST node: {node!r}")

    return go(ast)


def eval_series(
    ast: Ast,
    mode: GroupMode = GroupMode.AUX_INFINITESIMAL,
    env: Optional[Mapping[str, Series]] = None,
    precision: Optional[Exponent] = None,
) -> Series:
    """Evaluate to a series; ``eps`` and ``t`` are bound by the mode."""
    full_env: dict[str, object] = {
        "eps": Series.eps(mode),
        "t": Series.aux(mode),
    }
    if env:
        full_env.update(env)

    def pow_rational(value: Series, e: Fraction) -> Series:
        if e.denominator != 1:
            value = value.nth_root(e.denominator, precision)
        return value.pow_int(e.numerator, precision)

    def root(value: Series, n: int) -> Series:
        return value.nth_root(n, precision)

    def div(a: Series, b: Series) -> Series:
        return a.div(b, precision)

    return _eval_generic(
        ast, full_env, lambda q: Series.constant(q, mode), pow_rational, root, div
    )


def eval_rational_fn(
    ast: Ast, var: str = "x", mode: GroupMode = GroupMode.AUX_INFINITESIMAL
) -> RationalFn:
    """Evaluate to a one-variable rational function over the base field."""
    env = {
        var: RationalFn.x(mode),
        "eps": RationalFn.constant(Series.eps(mode), mode),
    }

    def pow_rational(value: RationalFn, e: Fraction) -> RationalFn:
        if e.denominator != 1:
            raise ParseError("rational functions allow only integer powers", 0)
        return value.pow_int(e.numerator)

    def root(value: RationalFn, n: int) -> RationalFn:
        raise ParseError("rational functions do not support roots", 0)

    return _eval_generic(
        ast, env, lambda q: RationalFn.constant(q, mode), pow_rational, root
    )


def eval_curve_fn(ast: Ast, mode: GroupMode = GroupMode.AUX_INFINITESIMAL) -> CurveFunction:
    """Evaluate to a rational function in the coordinates ``x`` and ``y``."""
    env = {
        "x": CurveFunction.x(mode),
        "y": CurveFunction.y(mode),
        "eps": CurveFunction.constant(Series.eps(mode), mode),
    }

    def pow_rational(value: CurveFunction, e: Fraction) -> CurveFunction:
        if e.denominator != 1:
            raise ParseError("curve functions allow only integer powers", 0)
        return value.pow_int(e.numerator)

    def root(value: CurveFunction, n: int) -> CurveFunction:
        raise ParseError("curve functions do not support roots", 0)

    return _eval_generic(
        ast, env, lambda q: CurveFunction.constant(q, mode), pow_rational, root
    )


# -- CLI text forms for composed objects -----------------------------------


_ERROR_ORDER_RE = re.compile(r"^(.*?)(?:(?<=^)|\+\s*)O\(([^()]*)\)\s*$", re.DOTALL)


def parse_series(
    text: str,
    mode: GroupMode = GroupMode.AUX_INFINITESIMAL,
    precision: Optional[Exponent] = None,
) -> Series:
    """Evaluate series text; a trailing ``+ O(monomial)`` sets the error order."""
    error_order = None
    m = _ERROR_ORDER_RE.match(text.strip())
    if m:
        bound = eval_series(parse(m.group(2)), mode, precision=precision)
        error_order = bound.valuation()
        text = m.group(1).strip().rstrip("+").strip()
        if not text:
            return Series.make(mode, [], error_order)
    value = eval_series(parse(text), mode, precision=precision)
    return value.with_error_order(error_order)


def parse_point_or_series(
    text: str,
    mode: GroupMode = GroupMode.AUX_INFINITESIMAL,
    precision: Optional[Exponent] = None,
) -> Union[Series, Point]:
    """A series, or a tuple ``(e1, e2, ...)`` of series as an affine point."""
    stripped = text.strip()
    if stripped.startswith("(") and stripped.endswith(")"):
        depth = 0
        parts = []
        start = 1
        for i, ch in enumerate(stripped):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 1:
                parts.append(stripped[start:i])
                start = i + 1
        if parts:
            parts.append(stripped[start:-1])
            coords = tuple(parse_series(p, mode, precision) for p in parts)
            return Point(coords)
    return parse_series(text, mode, precision)


_BALL_RE = re.compile(r"^\s*B\[([^\]]+)\]\((.*)\)\s*$", re.DOTALL)
_CUT_BALL_RE = re.compile(r"^\s*ball(\+|\-)\[([^\]]+)\]\((.*)\)\s*$", re.DOTALL)
_CUT_PRINCIPAL_RE = re.compile(r"^\s*cut(\+|\-)\((.*)\)\s*$", re.DOTALL)


def _parse_radius(text: str) -> GroupCut:
    body = text.strip()
    if body == "all":
        return GroupCut.whole_group()
    if body == "point":
        return GroupCut.singleton()
    if body.startswith(">="):
        return GroupCut.at_least(Fraction(body[2:].strip()))
    if body.startswith(">"):
        return GroupCut.greater_than(Fraction(body[1:].strip()))
    raise ParseError(f"unknown ball radius {body!r}", 0)


def parse_ball(
    text: str,
    mode: GroupMode = GroupMode.AUX_INFINITESIMAL,
    precision: Optional[Exponent] = None,
) -> Ball:
    """Text form ``B[>=1/2](center)``, ``B[>0](...)``, ``B[point](...)``, ``B[all](...)``."""
    m = _BALL_RE.match(text)
    if not m:
        raise ParseError("expected B[radius](center)", 0)
    radius = _parse_radius(m.group(1))
    center = parse_point_or_series(m.group(2), mode, precision)
    return Ball(center, radius)


def parse_cut(
    text: str,
    mode: GroupMode = GroupMode.AUX_INFINITESIMAL,
    precision: Optional[Exponent] = None,
) -> Cut:
    """Text forms ``cut+(expr)``, ``ball-[>0](expr)``, ``-inf``, ``+inf``."""
    stripped = text.strip()
    if stripped == "-inf":
        return MINUS_INFINITY
    if stripped in ("+inf", "inf"):
        return PLUS_INFINITY
    m = _CUT_PRINCIPAL_RE.match(stripped)
    if m:
        side = Side.PLUS if m.group(1) == "+" else Side.MINUS
        return PrincipalCut(parse_series(m.group(2), mode, precision), side)
    m = _CUT_BALL_RE.match(stripped)
    if m:
        side = Side.PLUS if m.group(1) == "+" else Side.MINUS
        radius = _parse_radius(m.group(2))
        center = parse_series(m.group(3), mode, precision)
        return BallEdgeCut(Ball(center, radius), side)
    raise ParseError("expected cut+(..), cut-(..), ball+[r](..), ball-[r](..), -inf or +inf", 0)


def parse_series_poly(
    text: str,
    var: str = "x",
    mode: GroupMode = GroupMode.AUX_INFINITESIMAL,
) -> SeriesPoly:
    """A polynomial in ``var``; the denominator must be constant."""
    f = eval_rational_fn(parse(text, frozenset([var])), var, mode)
    if f.den.degree != 0:
        raise ParseError("expected a polynomial, found a denominator", 0)
    inv = f.den.coefficient(0).inverse()
    return f.num.scale(inv)
