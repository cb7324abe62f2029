"""Command-line interface exposing every operation of the library.

Exit codes: 0 on success, 2 when an answer is indeterminate at the working
precision (retry with a finer ``--precision``), 1 on any other error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cuts import cut_to_json, cut_equal
from .curve import (
    CurveComparison,
    CurveCut,
    CurveBranch,
    PlaneCurve,
    genus2_example,
    newton_branch,
    place_equal_on_curve,
    project_cut,
)
from .errors import IndeterminateAtPrecision, UltracutsError
from .expr import (
    eval_curve_fn,
    eval_rational_fn,
    parse,
    parse_ball,
    parse_cut,
    parse_point_or_series,
    parse_series,
    parse_series_poly,
)
from .places import classify_index, ordering_sign, place_equal, place_value
from .realroots import Interval, monotonic_decomposition, sturm_count
from .series import (
    INFINITY,
    Exponent,
    GroupMode,
    Series,
    format_series,
)
from .ultrametric import Point, ball_member, dist, dist_p

PRECISION_ENV_VAR = "ULTRACUTS_PRECISION"


@dataclass(frozen=True)
class Config:
    """Working precision and output selection for one invocation."""

    precision: Exponent  # base-scale truncation for series expansions
    mode: GroupMode
    as_json: bool

    def __post_init__(self) -> None:
        if self.precision.base <= 0:
            raise ValueError("precision must be positive in the base component")

    @property
    def branch_precision(self) -> Exponent:
        """Equivalent truncation in the branch-infinitesimal scale."""
        return Exponent(Fraction(0), 2 * self.precision.base)


def _parse_args(argv: Optional[Sequence[str]]) -> argparse.Namespace:
    # SUPPRESS keeps a repeated option from clobbering a value that was
    # already set before the subcommand.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--precision",
        default=argparse.SUPPRESS,
        help="truncation exponent p or p/q for non-terminating expansions "
        f"(default 8; env {PRECISION_ENV_VAR})",
    )
    common.add_argument(
        "--mode",
        choices=[m.value for m in GroupMode],
        default=argparse.SUPPRESS,
        help="ordering of the two exponent levels for series literals",
    )
    common.add_argument(
        "--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON output"
    )

    parser = argparse.ArgumentParser(
        prog="ultracuts",
        parents=[common],
        description="Exact arithmetic, ultrametric balls, cuts and places "
        "over a nonarchimedean real closed field model.",
    )
    parser.set_defaults(precision=None, mode=None, json=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, parent: object, help: str):
        return parent.add_parser(name, parents=[common], help=help)

    p = add("eval", sub, "evaluate a series expression")
    p.add_argument("expr")
    p = add("val", sub, "valuation of a series expression")
    p.add_argument("expr")
    p = add("sign", sub, "sign of a series expression")
    p.add_argument("expr")
    p = add("std", sub, "standard part of a series expression")
    p.add_argument("expr")

    p = add("dist", sub, "ultrametric distance of two elements or points")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--p", dest="p_norm", default=None, help="positive integer or 'inf'")

    ball = sub.add_parser("ball", help="ball operations").add_subparsers(
        dest="ball_command", required=True
    )
    p = add("member", ball, "membership of an element in a ball")
    p.add_argument("ball")
    p.add_argument("element")

    cut = sub.add_parser("cut", help="cut operations").add_subparsers(
        dest="cut_command", required=True
    )
    p = add("classify", cut, "value-group doubling index of a cut")
    p.add_argument("cut")
    p = add("compare", cut, "equality of two cuts")
    p.add_argument("first")
    p.add_argument("second")

    ordering = sub.add_parser("ordering", help="induced-ordering operations").add_subparsers(
        dest="ordering_command", required=True
    )
    p = add("sign", ordering, "sign of a rational function at a cut")
    p.add_argument("cut")
    p.add_argument("func")

    place = sub.add_parser("place", help="place operations").add_subparsers(
        dest="place_command", required=True
    )
    p = add("value", place, "place value of a rational function at a cut")
    p.add_argument("cut")
    p.add_argument("func")
    p = add("equal", place, "whether two cuts induce one place")
    p.add_argument("first")
    p.add_argument("second")

    p = add("sturm", sub, "count real roots of a polynomial in x")
    p.add_argument("poly")
    p.add_argument("lo", nargs="?", default=None)
    p.add_argument("hi", nargs="?", default=None)

    p = add("monotone", sub, "monotonic decomposition of a rational function")
    p.add_argument("func")

    p = add("branch", sub, "Newton-solve a curve branch")
    p.add_argument("curve")
    p.add_argument("x_val")
    p.add_argument("y_seed")

    p = add("project", sub, "project a branch cut along a function of x,y")
    p.add_argument("branch", help="branch JSON or 'CURVE; XVAL; YSEED'")
    p.add_argument("func")

    p = add("place-equal-curve", sub, "compare the places of two branch cuts")
    p.add_argument("first", help="branch JSON or 'CURVE; XVAL; YSEED'")
    p.add_argument("second", help="branch JSON or 'CURVE; XVAL; YSEED'")
    p.add_argument("--fns", default="", help="comma-separated functions of x,y")

    example = sub.add_parser("example", help="reproduce a worked example").add_subparsers(
        dest="example_command", required=True
    )
    add("genus2", example, "the genus-2 curve example")

    return parser.parse_args(argv)


def _config(args: argparse.Namespace) -> Config:
    raw = args.precision
    if raw is None:
        raw = os.environ.get(PRECISION_ENV_VAR)
    base = Fraction(raw) if raw is not None else Fraction(8)
    mode = GroupMode(args.mode) if args.mode else GroupMode.AUX_INFINITESIMAL
    return Config(
        precision=Exponent(base, Fraction(0)),
        mode=mode,
        as_json=args.json,
    )


def _emit(cfg: Config, text: str, payload: object) -> None:
    if cfg.as_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _exponent_payload(e: Optional[Exponent]) -> object:
    if e is None:
        return "inf"
    return {"base": str(e.base), "aux": str(e.aux)}


def _exponent_text(e: Optional[Exponent]) -> str:
    if e is None:
        return "inf"
    if e.aux == 0:
        return str(e.base)
    return f"({e.base},{e.aux})"


def _place_payload(v) -> object:
    return "inf" if v is INFINITY else str(v)


def _curve_from_expr(text: str, cfg: Config) -> PlaneCurve:
    fn = eval_curve_fn(parse(text, frozenset({"x", "y"})), cfg.mode)
    if fn.den != ((0, 0, Series.constant(1, cfg.mode)),):
        raise UltracutsError("a curve must be polynomial in x and y")
    return PlaneCurve.make({(i, j): c for i, j, c in fn.num}, cfg.mode)


def _branch_to_json(branch: CurveBranch) -> dict:
    return {
        "curve": [[i, j, c.to_json()] for i, j, c in branch.curve.terms],
        "x": branch.x_val.to_json(),
        "y": branch.y_val.to_json(),
        "signature": list(branch.signature),
    }


def _branch_from_arg(text: str, cfg: Config) -> CurveBranch:
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        curve = PlaneCurve.make(
            {(i, j): Series.from_json(c) for i, j, c in data["curve"]}, cfg.mode
        )
        x_val = Series.from_json(data["x"])
        y_val = Series.from_json(data["y"])
        return CurveBranch(curve, x_val, y_val, (x_val.sign(), y_val.sign()))
    parts = stripped.split(";")
    if len(parts) != 3:
        raise UltracutsError(
            "branch argument must be JSON or 'CURVE; XVAL; YSEED'"
        )
    curve = _curve_from_expr(parts[0], cfg)
    x_val = parse_series(parts[1], cfg.mode, cfg.precision)
    y_seed = parse_series(parts[2], cfg.mode, cfg.precision)
    return newton_branch(curve, x_val, y_seed, cfg.branch_precision)


def _run(args: argparse.Namespace, cfg: Config) -> None:
    mode, prec = cfg.mode, cfg.precision
    if args.command == "eval":
        s = parse_series(args.expr, mode, prec)
        _emit(cfg, format_series(s), s.to_json())
    elif args.command == "val":
        v = parse_series(args.expr, mode, prec).valuation()
        _emit(cfg, _exponent_text(v), _exponent_payload(v))
    elif args.command == "sign":
        _emit(cfg, *(lambda s: (str(s), s))(parse_series(args.expr, mode, prec).sign()))
    elif args.command == "std":
        v = parse_series(args.expr, mode, prec).standard_part()
        _emit(cfg, str(v), _place_payload(v))
    elif args.command == "dist":
        left = parse_point_or_series(args.left, mode, prec)
        right = parse_point_or_series(args.right, mode, prec)
        if args.p_norm is None:
            d = dist(left, right)
        else:
            p = math.inf if args.p_norm == "inf" else int(args.p_norm)
            if not isinstance(left, Point):
                left, right = Point((left,)), Point((right,))
            d = dist_p(left, right, p)
        _emit(cfg, _exponent_text(d), _exponent_payload(d))
    elif args.command == "ball":
        ball = parse_ball(args.ball, mode, prec)
        q = parse_point_or_series(args.element, mode, prec)
        member = ball_member(ball, q)
        _emit(cfg, "true" if member else "false", member)
    elif args.command == "cut":
        if args.cut_command == "classify":
            idx = classify_index(parse_cut(args.cut, mode, prec))
            _emit(cfg, str(idx), idx)
        else:
            equal = cut_equal(
                parse_cut(args.first, mode, prec), parse_cut(args.second, mode, prec)
            )
            _emit(cfg, "equal" if equal else "different", equal)
    elif args.command == "ordering":
        cut = parse_cut(args.cut, mode, prec)
        func = eval_rational_fn(parse(args.func, frozenset({"x"})), "x", mode)
        s = ordering_sign(cut, func)
        _emit(cfg, str(s), s)
    elif args.command == "place":
        if args.place_command == "value":
            cut = parse_cut(args.cut, mode, prec)
            func = eval_rational_fn(parse(args.func, frozenset({"x"})), "x", mode)
            v = place_value(cut, func)
            _emit(cfg, str(v), _place_payload(v))
        else:
            equal = place_equal(
                parse_cut(args.first, mode, prec), parse_cut(args.second, mode, prec)
            )
            _emit(cfg, "true" if equal else "false", equal)
    elif args.command == "sturm":
        poly = parse_series_poly(args.poly, "x", mode)
        lo = None if args.lo in (None, "-inf") else parse_series(args.lo, mode, prec)
        hi = None if args.hi in (None, "+inf", "inf") else parse_series(args.hi, mode, prec)
        count = sturm_count(poly, Interval(lo, hi))
        _emit(cfg, str(count), count)
    elif args.command == "monotone":
        func = eval_rational_fn(parse(args.func, frozenset({"x"})), "x", mode)
        parts = monotonic_decomposition(func)
        text = "\n".join(f"{interval}  {direction.value}" for interval, direction in parts)
        payload = [
            {
                "lo": None if i.lo is None else format_series(i.lo),
                "hi": None if i.hi is None else format_series(i.hi),
                "direction": d.value,
            }
            for i, d in parts
        ]
        _emit(cfg, text, payload)
    elif args.command == "branch":
        curve = _curve_from_expr(args.curve, cfg)
        x_val = parse_series(args.x_val, mode, prec)
        y_seed = parse_series(args.y_seed, mode, prec)
        branch = newton_branch(curve, x_val, y_seed, cfg.branch_precision)
        text = (
            f"x = {branch.x_val}\ny = {branch.y_val}\n"
            f"signature = ({branch.signature[0]:+d},{branch.signature[1]:+d})"
        )
        _emit(cfg, text, _branch_to_json(branch))
    elif args.command == "project":
        branch = _branch_from_arg(args.branch, cfg)
        func = eval_curve_fn(parse(args.func, frozenset({"x", "y"})), cfg.mode)
        cut = project_cut(CurveCut(branch), func, cfg.branch_precision)
        _emit(cfg, str(cut), cut_to_json(cut))
    elif args.command == "place-equal-curve":
        first = CurveCut(_branch_from_arg(args.first, cfg))
        second = CurveCut(_branch_from_arg(args.second, cfg))
        names = [f for f in args.fns.split(",") if f.strip()]
        fns = [
            eval_curve_fn(parse(f, frozenset({"x", "y"})), cfg.mode) for f in names
        ]
        result = place_equal_on_curve(first, second, fns, precision=cfg.branch_precision)
        if result.status is CurveComparison.EQUAL:
            text, payload = "equal", {"status": "equal"}
        elif result.status is CurveComparison.DISTINGUISHED:
            which = names[fns.index(result.distinguished_by)] if result.distinguished_by in fns else "rho"
            text = f"distinguished by {which}"
            payload = {"status": "distinguished", "function": which}
        else:
            text, payload = "inconclusive", {"status": "inconclusive"}
        _emit(cfg, text, payload)
    elif args.command == "example":
        report = genus2_example(cfg.branch_precision)
        _emit(cfg, report.to_text(), report.to_json())
    else:  # pragma: no cover
        raise UltracutsError(f"unknown command {args.command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parse_args(argv)
    try:
        cfg = _config(args)
        _run(args, cfg)
    except IndeterminateAtPrecision as err:
        print(
            f"indeterminate at the working precision: {err}\n"
            "hint: retry with a finer --precision",
            file=sys.stderr,
        )
        return 2
    except UltracutsError as err:
        print(f"error: {err.__class__.__name__}: {err}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
