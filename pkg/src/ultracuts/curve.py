"""Plane-curve branches, cut projections, and the genus-2 worked example.

A branch realizes a curve cut as an explicit evaluation point
``(x_val, y_val)`` in the two-level extension, Newton-solved from the
curve equation.  Projecting along a rational coordinate function reads
off the cut of the base field that the function's value induces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .cuts import BallEdgeCut, Cut, Side, cut_equal, cut_to_json, induced_cut
from .errors import NewtonNoConvergence, PoleAtRealization, UltracutsError
from .places import place_equal
from .poly import SeriesPoly, newton_root
from .series import Exponent, GroupMode, RatLike, Series
from .ultrametric import Ball, GroupCut, Point, dist

#: Truncation for branch work: eight digits in the branch infinitesimal's
#: scale, the analogue of the base default eps^8.
DEFAULT_BRANCH_PRECISION = Exponent(Fraction(0), Fraction(16))

BivTerms = tuple[tuple[int, int, Series], ...]


def _normalize_terms(
    mode: GroupMode, terms: Mapping[tuple[int, int], Union[Series, RatLike]]
) -> BivTerms:
    out = []
    for (i, j), c in sorted(terms.items()):
        series = c if isinstance(c, Series) else Series.constant(c, mode)
        if not series.is_provably_zero:
            out.append((i, j, series.as_mode(mode)))
    return tuple(out)


@dataclass(frozen=True)
class PlaneCurve:
    """Zero locus of a bivariate polynomial with base-field coefficients."""

    mode: GroupMode
    terms: BivTerms  # (x-degree, y-degree, coefficient)

    @staticmethod
    def make(
        terms: Mapping[tuple[int, int], Union[Series, RatLike]],
        mode: GroupMode = GroupMode.AUX_INFINITESIMAL,
    ) -> "PlaneCurve":
        normalized = _normalize_terms(mode, terms)
        if not normalized:
            raise ValueError("curve polynomial must not vanish identically")
        if all(j == 0 for _, j, _ in normalized):
            raise ValueError("curve polynomial must involve y")
        return PlaneCurve(mode, normalized)

    def substitute_x(self, x_val: Series) -> SeriesPoly:
        """The univariate polynomial in y obtained by fixing x."""
        y_degree = max(j for _, j, _ in self.terms)
        coeffs = [Series.zero(x_val.mode) for _ in range(y_degree + 1)]
        for i, j, c in self.terms:
            coeffs[j] = coeffs[j] + c.as_mode(x_val.mode) * x_val.pow_int(i)
        return SeriesPoly.make(x_val.mode, coeffs)

    def evaluate(self, x_val: Series, y_val: Series) -> Series:
        return self.substitute_x(x_val).evaluate(y_val)


@dataclass(frozen=True)
class CurveBranch:
    """A Newton-solved series point of the curve with its sign signature."""

    curve: PlaneCurve
    x_val: Series
    y_val: Series
    signature: tuple[int, int]

    def point(self) -> Point:
        return Point((self.x_val, self.y_val))

    def base_point(self) -> Point:
        """The base-field shadow: coordinates truncated to aux-free terms."""
        return Point((_pure_part(self.x_val), _pure_part(self.y_val)))


def _pure_part(s: Series) -> Series:
    return Series.make(s.mode, [(e, c) for e, c in s.terms if e.is_pure])


@dataclass(frozen=True)
class CurveCut:
    """One-sided cut of the curve along a branch."""

    branch: CurveBranch


def newton_branch(
    curve: PlaneCurve,
    x_val: Series,
    y_seed: Series,
    precision: Optional[Exponent] = None,
) -> CurveBranch:
    """Solve the curve for y above ``x_val`` starting from ``y_seed``.

    The seed must satisfy the simple-root condition
    ``v(p(x, y0)) > 2 v(dp/dy(x, y0))``.
    """
    target = precision if precision is not None else DEFAULT_BRANCH_PRECISION
    q = curve.substitute_x(x_val)
    if q.degree < 1:
        raise NewtonNoConvergence("the curve is constant above this x value")
    y_val = newton_root(q, y_seed.as_mode(x_val.mode), target)
    signature = (x_val.sign(), y_val.sign())
    return CurveBranch(curve, x_val, y_val, signature)


@dataclass(frozen=True)
class CurveFunction:
    """Rational function in the two coordinate functions."""

    mode: GroupMode
    num: BivTerms
    den: BivTerms

    @staticmethod
    def make(
        num: Mapping[tuple[int, int], Union[Series, RatLike]],
        den: Optional[Mapping[tuple[int, int], Union[Series, RatLike]]] = None,
        mode: GroupMode = GroupMode.AUX_INFINITESIMAL,
    ) -> "CurveFunction":
        den = den if den is not None else {(0, 0): 1}
        n = _normalize_terms(mode, num)
        d = _normalize_terms(mode, den)
        if not d:
            raise ZeroDivisionError("curve function with zero denominator")
        return CurveFunction(mode, n, d)

    @staticmethod
    def x(mode: GroupMode = GroupMode.AUX_INFINITESIMAL) -> "CurveFunction":
        return CurveFunction.make({(1, 0): 1}, mode=mode)

    @staticmethod
    def y(mode: GroupMode = GroupMode.AUX_INFINITESIMAL) -> "CurveFunction":
        return CurveFunction.make({(0, 1): 1}, mode=mode)

    @staticmethod
    def constant(value: Union[Series, RatLike], mode: GroupMode = GroupMode.AUX_INFINITESIMAL) -> "CurveFunction":
        return CurveFunction.make({(0, 0): value}, mode=mode)

    @property
    def is_zero(self) -> bool:
        return not self.num

    def _dict(self, part: BivTerms) -> dict[tuple[int, int], Series]:
        return {(i, j): c for i, j, c in part}

    def _combine(self, a: BivTerms, b: BivTerms) -> BivTerms:
        acc: dict[tuple[int, int], Series] = {}
        for i1, j1, c1 in a:
            for i2, j2, c2 in b:
                key = (i1 + i2, j1 + j2)
                prod = c1 * c2
                acc[key] = acc[key] + prod if key in acc else prod
        return _normalize_terms(self.mode, acc)

    def _sum(self, a: BivTerms, b: BivTerms, negate_b: bool = False) -> BivTerms:
        acc = dict(self._dict(a))
        for (i, j), c in self._dict(b).items():
            c = -c if negate_b else c
            key = (i, j)
            acc[key] = acc[key] + c if key in acc else c
        return _normalize_terms(self.mode, acc)

    def __add__(self, other: Union["CurveFunction", RatLike]) -> "CurveFunction":
        other = self._coerce(other)
        num = self._sum(self._combine(self.num, other.den), self._combine(other.num, self.den))
        return CurveFunction(self.mode, num, self._combine(self.den, other.den))

    def __neg__(self) -> "CurveFunction":
        return CurveFunction(
            self.mode, tuple((i, j, -c) for i, j, c in self.num), self.den
        )

    def __sub__(self, other: Union["CurveFunction", RatLike]) -> "CurveFunction":
        return self + (-self._coerce(other))

    def __mul__(self, other: Union["CurveFunction", RatLike]) -> "CurveFunction":
        other = self._coerce(other)
        return CurveFunction(
            self.mode,
            self._combine(self.num, other.num),
            self._combine(self.den, other.den),
        )

    def __truediv__(self, other: Union["CurveFunction", RatLike]) -> "CurveFunction":
        other = self._coerce(other)
        if not other.num:
            raise ZeroDivisionError("division by the zero curve function")
        return CurveFunction(
            self.mode,
            self._combine(self.num, other.den),
            self._combine(self.den, other.num),
        )

    def pow_int(self, k: int) -> "CurveFunction":
        if k < 0:
            return CurveFunction(self.mode, self.den, self.num).pow_int(-k)
        result = CurveFunction.constant(1, self.mode)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def _coerce(self, other: Union["CurveFunction", RatLike]) -> "CurveFunction":
        if isinstance(other, CurveFunction):
            return other
        return CurveFunction.constant(other, self.mode)

    def _eval_part(self, part: BivTerms, x_val: Series, y_val: Series) -> Series:
        acc = Series.zero(x_val.mode)
        for i, j, c in part:
            acc = acc + c.as_mode(x_val.mode) * x_val.pow_int(i) * y_val.pow_int(j)
        return acc

    def evaluate(
        self, x_val: Series, y_val: Series, precision: Optional[Exponent] = None
    ) -> Series:
        n = self._eval_part(self.num, x_val, y_val)
        d = self._eval_part(self.den, x_val, y_val)
        if d.is_provably_zero:
            raise PoleAtRealization("curve function denominator vanished on the branch")
        return n.div(d, precision)

    def __str__(self) -> str:
        def fmt(part: BivTerms) -> str:
            if not part:
                return "0"
            chunks = []
            for i, j, c in part:
                mono = "*".join(
                    ([f"x^{i}" if i > 1 else "x"] if i else [])
                    + ([f"y^{j}" if j > 1 else "y"] if j else [])
                )
                coeff = f"({c})"
                chunks.append(f"{coeff}*{mono}" if mono else coeff)
            return " + ".join(chunks)

        if self.den == ((0, 0, Series.constant(1, self.mode)),):
            return fmt(self.num)
        return f"({fmt(self.num)}) / ({fmt(self.den)})"


def project_cut(
    curve_cut: CurveCut,
    fn: CurveFunction,
    precision: Optional[Exponent] = None,
) -> Cut:
    """The cut of the base field induced by the function's value on the branch."""
    branch = curve_cut.branch
    target = precision if precision is not None else DEFAULT_BRANCH_PRECISION
    value = fn.evaluate(branch.x_val, branch.y_val, target)
    return induced_cut(value)


def rho(p: Point, q: Point) -> Series:
    """Sum of squared coordinate differences; its valuation doubles d_inf."""
    if p.dim != q.dim:
        from .errors import DimensionMismatch

        raise DimensionMismatch(f"dimensions {p.dim} and {q.dim}")
    acc = Series.zero(p.mode)
    for a, b in zip(p.coords, q.coords):
        diff = a - b
        acc = acc + diff * diff
    return acc


def rho_function(p: Point) -> CurveFunction:
    """The squared-distance-to-p function as a function on the plane."""
    if p.dim != 2:
        from .errors import DimensionMismatch

        raise DimensionMismatch("plane curves need two-coordinate anchors")
    px, py = p.coords
    mode = p.mode
    x = CurveFunction.x(mode)
    y = CurveFunction.y(mode)
    dx = x - CurveFunction.constant(px, mode)
    dy = y - CurveFunction.constant(py, mode)
    return dx * dx + dy * dy


def rho_place_witness(
    c1: CurveCut,
    c2: CurveCut,
    anchor: Optional[Point] = None,
    precision: Optional[Exponent] = None,
) -> bool:
    """Whether both cuts project to one cut along the squared distance to the anchor.

    The anchor defaults to the base-field shadow of the first branch.  A
    shared projection witnesses that one affine ball induces both cuts; it
    is necessary but not sufficient for place equality.
    """
    p = anchor if anchor is not None else c1.branch.base_point()
    fn = rho_function(p)
    return cut_equal(project_cut(c1, fn, precision), project_cut(c2, fn, precision))


class CurveComparison(Enum):
    EQUAL = "equal"
    DISTINGUISHED = "distinguished"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CurvePlaceResult:
    status: CurveComparison
    distinguished_by: Optional[CurveFunction] = None


def place_equal_on_curve(
    c1: CurveCut,
    c2: CurveCut,
    fns: Sequence[CurveFunction],
    anchor: Optional[Point] = None,
    precision: Optional[Exponent] = None,
) -> CurvePlaceResult:
    """Compare the places of two curve cuts through finitely many projections.

    Any function whose projections are not edges of one ball distinguishes
    the places.  Agreement of all supplied functions plus the squared
    distance witness is reported as equality; failures to evaluate leave
    the comparison inconclusive.
    """
    for fn in fns:
        try:
            p1 = project_cut(c1, fn, precision)
            p2 = project_cut(c2, fn, precision)
        except UltracutsError:
            return CurvePlaceResult(CurveComparison.INCONCLUSIVE, fn)
        if not place_equal(p1, p2):
            return CurvePlaceResult(CurveComparison.DISTINGUISHED, fn)
    p = anchor if anchor is not None else c1.branch.base_point()
    witness_fn = rho_function(p)
    try:
        w1 = project_cut(c1, witness_fn, precision)
        w2 = project_cut(c2, witness_fn, precision)
    except UltracutsError:
        return CurvePlaceResult(CurveComparison.INCONCLUSIVE)
    if not place_equal(w1, w2):
        return CurvePlaceResult(CurveComparison.DISTINGUISHED, witness_fn)
    return CurvePlaceResult(CurveComparison.EQUAL)


# -- the worked genus-2 example ----------------------------------------


@dataclass(frozen=True)
class Genus2Branch:
    signature: tuple[int, int]
    x_val: Series
    y_val: Series
    projections: dict[str, Cut]
    identity_residual_terms: int  # known terms of the z-identity residual


@dataclass(frozen=True)
class Genus2Report:
    parameter: Series
    curve: PlaneCurve
    branches: tuple[Genus2Branch, ...]
    pairing: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    pairs_have_distinct_place: bool
    x_y_project_to_origin_ball: bool

    def to_json(self) -> dict:
        return {
            "parameter": self.parameter.to_json(),
            "branches": [
                {
                    "signature": list(b.signature),
                    "x": b.x_val.to_json(),
                    "y": b.y_val.to_json(),
                    "projections": {
                        name: cut_to_json(cut) for name, cut in b.projections.items()
                    },
                    "identity_residual_terms": b.identity_residual_terms,
                }
                for b in self.branches
            ],
            "pairing": [[list(a), list(b)] for a, b in self.pairing],
            "pairs_have_distinct_place": self.pairs_have_distinct_place,
            "x_y_project_to_origin_ball": self.x_y_project_to_origin_ball,
        }

    def to_text(self) -> str:
        lines = [
            "curve: y^2 + (x^2 - a^2)(x^2 - 1) = 0 with a = eps",
            "four branches above x = +-t (t the branch infinitesimal):",
        ]
        for b in self.branches:
            sx, sy = b.signature
            lines.append(f"  branch ({sx:+d},{sy:+d}):")
            lines.append(f"    x = {b.x_val}")
            lines.append(f"    y = {b.y_val}")
            for name in ("x", "y", "z"):
                lines.append(f"    pi_{name} -> {b.projections[name]}")
            lines.append(
                "    (z+1)(z-1) identity residual: "
                + ("0 to working precision" if b.identity_residual_terms == 0 else "NONZERO")
            )
        lines.append(
            "projections pi_x, pi_y all land on edges of B[>0](0): "
            + ("yes" if self.x_y_project_to_origin_ball else "NO")
        )
        for a, b in self.pairing:
            lines.append(
                f"same place: ({a[0]:+d},{a[1]:+d}) ~ ({b[0]:+d},{b[1]:+d})"
            )
        lines.append(
            "the two pairs define distinct places: "
            + ("yes" if self.pairs_have_distinct_place else "NO")
        )
        return "\n".join(lines)


def genus2_example(precision: Optional[Exponent] = None) -> Genus2Report:
    """Branches, projections and place pairing of the curve
    ``y^2 + (x^2 - a^2)(x^2 - 1) = 0`` with infinitesimal ``a``.
    """
    mode = GroupMode.AUX_INFINITESIMAL
    target = precision if precision is not None else DEFAULT_BRANCH_PRECISION
    a = Series.eps(mode)
    a2 = a * a
    # y^2 + x^4 - (1 + a^2) x^2 + a^2
    curve = PlaneCurve.make(
        {(0, 2): 1, (4, 0): 1, (2, 0): -(1 + a2), (0, 0): a2},
        mode,
    )
    t = Series.aux(mode)  # x-scale infinitesimal: above a, below every rational
    z_fn = CurveFunction.y(mode) / CurveFunction.x(mode)
    fx, fy = CurveFunction.x(mode), CurveFunction.y(mode)

    branches = []
    cuts_by_sig: dict[tuple[int, int], CurveCut] = {}
    origin_ball_ok = True
    origin_edge = BallEdgeCut(
        Ball(Series.zero(mode), GroupCut.all_positive()), Side.PLUS
    )
    for sx in (1, -1):
        for sy in (1, -1):
            x_val = t if sx == 1 else -t
            y_seed = t if sy == 1 else -t
            branch = newton_branch(curve, x_val, y_seed, target)
            assert branch.signature == (sx, sy)
            curve_cut = CurveCut(branch)
            cuts_by_sig[(sx, sy)] = curve_cut
            projections = {
                "x": project_cut(curve_cut, fx, target),
                "y": project_cut(curve_cut, fy, target),
                "z": project_cut(curve_cut, z_fn, target),
            }
            for name in ("x", "y"):
                if not place_equal(projections[name], origin_edge):
                    origin_ball_ok = False
            # (z+1)(z-1) = a^2 - x^2 - (a/x)^2 on the curve, exactly to precision
            z = branch.y_val.div(branch.x_val, target)
            lhs = (z + 1) * (z - 1)
            rhs = a2.as_mode(mode) - x_val * x_val - (a.div(x_val)) * (a.div(x_val))
            residual = lhs - rhs
            branches.append(
                Genus2Branch(
                    (sx, sy),
                    branch.x_val,
                    branch.y_val,
                    projections,
                    len(residual.terms),
                )
            )

    pairing = (((1, 1), (-1, -1)), ((1, -1), (-1, 1)))
    for a_sig, b_sig in pairing:
        result = place_equal_on_curve(
            cuts_by_sig[a_sig], cuts_by_sig[b_sig], [fx, fy, z_fn], precision=target
        )
        assert result.status is CurveComparison.EQUAL
    cross = place_equal_on_curve(
        cuts_by_sig[(1, 1)], cuts_by_sig[(1, -1)], [z_fn], precision=target
    )
    pairs_distinct = cross.status is CurveComparison.DISTINGUISHED

    return Genus2Report(
        parameter=a,
        curve=curve,
        branches=tuple(branches),
        pairing=pairing,
        pairs_have_distinct_place=pairs_distinct,
        x_y_project_to_origin_ball=origin_ball_ok,
    )
