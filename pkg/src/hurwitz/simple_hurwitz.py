"""One-part profiles: series H~_g = sum_d H^g_{(1^d)} x^d/(2d+2g-2)! and the
operator D = x d/dx, represented exactly in the variable W = 1/(1-w) where
w = x e^w.

In W-coordinates D acts as W^2(W-1) d/dW, so D^n H~_g is a Laurent
polynomial in W (with a single log W adjoined for the one series that needs
it), and questions about recurrences among the D^n H~_g become exact linear
algebra over the rationals.  Coefficient extraction [x^d] goes through the
Lagrange double sum, independently of any series expansion.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .algebra import (
    ExactSeries,
    SeriesRing,
    Truncation,
    VarSet,
    lagrange_coeff,
    parse_rational,
    rational_str,
)
from .golden import (
    A_COMBINATION_G3,
    P3_POLY,
    P3_PREFACTOR_DENOM,
    PINNED_W_SERIES,
)
from .linalg import nullspace
from .oracle import HurwitzTable
from .partitions import Partition, aut_count

__all__ = [
    "WExpr",
    "LogProductError",
    "wexpr_for",
    "wexpr_from_ansatz",
    "wexpr_to_xseries",
    "extract_coeff",
    "family_wexpr",
    "search_recursions",
    "differential_identity_wexpr",
    "differential_identity_residuals",
    "verify_recurrence",
    "simple_hurwitz_value",
    "closed_form_simple",
    "genus3_a_form",
    "genus3_p_form",
    "a_series_coeff",
]


class LogProductError(ArithmeticError):
    """Product would need log^2 W, which the two-slot representation lacks."""


class WExpr:
    """c_j W^j sums plus an optional log W multiple: laurent + logpart.

    Immutable by convention: all operations return new instances.

    >>> e = WExpr({1: Fraction(1)}, {})          # W
    >>> (e * e).laurent
    {2: Fraction(1, 1)}
    >>> e.apply_D().laurent                      # D W = W^3 - W^2
    {3: Fraction(1, 1), 2: Fraction(-1, 1)}
    """

    __slots__ = ("laurent", "logpart")

    def __init__(self, laurent: dict[int, Fraction], logpart: dict[int, Fraction] | None = None):
        self.laurent = {j: Fraction(c) for j, c in laurent.items() if c}
        self.logpart = {j: Fraction(c) for j, c in (logpart or {}).items() if c}

    @classmethod
    def zero(cls) -> "WExpr":
        return cls({})

    @classmethod
    def const(cls, c: Fraction | int) -> "WExpr":
        return cls({0: Fraction(c)})

    def is_zero(self) -> bool:
        return not self.laurent and not self.logpart

    def is_log_free(self) -> bool:
        return not self.logpart

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WExpr):
            return NotImplemented
        return self.laurent == other.laurent and self.logpart == other.logpart

    def __hash__(self):
        return hash(
            (tuple(sorted(self.laurent.items())), tuple(sorted(self.logpart.items())))
        )

    def __add__(self, other: "WExpr") -> "WExpr":
        lau = dict(self.laurent)
        for j, c in other.laurent.items():
            lau[j] = lau.get(j, Fraction(0)) + c
        log = dict(self.logpart)
        for j, c in other.logpart.items():
            log[j] = log.get(j, Fraction(0)) + c
        return WExpr(lau, log)

    def __neg__(self) -> "WExpr":
        return WExpr(
            {j: -c for j, c in self.laurent.items()},
            {j: -c for j, c in self.logpart.items()},
        )

    def __sub__(self, other: "WExpr") -> "WExpr":
        return self + (-other)

    def scale(self, c: Fraction | int) -> "WExpr":
        c = Fraction(c)
        return WExpr(
            {j: c * v for j, v in self.laurent.items()},
            {j: c * v for j, v in self.logpart.items()},
        )

    def __mul__(self, other: "WExpr") -> "WExpr":
        if self.logpart and other.logpart:
            raise LogProductError("cannot multiply two log-bearing expressions")
        lau: dict[int, Fraction] = {}
        for j1, c1 in self.laurent.items():
            for j2, c2 in other.laurent.items():
                j = j1 + j2
                lau[j] = lau.get(j, Fraction(0)) + c1 * c2
        log: dict[int, Fraction] = {}
        for own, src in ((self.logpart, other.laurent), (other.logpart, self.laurent)):
            for j1, c1 in own.items():
                for j2, c2 in src.items():
                    j = j1 + j2
                    log[j] = log.get(j, Fraction(0)) + c1 * c2
        return WExpr(lau, log)

    def apply_D(self) -> "WExpr":
        """D = W^2(W-1) d/dW: sends W^j to j(W^{j+2} - W^{j+1}) and log W
        to W^2 - W."""
        lau: dict[int, Fraction] = {}
        log: dict[int, Fraction] = {}

        def bump(target: dict[int, Fraction], j: int, c: Fraction) -> None:
            target[j] = target.get(j, Fraction(0)) + c

        for j, c in self.laurent.items():
            if j:
                bump(lau, j + 2, j * c)
                bump(lau, j + 1, -j * c)
        for j, c in self.logpart.items():
            if j:
                bump(log, j + 2, j * c)
                bump(log, j + 1, -j * c)
            bump(lau, j + 2, c)
            bump(lau, j + 1, -c)
        return WExpr(lau, log)

    def degree(self) -> int:
        """Largest W-exponent with a nonzero coefficient (log rows included)."""
        exps = list(self.laurent) + list(self.logpart)
        if not exps:
            raise ValueError("zero expression has no degree")
        return max(exps)

    def min_exponent(self) -> int:
        exps = list(self.laurent) + list(self.logpart)
        if not exps:
            raise ValueError("zero expression has no exponents")
        return min(exps)

    def to_json_obj(self) -> dict:
        return {
            "laurent": {str(j): rational_str(c) for j, c in sorted(self.laurent.items())},
            "log": {str(j): rational_str(c) for j, c in sorted(self.logpart.items())},
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "WExpr":
        return cls(
            {int(j): parse_rational(c) for j, c in obj.get("laurent", {}).items()},
            {int(j): parse_rational(c) for j, c in obj.get("log", {}).items()},
        )

    def __repr__(self):
        return f"WExpr({self.laurent!r}, {self.logpart!r})"


def _pinned(g: int, n: int) -> WExpr:
    data = PINNED_W_SERIES[(g, n)]
    return WExpr(data["laurent"], data["log"])


def wexpr_for(g: int, n: int, form=None) -> WExpr:
    """D^n H~_g as a WExpr.

    Bases: D H~_0, H~_1 (log-bearing), H~_2, H~_3, extended upward by
    repeated application of D.  H~_0 itself is not a Laurent-plus-log
    function of W, so (g, n) = (0, 0) is rejected; (0, 1) and (0, 2) are
    Laurent series with negative exponents, and every (g, n) with
    2g-2+n > 0 comes out a log-free polynomial.

    For g >= 2 a fitted pole form may be passed to bypass the pinned
    display (required for g >= 4).

    >>> wexpr_for(0, 2).laurent == {0: Fraction(1), -1: Fraction(-1)}
    True
    >>> wexpr_for(0, 3).laurent == {1: Fraction(1), 0: Fraction(-1)}
    True
    >>> wexpr_for(1, 1).laurent == {2: Fraction(1, 24), 1: Fraction(-1, 12),
    ...                             0: Fraction(1, 24)}
    True
    """
    if g == 0 and n == 0:
        raise ValueError("the genus-0 series itself is not W-representable")
    if g < 0 or n < 0:
        raise ValueError("genus and derivative order must be non-negative")
    if form is not None and form.g == g:
        expr, start = wexpr_from_ansatz(form), 0
    elif g == 0:
        expr, start = _pinned(0, 1), 1
    elif (g, 0) in PINNED_W_SERIES:
        expr, start = _pinned(g, 0), 0
    else:
        raise ValueError(f"no pinned base series for genus {g}; pass a fitted form")
    for _ in range(n - start):
        expr = expr.apply_D()
    if 2 * g - 2 + n > 0:
        assert expr.is_log_free() and expr.min_exponent() >= 0
    return expr


def wexpr_from_ansatz(form) -> WExpr:
    """H~_g from fitted constants: with every part specializing to w and
    1 - phi_1 to 1 - w = W^{-1}, each theta contributes
    (K/Aut) w^l (1-w)^{-(l+2g-2)} = (K/Aut)(W-1)^l W^{2g-2}."""
    g = form.g
    total = WExpr.zero()
    for theta, _e, _k, value in form.records():
        scale = value / aut_count(theta)
        l = len(theta)
        lau = {
            m + 2 * g - 2: scale * math.comb(l, m) * (-1) ** (l - m)
            for m in range(l + 1)
        }
        total = total + WExpr(lau)
    return total


def wexpr_to_xseries(expr: WExpr, d_max: int) -> ExactSeries:
    """Expand a WExpr as a truncated x-series by substituting the tree
    series for w.  Reference route for extract_coeff; O(d_max^2) series
    arithmetic."""
    ring = SeriesRing(VarSet(("x",)), Truncation(x_max=d_max))
    w = ring.zero()
    for nn in range(1, d_max + 1):
        w = w + ring.monomial({"x": nn}, Fraction(nn) ** (nn - 1) / math.factorial(nn))
    one_minus_w = ring.one() - w
    w_inv = one_minus_w.inverse()  # = W
    powers: dict[int, ExactSeries] = {0: ring.one()}

    def wpow(j: int) -> ExactSeries:
        if j not in powers:
            if j > 0:
                powers[j] = wpow(j - 1) * w_inv
            else:
                powers[j] = wpow(j + 1) * one_minus_w
        return powers[j]

    total = ring.zero()
    for j, c in expr.laurent.items():
        total = total + wpow(j).scale(c)
    if expr.logpart:
        log_w = -one_minus_w.log()
        for j, c in expr.logpart.items():
            total = total + (wpow(j) * log_w).scale(c)
    return total


def extract_coeff(expr: WExpr, d: int) -> Fraction:
    """[x^d] of a log-free WExpr, via the Lagrange double sum.

    W^j = (1-w)^{-j} for j > 0; W^0 contributes nothing for d >= 1;
    negative exponents expand binomially in w.

    >>> extract_coeff(WExpr({1: Fraction(1), 0: Fraction(-1)}), 1)
    Fraction(1, 1)
    """
    if d < 1:
        raise ValueError("coefficient extraction needs d >= 1")
    if not expr.is_log_free():
        raise ValueError("log-bearing expression has no Lagrange extraction here")
    total = Fraction(0)
    for j, c in expr.laurent.items():
        if j > 0:
            total += c * lagrange_coeff(0, j, d)
        elif j < 0:
            for m in range(-j + 1):
                total += c * math.comb(-j, m) * (-1) ** m * lagrange_coeff(m, 0, d)
    return total


# -- recurrence search ------------------------------------------------------------


def family_wexpr(descriptor: dict, form_by_genus: dict | None = None) -> WExpr:
    """Product of D^p H~_g factors described by {"factors": [(g, p), ...]}."""
    product = WExpr.const(1)
    for g, p in descriptor["factors"]:
        form = (form_by_genus or {}).get(g)
        product = product * wexpr_for(g, p, form)
    return product


def _factor_coeff(g: int, p: int, m: int, table: HurwitzTable) -> Fraction:
    """[x^m] D^p H~_g = m^p H^g_{(1^m)} / (2m+2g-2)!."""
    if m < 1:
        return Fraction(0)
    value = table.value(g, Partition((1,) * m))
    if not value:
        return Fraction(0)
    return Fraction(m) ** p * value / math.factorial(2 * m + 2 * g - 2)


def _term_coeff(factors: list, d: int, table: HurwitzTable) -> Fraction:
    """[x^d] of a product of D^p H~_g factors, by convolution over
    compositions of d into one positive part per factor."""
    if not factors:
        return Fraction(0)  # constants have no x^d part for d >= 1
    (g, p), rest = factors[0], factors[1:]
    if not rest:
        return _factor_coeff(g, p, d, table)
    total = Fraction(0)
    for m in range(1, d - len(rest) + 1):
        head = _factor_coeff(g, p, m, table)
        if head:
            total += head * _term_coeff(rest, d - m, table)
    return total


def search_recursions(
    family: list[dict],
    table: HurwitzTable | None = None,
    *,
    d_verify: int = 10,
    form_by_genus: dict | None = None,
) -> dict:
    """Exact null space of a family of D^p H~_g products.

    Assembles the matrix whose rows are the W-monomials (and W^j log W
    monomials) appearing in any family member and whose columns are the
    members, and returns a rational basis of its null space.  If a table is
    given, every basis vector is independently re-verified as a numeric
    recurrence on the coefficients [x^d] for d <= d_verify.
    """
    exprs = [family_wexpr(term, form_by_genus) for term in family]
    row_keys: set[tuple[str, int]] = set()
    for e in exprs:
        row_keys.update(("lau", j) for j in e.laurent)
        row_keys.update(("log", j) for j in e.logpart)
    rows = sorted(row_keys)
    matrix = []
    for kind, j in rows:
        matrix.append(
            [
                (e.laurent if kind == "lau" else e.logpart).get(j, Fraction(0))
                for e in exprs
            ]
        )
    basis = nullspace(matrix, len(exprs))
    numeric_failures = []
    if table is not None:
        for vec in basis:
            for d in range(1, d_verify + 1):
                residual = Fraction(0)
                for coeff, term in zip(vec, family):
                    if coeff:
                        residual += coeff * _term_coeff(term["factors"], d, table)
                if residual:
                    numeric_failures.append({"vector": vec, "d": d, "residual": residual})
    return {
        "dimension": len(basis),
        "basis": basis,
        "rows": rows,
        "numeric_failures": numeric_failures,
    }


def differential_identity_wexpr(terms: list[dict], form_by_genus: dict | None = None) -> WExpr:
    """Sum of coeff * prod D^p H~_g terms; zero iff the identity holds."""
    total = WExpr.zero()
    for term in terms:
        total = total + family_wexpr(term, form_by_genus).scale(term["coeff"])
    return total


def differential_identity_residuals(
    terms: list[dict], table: HurwitzTable, d_range: range
) -> dict[int, Fraction]:
    """Numeric [x^d] residuals of a differential identity; empty means pass."""
    failures = {}
    for d in d_range:
        residual = Fraction(0)
        for term in terms:
            residual += term["coeff"] * _term_coeff(term["factors"], d, table)
        if residual:
            failures[d] = residual
    return failures


# -- numeric recurrences ----------------------------------------------------------


def _affine(spec: tuple[int, int, int], d: int, i: int) -> int:
    a0, ad, ai = spec
    return a0 + ad * d + ai * i


def _poly_value(poly: list, d: int, i: int, j: int) -> Fraction:
    total = Fraction(0)
    for e_d, e_i, e_j, c in poly:
        total += c * d**e_d * i**e_i * j**e_j
    return total


def _binom(top: int, bottom: int) -> int:
    if bottom < 0 or top < 0:
        return 0
    return math.comb(top, bottom)


def _recurrence_term(term: dict, d: int, table: HurwitzTable) -> Fraction:
    def h(g: int, arg: str, i: int) -> Fraction:
        m = {"d": d, "i": i, "j": d - i}[arg]
        return table.value(g, Partition((1,) * m)) if m >= 1 else Fraction(0)

    def at_split(i: int) -> Fraction:
        value = term["coeff"] * _poly_value(term["poly"], d, i, d - i)
        for top, bottom in term["binomials"]:
            value *= _binom(_affine(top, d, i), _affine(bottom, d, i))
        for g, arg in term["hfactors"]:
            value *= h(g, arg, i)
        return value

    if term.get("split"):
        total = sum(at_split(i) for i in range(1, d))
    else:
        total = at_split(0)
    denom = term.get("denom_poly")
    if denom:
        total /= sum(c * d**e_d for e_d, c in denom)
    return total


def verify_recurrence(spec: dict, table: HurwitzTable, d_range: range) -> dict:
    """Exact check of a numeric recurrence for each d; returns the failing
    d values (with both sides) and a status."""
    lhs_spec = spec["lhs"]
    failures = []
    for d in d_range:
        lhs = lhs_spec["coeff"] * table.value(lhs_spec["g"], Partition((1,) * d))
        rhs = sum(_recurrence_term(term, d, table) for term in spec["terms"])
        if lhs != rhs:
            failures.append(
                {"d": d, "lhs": rational_str(lhs), "rhs": rational_str(rhs)}
            )
    return {
        "status": "pass" if not failures else "fail",
        "d_range": [d_range.start, d_range.stop - 1],
        "failures": failures,
    }


# -- closed forms -----------------------------------------------------------------


def simple_hurwitz_value(table: HurwitzTable, g: int, d: int) -> Fraction:
    return table.value(g, Partition((1,) * d))


def _logw_series_coeff(d: int) -> Fraction:
    """[x^d] log W, from D log W = W^2 - W and division by d."""
    return (lagrange_coeff(0, 2, d) - lagrange_coeff(0, 1, d)) / d


def closed_form_simple(g: int, d: int, form=None) -> Fraction:
    """H^g_{(1^d)} in closed form.

    Genus 0 is the tree formula (2d-2)! d^{d-3}/d!; genus 1 combines the
    log W and 1/W extractions of its display; higher genus goes through the
    W-polynomial (pinned for g = 2, 3, or from a fitted pole form).

    >>> closed_form_simple(0, 3)
    Fraction(4, 1)
    >>> closed_form_simple(1, 2)
    Fraction(1, 2)
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if g == 0:
        return (
            Fraction(math.factorial(2 * d - 2), math.factorial(d))
            * Fraction(d) ** (d - 3)
        )
    if g == 1:
        tilde = (
            _logw_series_coeff(d) / 24
            + Fraction(1, 24) * extract_coeff(WExpr({-1: Fraction(1)}), d)
        )
        return tilde * math.factorial(2 * d)
    return extract_coeff(wexpr_for(g, 0, form), d) * math.factorial(2 * d + 2 * g - 2)


def a_series_coeff(k: int, d: int) -> Fraction:
    """A_k(d) = [x^d] (1-w)^{-k} = (k/d) sum_r C(k+r, k) d^{d-r-1}/(d-r-1)!.

    Computed here from the displayed single sum; agreement with
    lagrange_coeff(0, k, d) is a test.

    >>> a_series_coeff(3, 1)
    Fraction(3, 1)
    """
    total = Fraction(0)
    for r in range(d):
        total += (
            math.comb(k + r, k) * Fraction(d) ** (d - r - 1) / math.factorial(d - r - 1)
        )
    return Fraction(k, d) * total


def genus3_a_form(d: int) -> Fraction:
    """H^3_{(1^d)} as (2d+4)! times the pinned A_k combination."""
    total = Fraction(0)
    for k, c in A_COMBINATION_G3.items():
        total += c * a_series_coeff(k, d)
    return total * math.factorial(2 * d + 4)


def genus3_p_form(d: int) -> Fraction:
    """H^3_{(1^d)} as the single-sum polynomial form."""
    total = Fraction(0)
    for r in range(d):
        poly = sum(c * r**e for e, c in enumerate(P3_POLY))
        total += (
            Fraction(d) ** (d - r - 2)
            / math.factorial(d - r - 1)
            * math.comb(r + 4, 5)
            * (r + 1)
            * poly
        )
    return total * Fraction(math.factorial(2 * d + 4), P3_PREFACTOR_DENOM)
