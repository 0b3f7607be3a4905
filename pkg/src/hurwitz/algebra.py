"""Exact truncated multivariate formal power series over the rationals.

All coefficients are `fractions.Fraction`; the package contains no floating
point.  A series is attached to a `SeriesRing` (a variable set plus a
truncation policy) fixed at construction.  Arithmetic between series from
different rings raises instead of silently re-truncating, since mismatched
truncations are the classic source of wrong exact-series results.

Variable names encode their role:

* ``x``  — degree marker (one per ring),
* ``u``  — step/branch-point marker,
* ``y``  — genus marker (may carry negative exponents),
* ``p_i`` (i >= 1) — part markers,
* ``t_i`` (i >= 0) — descendant markers.

The truncation policy caps, per ring: the x-exponent, the u-exponent, the
total weight sum(i * exp(p_i)), the total t-degree, the t-weight
sum((i-1) * exp(t_i)), and the minimum y-exponent.  Overflowing terms are
discarded on creation; retained terms are always exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

__all__ = [
    "Fraction",
    "SeriesError",
    "VarSetMismatchError",
    "ConstantTermError",
    "DivergingFunctionalError",
    "VarSet",
    "Truncation",
    "SeriesRing",
    "ExactSeries",
    "series_arith",
    "series_exp_log",
    "solve_graded_fixpoint",
    "lagrange_coeff",
    "rational_str",
    "parse_rational",
]


class SeriesError(Exception):
    """Base class for exact-series errors."""


class VarSetMismatchError(SeriesError):
    """Operands live in different rings (variables or truncation differ)."""


class ConstantTermError(SeriesError):
    """A constant-term precondition (0 for exp, 1 for log, unit for inverse)."""


class DivergingFunctionalError(SeriesError):
    """A graded fixed-point iteration changed an already-determined slice."""


_VAR_RE = re.compile(r"^(x|u|y|p_(\d+)|t_(\d+))$")


class VarSet:
    """An ordered set of named variables with derived family/index metadata.

    >>> vs = VarSet(("x", "p_1", "p_2"))
    >>> vs.families
    ('x', 'p', 'p')
    >>> vs.indices
    (0, 1, 2)
    """

    __slots__ = ("names", "families", "indices", "position")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names!r}")
        families = []
        indices = []
        for name in names:
            m = _VAR_RE.match(name)
            if not m:
                raise ValueError(f"unrecognized variable name {name!r}")
            fam = name[0]
            idx = 0
            if fam == "p":
                idx = int(m.group(2))
                if idx < 1:
                    raise ValueError("p-variables start at p_1")
            elif fam == "t":
                idx = int(m.group(3))
            families.append(fam)
            indices.append(idx)
        self.names = names
        self.families = tuple(families)
        self.indices = tuple(indices)
        self.position = {n: i for i, n in enumerate(names)}

    @classmethod
    def xp(cls, p_max: int) -> "VarSet":
        return cls(("x",) + tuple(f"p_{i}" for i in range(1, p_max + 1)))

    @classmethod
    def xup(cls, p_max: int) -> "VarSet":
        return cls(("x", "u") + tuple(f"p_{i}" for i in range(1, p_max + 1)))

    @classmethod
    def tvars(cls, t_max: int) -> "VarSet":
        return cls(tuple(f"t_{i}" for i in range(t_max + 1)))

    def __eq__(self, other) -> bool:
        return isinstance(other, VarSet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarSet({self.names!r})"


@dataclass(frozen=True)
class Truncation:
    """Per-family degree caps.  ``None`` means uncapped for that family."""

    x_max: int | None = None
    u_max: int | None = None
    p_weight_max: int | None = None
    t_deg_max: int | None = None
    t_weight_max: int | None = None
    y_min: int | None = None

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


class SeriesRing:
    """A VarSet plus a Truncation, with precomputed admission metadata."""

    __slots__ = ("varset", "trunc", "_fam", "_idx", "_nonneg_positions")

    def __init__(self, varset: VarSet, trunc: Truncation):
        self.varset = varset
        self.trunc = trunc
        self._fam = varset.families
        self._idx = varset.indices
        self._nonneg_positions = tuple(
            i for i, f in enumerate(self._fam) if f != "y"
        )

    def admits(self, exps: tuple[int, ...]) -> bool:
        x_deg = u_deg = p_wt = t_deg = t_wt = 0
        for pos, e in enumerate(exps):
            if e == 0:
                continue
            fam = self._fam[pos]
            if fam == "y":
                if e < (self.trunc.y_min if self.trunc.y_min is not None else 0):
                    return False
                continue
            if e < 0:
                return False
            if fam == "x":
                x_deg += e
            elif fam == "u":
                u_deg += e
            elif fam == "p":
                p_wt += self._idx[pos] * e
            elif fam == "t":
                t_deg += e
                t_wt += (self._idx[pos] - 1) * e
        t = self.trunc
        if t.x_max is not None and x_deg > t.x_max:
            return False
        if t.u_max is not None and u_deg > t.u_max:
            return False
        if t.p_weight_max is not None and p_wt > t.p_weight_max:
            return False
        if t.t_deg_max is not None and t_deg > t.t_deg_max:
            return False
        if t.t_weight_max is not None and t_wt > t.t_weight_max:
            return False
        return True

    def max_total_degree(self) -> int:
        """Upper bound on the total degree of any admitted monomial.

        Requires every non-y family that is present to be capped; used as
        the iteration bound for exp/log.
        """
        t = self.trunc
        bound = 0
        fams = set(self._fam)
        if "x" in fams:
            if t.x_max is None:
                raise SeriesError("x is uncapped; no finite degree bound")
            bound += t.x_max
        if "u" in fams:
            if t.u_max is None:
                raise SeriesError("u is uncapped; no finite degree bound")
            bound += t.u_max
        if "p" in fams:
            if t.p_weight_max is None:
                raise SeriesError("p-weight is uncapped; no finite degree bound")
            bound += t.p_weight_max  # deg(p_i) = 1 <= i <= weight
        if "t" in fams:
            if t.t_deg_max is None:
                raise SeriesError("t-degree is uncapped; no finite degree bound")
            bound += t.t_deg_max
        return bound

    def zero(self) -> "ExactSeries":
        return ExactSeries(self, {})

    def one(self) -> "ExactSeries":
        return self.const(1)

    def const(self, c) -> "ExactSeries":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return ExactSeries(self, {(0,) * len(self.varset.names): c})

    def var(self, name: str, power: int = 1) -> "ExactSeries":
        return self.monomial({name: power}, 1)

    def monomial(self, exps: Mapping[str, int], coeff) -> "ExactSeries":
        vec = [0] * len(self.varset.names)
        for name, e in exps.items():
            vec[self.varset.position[name]] = e
        return ExactSeries(self, {tuple(vec): Fraction(coeff)})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SeriesRing)
            and self.varset == other.varset
            and self.trunc == other.trunc
        )

    def __hash__(self) -> int:
        return hash((self.varset, self.trunc))

    def __repr__(self) -> str:
        return f"SeriesRing({self.varset!r}, {self.trunc!r})"


def _total_degree(exps: tuple[int, ...]) -> int:
    return sum(exps)


class ExactSeries:
    """A sparse truncated series: map from exponent vector to Fraction.

    Instances are immutable by convention; all operations return new series
    in the same ring.  Stored coefficients are never zero and every stored
    exponent vector is admitted by the ring's truncation.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: SeriesRing, terms: Mapping[tuple[int, ...], Fraction]):
        self.ring = ring
        self.terms = {
            e: c for e, c in terms.items() if c != 0 and ring.admits(e)
        }

    # -- basics ----------------------------------------------------------

    def _check_ring(self, other: "ExactSeries") -> None:
        if self.ring != other.ring:
            raise VarSetMismatchError(
                f"operands in different rings: {self.ring!r} vs {other.ring!r}"
            )

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        zero_key = (0,) * len(self.ring.varset.names)
        return self.terms.get(zero_key, Fraction(0))

    def coeff(self, exps: Mapping[str, int]) -> Fraction:
        vec = [0] * len(self.ring.varset.names)
        for name, e in exps.items():
            vec[self.ring.varset.position[name]] = e
        return self.terms.get(tuple(vec), Fraction(0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactSeries)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        raise TypeError("ExactSeries is not hashable")

    def __repr__(self) -> str:
        n = len(self.terms)
        return f"<ExactSeries {n} terms in {self.ring.varset.names}>"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "ExactSeries":
        if not isinstance(other, ExactSeries):
            return self + self.ring.const(other)
        self._check_ring(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            acc = terms.get(e, 0) + c
            if acc:
                terms[e] = acc
            else:
                terms.pop(e, None)
        return ExactSeries(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "ExactSeries":
        return ExactSeries(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "ExactSeries":
        if not isinstance(other, ExactSeries):
            return self - self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "ExactSeries":
        return (-self) + self.ring.const(other)

    def scale(self, c) -> "ExactSeries":
        c = Fraction(c)
        if c == 0:
            return self.ring.zero()
        return ExactSeries(self.ring, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other) -> "ExactSeries":
        if not isinstance(other, ExactSeries):
            return self.scale(other)
        self._check_ring(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        admits = self.ring.admits
        acc: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(map(sum, zip(ea, eb)))
                if not admits(e):
                    continue
                v = acc.get(e, 0) + ca * cb
                if v:
                    acc[e] = v
                else:
                    acc.pop(e, None)
        return ExactSeries(self.ring, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ExactSeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def inverse(self) -> "ExactSeries":
        """Multiplicative inverse; requires an invertible constant term."""
        c0 = self.constant_term()
        if c0 == 0:
            raise ConstantTermError("inverse requires nonzero constant term")
        n = self.ring.max_total_degree()
        slices = self._slices_by_degree()
        inv_slices: dict[int, dict] = {0: {self._zero_key(): 1 / c0}}
        for m in range(1, n + 1):
            acc: dict[tuple[int, ...], Fraction] = {}
            for j in range(1, m + 1):
                if j in slices and (m - j) in inv_slices:
                    self._slice_mul_into(acc, slices[j], inv_slices[m - j])
            if acc:
                inv_slices[m] = {e: -c / c0 for e, c in acc.items() if c}
        return self._from_slices(inv_slices)

    # -- exp / log ---------------------------------------------------------

    def _zero_key(self) -> tuple[int, ...]:
        return (0,) * len(self.ring.varset.names)

    def _slices_by_degree(self) -> dict[int, dict]:
        slices: dict[int, dict] = {}
        for e, c in self.terms.items():
            if any(v < 0 for v in e):
                raise SeriesError("degree-graded operation on negative exponents")
            slices.setdefault(_total_degree(e), {})[e] = c
        return slices

    def _slice_mul_into(self, acc: dict, a: dict, b: dict) -> None:
        admits = self.ring.admits
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(map(sum, zip(ea, eb)))
                if admits(e):
                    acc[e] = acc.get(e, 0) + ca * cb

    def _from_slices(self, slices: dict[int, dict]) -> "ExactSeries":
        terms: dict[tuple[int, ...], Fraction] = {}
        for s in slices.values():
            for e, c in s.items():
                if c:
                    terms[e] = c
        return ExactSeries(self.ring, terms)

    def exp(self) -> "ExactSeries":
        """Exponential; requires constant term 0.

        Computed by the Euler-graded recurrence m*E_m = sum_j j*A_j*E_{m-j}
        over total-degree slices, so cost is one Cauchy product overall.
        """
        if self.constant_term() != 0:
            raise ConstantTermError("exp requires constant term 0")
        n = self.ring.max_total_degree()
        a = self._slices_by_degree()
        out: dict[int, dict] = {0: {self._zero_key(): Fraction(1)}}
        for m in range(1, n + 1):
            acc: dict[tuple[int, ...], Fraction] = {}
            for j in range(1, m + 1):
                if j in a and (m - j) in out:
                    self._slice_mul_into(
                        acc, {e: j * c for e, c in a[j].items()}, out[m - j]
                    )
            if acc:
                out[m] = {e: c / m for e, c in acc.items() if c}
        return self._from_slices(out)

    def log(self) -> "ExactSeries":
        """Logarithm; requires constant term 1.

        Inverse recurrence of `exp`: m*H_m = m*E_m - sum_{j<m} j*H_j*E_{m-j}.
        """
        if self.constant_term() != 1:
            raise ConstantTermError("log requires constant term 1")
        n = self.ring.max_total_degree()
        e_slices = self._slices_by_degree()
        h: dict[int, dict] = {}
        for m in range(1, n + 1):
            acc: dict[tuple[int, ...], Fraction] = {}
            for ee, c in e_slices.get(m, {}).items():
                acc[ee] = acc.get(ee, 0) + m * c
            for j in range(1, m):
                if j in h and (m - j) in e_slices:
                    self._slice_mul_into(
                        acc,
                        {e: -j * c for e, c in h[j].items()},
                        e_slices[m - j],
                    )
            slice_m = {e: c / m for e, c in acc.items() if c}
            if slice_m:
                h[m] = slice_m
        return self._from_slices(h)

    # -- derivations -------------------------------------------------------

    def diff(self, name: str) -> "ExactSeries":
        """Partial derivative with respect to a named variable."""
        pos = self.ring.varset.position[name]
        terms: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            k = e[pos]
            if k == 0:
                continue
            e2 = e[:pos] + (k - 1,) + e[pos + 1 :]
            terms[e2] = terms.get(e2, 0) + k * c
        return ExactSeries(self.ring, terms)

    def euler(self, name: str) -> "ExactSeries":
        """The operator v * d/dv for the named variable (degree scaling)."""
        pos = self.ring.varset.position[name]
        return ExactSeries(
            self.ring,
            {e: e[pos] * c for e, c in self.terms.items() if e[pos]},
        )

    def restrict(self, ring: SeriesRing) -> "ExactSeries":
        """Re-home into a ring over the same variables with tighter caps.

        Explicitly discards non-admitted terms; this is the only sanctioned
        way to move a series between truncations.
        """
        if ring.varset != self.ring.varset:
            raise VarSetMismatchError("restrict cannot change the variable set")
        return ExactSeries(ring, self.terms)

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> list:
        names = self.ring.varset.names
        out = []
        for e in sorted(self.terms):
            out.append(
                {
                    "exponents": {
                        names[i]: v for i, v in enumerate(e) if v != 0
                    },
                    "coeff": rational_str(self.terms[e]),
                }
            )
        return out

    @classmethod
    def from_json_obj(cls, ring: SeriesRing, obj: list) -> "ExactSeries":
        terms: dict[tuple[int, ...], Fraction] = {}
        for rec in obj:
            vec = [0] * len(ring.varset.names)
            for name, e in rec["exponents"].items():
                vec[ring.varset.position[name]] = int(e)
            terms[tuple(vec)] = parse_rational(rec["coeff"])
        return cls(ring, terms)


# -- spec-surface dispatchers ------------------------------------------------


def series_arith(a: ExactSeries, b: ExactSeries, op: str) -> ExactSeries:
    """Dispatch {add, mul, scale} with ring checking.

    >>> ring = SeriesRing(VarSet(("x",)), Truncation(x_max=2))
    >>> x = ring.var("x")
    >>> series_arith(1 + x, 1 - x, "mul").coeff({"x": 2})
    Fraction(-1, 1)
    """
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        if not isinstance(b, (int, Fraction)):
            raise TypeError("scale expects a rational scalar")
        return a.scale(b)
    raise ValueError(f"unknown op {op!r}")


def series_exp_log(a: ExactSeries, op: str) -> ExactSeries:
    if op == "exp":
        return a.exp()
    if op == "log":
        return a.log()
    raise ValueError(f"unknown op {op!r}")


def solve_graded_fixpoint(
    functional: Callable[[ExactSeries], ExactSeries],
    ring: SeriesRing,
    max_grade: int,
    grade: Callable[[tuple[int, ...]], int],
) -> ExactSeries:
    """Solve v = functional(v) where the functional raises a grading.

    Starting from 0, iteration k determines the slices of grade <= k.  The
    solver runs max_grade+1 iterations, confirms previously determined
    slices never change, and confirms the result is an exact fixed point
    within truncation; otherwise raises DivergingFunctionalError.
    """

    def slice_upto(s: ExactSeries, g: int) -> dict:
        return {e: c for e, c in s.terms.items() if grade(e) <= g}

    cur = ring.zero()
    for step in range(1, max_grade + 1):
        nxt = functional(cur)
        if slice_upto(nxt, step - 1) != slice_upto(cur, step - 1):
            raise DivergingFunctionalError(
                f"slice of grade <= {step - 1} changed at iteration {step}"
            )
        if nxt == cur:
            return cur
        cur = nxt
    final = functional(cur)
    if final != cur:
        raise DivergingFunctionalError(
            f"no fixed point within grade {max_grade}"
        )
    return cur


def lagrange_coeff(n: int, r: int, d: int) -> Fraction:
    """[x^d] of w^n / (1-w)^r where w = x*e^w, as an exact rational.

    Evaluates the closed double sum
    sum_i C(r+i-1, r-1) n d^(d-n-i-1)/(d-n-i)!
    + sum_i C(r+i, r) r d^(d-n-i-2)/(d-n-i-1)!.

    >>> lagrange_coeff(1, 0, 3)
    Fraction(3, 2)
    >>> lagrange_coeff(4, 7, 4)
    Fraction(1, 1)
    """
    if d < 1:
        raise ValueError("d must be positive")
    if n < 0 or r < 0:
        raise ValueError("n and r must be nonnegative")
    if n > d:
        return Fraction(0)
    total = Fraction(0)
    if r == 0:
        # w^n alone: only the i = 0 term of the first sum survives.
        if n == 0:
            return Fraction(1) if d == 0 else Fraction(0)
        return n * Fraction(d) ** (d - n - 1) / math.factorial(d - n)
    for i in range(0, d - n + 1):
        total += (
            math.comb(r + i - 1, r - 1)
            * n
            * Fraction(d) ** (d - n - i - 1)
            / math.factorial(d - n - i)
        )
    for i in range(0, d - n):
        total += (
            math.comb(r + i, r)
            * r
            * Fraction(d) ** (d - n - i - 2)
            / math.factorial(d - n - i - 1)
        )
    return total


def rational_str(q) -> str:
    """Serialize a rational as "num/den" with an explicit denominator.

    >>> rational_str(Fraction(7, 240))
    '7/240'
    >>> rational_str(Fraction(-3))
    '-3/1'
    """
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den) if den else 1)
