"""Brute-force transposition-factorization oracle and the Hurwitz table type.

The oracle counts tuples of transpositions in S_d with prescribed product by
dynamic programming over the full group algebra (vectors indexed by Lehmer
rank), bins counts by cycle type, assembles the exponential generating
series in (x, u, p), and extracts connected counts through the series
logarithm — no ad-hoc connectivity bookkeeping — so it stays independent
of the cut-and-join route and usable as a ground-truth cross-check.

Deliberately desk-scale: a cost budget (product d! * r_max) refuses degrees
past 7 by default; set HURWITZ_MEMORY_BUDGET (bytes) to adjust.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .algebra import (
    ExactSeries,
    SeriesRing,
    Truncation,
    VarSet,
    parse_rational,
    rational_str,
)
from .partitions import Partition

__all__ = [
    "BudgetExceededError",
    "rank_perm",
    "unrank_perm",
    "cycle_type",
    "transpositions",
    "GroupAlgebraVector",
    "count_factorizations",
    "connected_hurwitz",
    "HurwitzTable",
    "riemann_hurwitz_r",
]

MEMORY_BUDGET_ENV = "HURWITZ_MEMORY_BUDGET"
_DEFAULT_COST_BUDGET = math.factorial(7) * 20  # vectors of 5040, 20 steps
_BYTES_PER_CELL = 64


class BudgetExceededError(Exception):
    """The requested computation exceeds the configured resource budget."""


def _cost_budget() -> int:
    env = os.environ.get(MEMORY_BUDGET_ENV)
    if env is None:
        return _DEFAULT_COST_BUDGET
    return max(int(env) // _BYTES_PER_CELL, 1)


# -- permutation plumbing ------------------------------------------------------


def rank_perm(perm: tuple[int, ...]) -> int:
    """Lehmer rank of a permutation of {0..d-1} in lexicographic order.

    >>> rank_perm((0, 1, 2)), rank_perm((2, 1, 0))
    (0, 5)
    """
    d = len(perm)
    rank = 0
    for i in range(d):
        smaller = sum(1 for j in range(i + 1, d) if perm[j] < perm[i])
        rank += smaller * math.factorial(d - 1 - i)
    return rank


def unrank_perm(d: int, rank: int) -> tuple[int, ...]:
    """Inverse of `rank_perm`.

    >>> unrank_perm(3, 5)
    (2, 1, 0)
    """
    pool = list(range(d))
    perm = []
    for i in range(d, 0, -1):
        f = math.factorial(i - 1)
        idx, rank = divmod(rank, f)
        perm.append(pool.pop(idx))
    return tuple(perm)


def cycle_type(perm: tuple[int, ...]) -> Partition:
    """Cycle type as a sorted partition.

    >>> tuple(cycle_type((1, 0, 2, 3)))
    (1, 1, 2)
    """
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        n = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            n += 1
        lengths.append(n)
    return Partition.of(lengths)


def transpositions(d: int) -> list[tuple[int, ...]]:
    """All transpositions of S_d as permutation tuples."""
    out = []
    for i in range(d):
        for j in range(i + 1, d):
            p = list(range(d))
            p[i], p[j] = p[j], p[i]
            out.append(tuple(p))
    return out


@dataclass
class GroupAlgebraVector:
    """An integer vector over S_d indexed by Lehmer rank."""

    d: int
    counts: list[int]

    @classmethod
    def delta_identity(cls, d: int) -> "GroupAlgebraVector":
        counts = [0] * math.factorial(d)
        counts[rank_perm(tuple(range(d)))] = 1
        return cls(d, counts)

    def bin_by_cycle_type(self) -> dict[Partition, int]:
        out: dict[Partition, int] = {}
        for idx, c in enumerate(self.counts):
            if c:
                key = cycle_type(unrank_perm(self.d, idx))
                out[key] = out.get(key, 0) + c
        return out


def _transposition_action(d: int) -> list[list[int]]:
    """For each transposition tau, the index map sigma -> tau*sigma."""
    taus = transpositions(d)
    n = math.factorial(d)
    maps = []
    for tau in taus:
        row = [0] * n
        for idx in range(n):
            sigma = unrank_perm(d, idx)
            row[idx] = rank_perm(tuple(tau[v] for v in sigma))
        maps.append(row)
    return maps


def count_factorizations(d: int, r_max: int) -> list[dict[Partition, int]]:
    """Counts of length-r transposition factorizations, binned by cycle type.

    Returns a list indexed by r in [0, r_max]; entry r maps the cycle type
    of the product to the number of r-tuples of transpositions with that
    product.  Exact integers throughout.
    """
    cost = math.factorial(d) * max(r_max, 1)
    budget = _cost_budget()
    if cost > budget:
        raise BudgetExceededError(
            f"d={d}, r_max={r_max} costs {cost} cells > budget {budget}; "
            f"raise {MEMORY_BUDGET_ENV} to override"
        )
    action = _transposition_action(d)
    vec = GroupAlgebraVector.delta_identity(d)
    out = [vec.bin_by_cycle_type()]
    counts = vec.counts
    for _ in range(r_max):
        nxt = [0] * len(counts)
        for row in action:
            for idx, c in enumerate(counts):
                if c:
                    nxt[row[idx]] += c
        counts = nxt
        out.append(GroupAlgebraVector(d, counts).bin_by_cycle_type())
    return out


# -- Hurwitz table -------------------------------------------------------------


def riemann_hurwitz_r(g: int, alpha: Iterable[int]) -> int:
    """Number of simple branch points for genus g and profile alpha."""
    alpha = tuple(alpha)
    return sum(alpha) + len(alpha) + 2 * (g - 1)


@dataclass
class HurwitzTable:
    """Connected counts indexed by (genus, profile partition).

    Values are nonnegative rationals (automorphism-weighted counts); the
    production method is recorded for provenance in exports.
    """

    method: str
    entries: dict[tuple[int, Partition], Fraction] = field(default_factory=dict)

    def add(self, g: int, alpha, value) -> None:
        alpha = Partition(alpha)
        value = Fraction(value)
        if g < 0:
            raise ValueError(f"negative genus {g}")
        if riemann_hurwitz_r(g, alpha) < 0:
            raise ValueError(f"negative branch count for g={g}, alpha={alpha}")
        if value < 0:
            raise ValueError(f"negative count for g={g}, alpha={alpha}: {value}")
        self.entries[(g, alpha)] = value

    def get(self, g: int, alpha) -> Fraction:
        return self.entries[(g, Partition(alpha))]

    def value(self, g: int, alpha) -> Fraction:
        """Count with the zero-absence convention: exact zeros are never
        stored, so a missing key reads as 0."""
        return self.entries.get((g, Partition(alpha)), Fraction(0))

    def __contains__(self, key) -> bool:
        g, alpha = key
        return (g, Partition(alpha)) in self.entries

    def keys(self) -> list[tuple[int, Partition]]:
        return sorted(self.entries, key=lambda k: (k[0], sum(k[1]), k[1]))

    def restricted(self, d_max=None, g_max=None, r_max=None) -> "HurwitzTable":
        sub = HurwitzTable(self.method)
        for (g, alpha), v in self.entries.items():
            if d_max is not None and sum(alpha) > d_max:
                continue
            if g_max is not None and g > g_max:
                continue
            if r_max is not None and riemann_hurwitz_r(g, alpha) > r_max:
                continue
            sub.entries[(g, alpha)] = v
        return sub

    def to_json_records(self) -> list[dict]:
        return [
            {
                "g": g,
                "alpha": list(alpha),
                "r": riemann_hurwitz_r(g, alpha),
                "value": rational_str(v),
                "method": self.method,
            }
            for (g, alpha) in self.keys()
            for v in (self.entries[(g, alpha)],)
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_json_records(), indent=2)

    @classmethod
    def from_json_records(cls, records: list[dict], method: str | None = None) -> "HurwitzTable":
        table = cls(method or (records[0]["method"] if records else "unknown"))
        for rec in records:
            table.add(rec["g"], rec["alpha"], parse_rational(rec["value"]))
        return table


def connected_hurwitz(d_max: int, g_max: int | None = None, r_max: int | None = None) -> HurwitzTable:
    """Connected Hurwitz counts by brute-force factorization counting.

    Assembles E = sum N(d, r, alpha)/(d! r!) p_alpha x^d u^r over all
    degrees <= d_max, takes the series logarithm (which is what removes
    disconnected configurations), and reads one table entry per retained
    monomial with genus from the branch-count formula.
    """
    if r_max is None:
        if g_max is None:
            raise ValueError("need g_max or r_max")
        r_max = 2 * d_max + 2 * g_max - 2
    ring = SeriesRing(
        VarSet.xup(d_max),
        Truncation(x_max=d_max, u_max=r_max, p_weight_max=d_max),
    )
    total = ring.one()
    for d in range(1, d_max + 1):
        binned = count_factorizations(d, r_max)
        d_fact = math.factorial(d)
        for r, bins in enumerate(binned):
            r_fact = math.factorial(r)
            for alpha, count in sorted(bins.items()):
                exps = {"x": d, "u": r}
                for part in alpha:
                    exps[f"p_{part}"] = exps.get(f"p_{part}", 0) + 1
                total = total + ring.monomial(exps, Fraction(count, d_fact * r_fact))
    connected = total.log()
    table = HurwitzTable("oracle")
    names = ring.varset.names
    for exps, coeff in sorted(connected.terms.items()):
        d = r = 0
        parts: list[int] = []
        for pos, e in enumerate(exps):
            if e == 0:
                continue
            name = names[pos]
            if name == "x":
                d = e
            elif name == "u":
                r = e
            else:
                parts.extend([int(name[2:])] * e)
        alpha = Partition.of(parts)
        if sum(alpha) != d:
            raise AssertionError(f"inhomogeneous term {exps}")
        two_g = r - d - len(alpha) + 2
        if two_g % 2 or two_g < 0:
            raise AssertionError(
                f"parity/genus violation at d={d}, r={r}, alpha={tuple(alpha)}"
            )
        g = two_g // 2
        if g_max is not None and g > g_max:
            continue
        table.add(g, alpha, coeff * math.factorial(r))
    return table
