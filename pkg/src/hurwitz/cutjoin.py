"""Cut-and-join iteration for Hurwitz numbers, organized by step count.

The generating function of all (possibly disconnected) covers satisfies a
first-order evolution equation in the step marker u whose right-hand side
is the cut-and-join operator: split one part v into a + b with weight v, or
merge two parts a, b into a + b with weight ab.  Starting from the step-0
series exp(p_1 x) and applying the operator once per step reproduces every
coefficient exactly.

Representation: the coefficient of u^r is a homogeneous "slice" mapping a
profile partition alpha to the rational coefficient of p_alpha x^{|alpha|};
the x-exponent and any genus marker are redundant given r and alpha, so
both stay implicit.  Slices are exact and closed under the operator, which
preserves |alpha|, so no truncation loss occurs inside a run.

Connected counts come from the slice-wise series logarithm, implemented by
its own convolution recurrence — deliberately not shared with the generic
series log used by the brute-force oracle, so the two pipelines stay
independent down to the connectivity step.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

from .oracle import HurwitzTable
from .partitions import Partition

__all__ = [
    "initial_slices",
    "cutjoin_step",
    "disconnected_slices",
    "connected_slices",
    "hurwitz_via_cutjoin",
]

Slice = dict[tuple[int, ...], Fraction]

_SLICE_CACHE: dict[tuple[int, int], list[Slice]] = {}


def initial_slices(d_max: int) -> Slice:
    """Step-0 slice: exp(p_1 x) truncated at degree d_max."""
    return {
        (1,) * d: Fraction(1, math.factorial(d)) for d in range(d_max + 1)
    }


def cutjoin_step(slice_r: Slice, r: int) -> Slice:
    """Apply the cut-and-join operator and the step normalization 1/(r+1)."""
    out: Slice = {}

    def bump(parts: tuple[int, ...], coeff: Fraction) -> None:
        if coeff:
            key = tuple(sorted(parts))
            acc = out.get(key, 0) + coeff
            if acc:
                out[key] = acc
            else:
                del out[key]

    for alpha, c in slice_r.items():
        mult = Counter(alpha)
        distinct = sorted(mult)
        # Cut: replace one part v by a + b = v.
        for v in distinct:
            if v < 2:
                continue
            rest = list(alpha)
            rest.remove(v)
            for a in range(1, v // 2 + 1):
                b = v - a
                weight = Fraction(v * mult[v], 2 if a == b else 1)
                bump(tuple(rest) + (a, b), c * weight)
        # Join: replace parts a, b by a + b.
        for i, a in enumerate(distinct):
            for b in distinct[i:]:
                if a == b:
                    pairs = mult[a] * (mult[a] - 1)
                    if not pairs:
                        continue
                    weight = Fraction(a * a * pairs, 2)
                else:
                    weight = Fraction(a * b * mult[a] * mult[b])
                rest = list(alpha)
                rest.remove(a)
                rest.remove(b)
                bump(tuple(rest) + (a + b,), c * weight)
    return {k: v / (r + 1) for k, v in out.items()}


def disconnected_slices(d_max: int, r_max: int) -> list[Slice]:
    """Slices E_0..E_{r_max} of the all-covers series."""
    slices = [initial_slices(d_max)]
    for r in range(r_max):
        nxt = cutjoin_step(slices[-1], r)
        for alpha in nxt:
            if ((r + 1) - (sum(alpha) - len(alpha))) % 2:
                raise AssertionError(
                    f"parity violation at r={r + 1}, alpha={alpha}"
                )
        slices.append(nxt)
    return slices


def _slice_mul(a: Slice, b: Slice, d_max: int) -> Slice:
    out: Slice = {}
    if len(a) > len(b):
        a, b = b, a
    for ka, ca in a.items():
        da = sum(ka)
        for kb, cb in b.items():
            if da + sum(kb) > d_max:
                continue
            key = tuple(sorted(ka + kb))
            acc = out.get(key, 0) + ca * cb
            if acc:
                out[key] = acc
            else:
                del out[key]
    return out


def _slice_axpy(acc: Slice, scale: Fraction, s: Slice) -> None:
    for k, v in s.items():
        u = acc.get(k, 0) + scale * v
        if u:
            acc[k] = u
        else:
            del acc[k]


def connected_slices(d_max: int, r_max: int) -> list[Slice]:
    """Slices H_0..H_{r_max} of the connected series (logarithm of E).

    Uses the derivative-of-log convolution in the step variable:
    (r+1) E_{r+1} = sum_k (k+1) H_{k+1} E_{r-k}, solved for H_{r+1} with
    E_0^{-1} = exp(-p_1 x).
    """
    key = (d_max, r_max)
    if key in _SLICE_CACHE:
        return _SLICE_CACHE[key]
    for (dc, rc), cached in _SLICE_CACHE.items():
        if dc >= d_max and rc >= r_max:
            trimmed = [
                {k: v for k, v in s.items() if sum(k) <= d_max}
                for s in cached[: r_max + 1]
            ]
            _SLICE_CACHE[key] = trimmed
            return trimmed
    e = disconnected_slices(d_max, r_max)
    e0_inv: Slice = {
        (1,) * d: Fraction((-1) ** d, math.factorial(d))
        for d in range(d_max + 1)
    }
    h: list[Slice] = [
        _slice_mul_log_base(e[0], d_max)
    ]
    for r in range(r_max):
        acc: Slice = dict(e[r + 1])
        for k in range(r):
            term = _slice_mul(h[k + 1], e[r - k], d_max)
            _slice_axpy(acc, Fraction(-(k + 1), r + 1), term)
        h.append(_slice_mul(e0_inv, acc, d_max))
    _SLICE_CACHE[key] = h
    return h


def _slice_mul_log_base(e0: Slice, d_max: int) -> Slice:
    """log of the step-0 slice; must come out as exactly p_1 x."""
    # e0 = exp(p_1 x): its log is p_1 x.  Verify rather than assume.
    expected = {(1,) * d: Fraction(1, math.factorial(d)) for d in range(d_max + 1)}
    if e0 != expected:
        raise AssertionError("step-0 slice is not exp(p_1 x)")
    return {(1,): Fraction(1)} if d_max >= 1 else {}


def hurwitz_via_cutjoin(d_max: int, g_max: int | None = None, r_max: int | None = None) -> HurwitzTable:
    """Connected Hurwitz table from the cut-and-join iteration.

    With g_max given, r_max defaults to 2*d_max + 2*g_max - 2 (enough steps
    for every profile of degree <= d_max at genus <= g_max) and an explicit
    smaller r_max is rejected.  Entries of higher genus reachable within
    r_max are included unless g_max filters them.
    """
    if g_max is not None:
        r_needed = 2 * d_max + 2 * g_max - 2
        if r_max is None:
            r_max = r_needed
        elif r_max < r_needed:
            raise ValueError(
                f"r_max={r_max} < {r_needed} required for d_max={d_max}, g_max={g_max}"
            )
    elif r_max is None:
        raise ValueError("need g_max or r_max")
    h = connected_slices(d_max, r_max)
    table = HurwitzTable("cutjoin")
    for r, s in enumerate(h):
        r_fact = math.factorial(r)
        for alpha, c in s.items():
            d = sum(alpha)
            if d == 0:
                raise AssertionError("connected slice contains a constant term")
            two_g = r - d - len(alpha) + 2
            if two_g % 2 or two_g < 0:
                raise AssertionError(
                    f"parity/genus violation at r={r}, alpha={alpha}"
                )
            g = two_g // 2
            if g_max is not None and g > g_max:
                continue
            table.add(g, Partition(alpha), c * r_fact)
    return table
