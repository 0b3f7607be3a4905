"""Exact rational linear algebra: row reduction, null spaces, and the
over-determined solver used by the constant fits."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitz.linalg import (
    InconsistentSystemError,
    RankDeficientError,
    nullspace,
    row_reduce,
    solve_exact,
)


def frac_matrix(rows):
    return [[Fraction(v) for v in row] for row in rows]


def mat_vec(rows, vec):
    return [sum((r * v for r, v in zip(row, vec)), Fraction(0)) for row in rows]


def test_row_reduce_identifies_pivots():
    reduced, pivots = row_reduce(frac_matrix([[1, 2, 3], [2, 4, 7], [0, 1, 0]]))
    assert pivots == [0, 1, 2]
    assert len(reduced) == 3


def test_nullspace_of_rank_one_matrix():
    basis = nullspace(frac_matrix([[1, 2, 3]]))
    assert len(basis) == 2
    for vec in basis:
        assert sum(c * v for c, v in zip([1, 2, 3], vec)) == 0


def test_nullspace_needs_ncols_for_empty_matrix():
    assert nullspace([], 3) == [
        [Fraction(1), Fraction(0), Fraction(0)],
        [Fraction(0), Fraction(1), Fraction(0)],
        [Fraction(0), Fraction(0), Fraction(1)],
    ]
    with pytest.raises(ValueError):
        nullspace([])


def test_solve_exact_overdetermined_consistent():
    rows = frac_matrix([[1, 1], [1, -1], [2, 0]])
    rhs = [Fraction(3), Fraction(1), Fraction(4)]
    assert solve_exact(rows, rhs) == [Fraction(2), Fraction(1)]


def test_solve_exact_rejects_contradiction():
    rows = frac_matrix([[1, 0], [0, 1], [1, 1]])
    with pytest.raises(InconsistentSystemError):
        solve_exact(rows, [Fraction(1), Fraction(1), Fraction(3)])


def test_solve_exact_rejects_rank_deficiency():
    with pytest.raises(RankDeficientError):
        solve_exact(frac_matrix([[1, 2], [2, 4]]), [Fraction(1), Fraction(2)])
    with pytest.raises(RankDeficientError):
        solve_exact([], [])


@st.composite
def matrices(draw):
    ncols = draw(st.integers(1, 4))
    nrows = draw(st.integers(1, 5))
    return [
        [Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 3))) for _ in range(ncols)]
        for _ in range(nrows)
    ]


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_nullspace_vectors_are_in_kernel(rows):
    ncols = len(rows[0])
    basis = nullspace(rows, ncols)
    _, pivots = row_reduce([row[:] for row in rows])
    assert len(basis) == ncols - len(pivots)
    for vec in basis:
        assert mat_vec(rows, vec) == [Fraction(0)] * len(rows)


@given(matrices(), st.data())
@settings(max_examples=60, deadline=None)
def test_solve_exact_recovers_planted_solution(rows, data):
    ncols = len(rows[0])
    planted = [
        Fraction(data.draw(st.integers(-4, 4)), data.draw(st.integers(1, 3)))
        for _ in range(ncols)
    ]
    rhs = mat_vec(rows, planted)
    try:
        got = solve_exact(rows, rhs)
    except RankDeficientError:
        _, pivots = row_reduce([row[:] for row in rows])
        assert len(pivots) < ncols
        return
    assert mat_vec(rows, got) == rhs
