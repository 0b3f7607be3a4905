"""Brute-force transposition-factorization oracle: permutation plumbing,
raw counts against hand values, and the budget guard."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitz.oracle import (
    BudgetExceededError,
    HurwitzTable,
    connected_hurwitz,
    count_factorizations,
    cycle_type,
    rank_perm,
    riemann_hurwitz_r,
    transpositions,
    unrank_perm,
)
from hurwitz.partitions import Partition


@given(st.integers(1, 6), st.data())
@settings(max_examples=60, deadline=None)
def test_rank_unrank_roundtrip(d, data):
    rank = data.draw(st.integers(0, math.factorial(d) - 1))
    assert rank_perm(unrank_perm(d, rank)) == rank


def test_cycle_type():
    assert cycle_type((0, 1, 2)) == (1, 1, 1)
    assert cycle_type((1, 0, 2)) == (1, 2)
    assert cycle_type((1, 2, 0)) == (3,)


def test_transposition_count():
    assert len(transpositions(4)) == 6
    assert len(transpositions(1)) == 0


def test_count_factorizations_s3():
    # products of r transpositions in S_3, binned by cycle type of the product
    by_r = count_factorizations(3, 4)
    assert by_r[0] == {Partition((1, 1, 1)): 1}
    assert by_r[1] == {Partition((1, 2)): 3}
    # r = 2: 9 products; 3 give identity, 6 give a 3-cycle
    assert by_r[2] == {Partition((1, 1, 1)): 3, Partition((3,)): 6}
    assert sum(by_r[4].values()) == 3**4


def test_riemann_hurwitz_r():
    assert riemann_hurwitz_r(0, (1, 1, 1)) == 4
    assert riemann_hurwitz_r(1, (1, 1)) == 4
    assert riemann_hurwitz_r(0, (3,)) == 2


def test_connected_spot_values(oracle_table):
    assert oracle_table.value(0, (1, 1, 1)) == 4
    assert oracle_table.value(1, (1, 1)) == Fraction(1, 2)
    assert oracle_table.value(0, (3,)) == 1
    assert oracle_table.value(1, (3,)) == 9
    assert oracle_table.value(1, (1, 1, 1)) == 40
    # degree-1 covers of positive genus do not exist
    assert oracle_table.value(1, (1,)) == 0
    assert (1, Partition((1,))) not in oracle_table.entries


def test_disconnected_minus_connected():
    # H^0_{(1,1)} = 1/2: the two-sheet cover branched at two points,
    # weighted by its automorphism
    table = connected_hurwitz(2, 1, 4)
    assert table.value(0, (1, 1)) == Fraction(1, 2)
    assert table.value(1, (1, 1)) == Fraction(1, 2)


def test_zero_values_never_stored(oracle_table):
    for (g, alpha), value in oracle_table.entries.items():
        assert value > 0
        assert riemann_hurwitz_r(g, alpha) >= 0


def test_budget_guard(monkeypatch):
    monkeypatch.setenv("HURWITZ_MEMORY_BUDGET", "64")
    with pytest.raises(BudgetExceededError):
        count_factorizations(5, 10)


def test_table_json_roundtrip(oracle_table):
    records = oracle_table.to_json_records()
    assert records == sorted(
        records, key=lambda r: (r["g"], sum(r["alpha"]), tuple(r["alpha"]))
    )
    back = HurwitzTable.from_json_records(records)
    assert back.entries == oracle_table.entries


def test_table_validates_entries():
    table = HurwitzTable("test")
    with pytest.raises(ValueError):
        table.add(-1, (1,), 1)
    with pytest.raises(ValueError):
        table.add(0, (1, 1, 1), -4)
