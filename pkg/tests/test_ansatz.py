"""Generating-series layer: the t -> phi substitution, the assembled
G_g potentials, the pole-form fits, and the structural verifiers."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitz.ansatz import (
    AnsatzForm,
    TContext,
    XpContext,
    ansatz_hurwitz_series,
    assemble_G,
    compare_series,
    extract_weight_slice,
    fit_constants,
    hurwitz_series,
    pair_correction_series,
    pole_basis_series,
    verify_change_theorem,
    verify_delta_annihilation,
    verify_euler_square,
    verify_genus_expansion,
    verify_phi_shift_expansion,
    verify_xi_on_I,
    xi_substitute,
)
from hurwitz.hodge import HodgeTable
from hurwitz.linalg import InconsistentSystemError


def test_phi_zero_is_tree_weighted():
    # [x^n p_n] phi_0 = n^n / n!
    ctx = XpContext(5)
    phi0 = ctx.phi_x(0)
    assert phi0.coeff({"x": 1, "p_1": 1}) == 1
    assert phi0.coeff({"x": 3, "p_3": 1}) == Fraction(27, 6)


def test_s_fixpoint_property():
    # s = x exp(phi_0(s, p)); spot-check via the defining equation
    ctx = XpContext(6)
    assert ctx.s() == ctx.ring.var("x") * ctx.phi_s(0).exp()


@given(st.integers(0, 4))
@settings(max_examples=5, deadline=None)
def test_xi_on_I(k):
    report = verify_xi_on_I(k, 7)
    assert report.ok, report.first_mismatch


@given(st.integers(0, 4))
@settings(max_examples=5, deadline=None)
def test_phi_shift_expansion(k):
    report = verify_phi_shift_expansion(k, 7)
    assert report.ok, report.first_mismatch


def test_euler_square(deep_table):
    assert verify_euler_square(8, deep_table).ok


def test_change_theorem_all_genera(deep_table, fitted):
    _, _, hodge = fitted
    for g in (0, 1, 2):
        report = verify_change_theorem(g, 8, deep_table, hodge)
        assert report.ok, (g, report.first_mismatch)


def test_pair_correction_is_symmetric_quadratic():
    ctx = XpContext(4)
    series = pair_correction_series(ctx)
    # i = j = 1 term: (1!/(0!0!)) * 1 * 1 / (2 * 2!) = 1/4
    assert series.coeff({"x": 2, "p_1": 2}) == Fraction(1, 4)
    # i, j = 1, 2 appears twice: 2 * (2!/0!1!) * 1 * 2 / (2 * 3!) = 4/6
    assert series.coeff({"x": 3, "p_1": 1, "p_2": 1}) == Fraction(2, 3)


def test_fit_reproduces_known_genus2_constants(fitted):
    form2, _, _ = fitted
    assert form2.constants[(2,)] == Fraction(7, 5760)
    assert form2.constants[(3,)] == Fraction(-1, 480)
    assert form2.constants[(4,)] == Fraction(1, 1152)
    assert form2.constants[(2, 2)] == Fraction(-5, 576)
    assert form2.constants[(2, 3)] == Fraction(29, 5760)
    assert form2.constants[(2, 2, 2)] == Fraction(7, 240)


def test_fit_writes_primitives_with_sign(fitted):
    _, _, hodge = fitted
    from hurwitz.hodge import HodgeKey

    # K_theta = (-1)^k <tau_theta lambda_k>: odd k flips the sign
    assert hodge.primitives[HodgeKey.make(2, (3,), 1)] == Fraction(1, 480)
    assert hodge.primitives[HodgeKey.make(2, (2,), 2)] == Fraction(7, 5760)


def test_fit_is_overdetermined_and_consistent(deep_table):
    # rank 6 with >= 10 surplus rows must already hold at d_fit = 6
    hodge = HodgeTable()
    form = fit_constants(2, deep_table, 6, hodge, min_surplus=10)
    assert len(form.constants) == 6


def test_fit_detects_corrupted_data(deep_table):
    from hurwitz.oracle import HurwitzTable
    from hurwitz.partitions import Partition

    bad = HurwitzTable("corrupt", dict(deep_table.entries))
    key = (2, Partition((1, 1, 1, 1, 1, 1)))
    assert key in bad.entries
    bad.entries[key] = bad.entries[key] + 1
    with pytest.raises(InconsistentSystemError):
        fit_constants(2, bad, 6, min_surplus=10)


def test_genus_expansion_reports(fitted):
    form2, _, hodge = fitted
    for report in verify_genus_expansion(2, form2, hodge):
        assert report.ok, (report.check, report.first_mismatch)


def test_delta_annihilation(fitted):
    _, _, hodge = fitted
    assert verify_delta_annihilation(1, hodge).ok
    assert verify_delta_annihilation(2, hodge).ok


def test_ansatz_series_equals_hurwitz_series(deep_table, fitted):
    form2, _, _ = fitted
    ctx = XpContext(6)
    lhs = ansatz_hurwitz_series(form2, ctx)
    rhs = hurwitz_series(deep_table, 2, ctx)
    assert lhs == rhs


def test_pole_basis_count_matches_unknowns():
    ctx = XpContext(4)
    assert len(pole_basis_series(2, ctx)) == 6
    assert len(pole_basis_series(3, ctx)) == 26


def test_weight_slice_partition():
    # weight grading slices a G-polynomial into disjoint pieces that sum
    # back; lambda-decorated terms sit at negative weight
    tctx = TContext(5, 4)
    hodge = HodgeTable()
    G = assemble_G(1, hodge, tctx)
    total = tctx.ring.zero()
    for w in range(-6, 7):
        total = total + extract_weight_slice(G, w)
    assert total == G
    assert extract_weight_slice(G, -1) != tctx.ring.zero()


def test_form_json_roundtrip(fitted):
    form2, _, _ = fitted
    obj = form2.to_json_obj()
    assert AnsatzForm.from_json_obj(obj).constants == form2.constants


def test_compare_series_reports_first_mismatch():
    ctx = XpContext(3)
    x = ctx.ring.var("x")
    report = compare_series(x, x + x**2, "probe", {"x_max": 3})
    assert not report.ok
    assert report.status == "fail"
    assert report.first_mismatch is not None
