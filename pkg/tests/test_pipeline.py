"""Constructive pipeline: reduction frame, derivation, commutant, relation."""

from fractions import Fraction

import pytest

from bcpair import (BivarPoly, DiffOp, PipelineError, TruncationTooShort,
                    XLAURENT_RING, XLaurent, ZSeries, chi_series_triple,
                    curve_series, derive_L1_coeffs, ep, find_bc_relation,
                    lambda_fn, make_l1, make_l2, make_limit_op, mu_fn,
                    reduce_with_frame, reduction_frame, solve_commuting,
                    verify_rank3, xl)
from bcpair.pipeline import _eps_shifts, _in_span
from conftest import rng

F = Fraction


def test_reduction_frame_matches_right_reduce(chis24):
    # the frame must agree with generic operator division for a small case
    from bcpair import right_reduce, ZSERIES_RING
    chi0, chi1, chi2 = (s.truncate(8) for s in chis24)
    frame = reduction_frame(chi0, chi1, chi2, 5)
    t = DiffOp([-chi0, -chi1, -chi2, ZSeries.one()], ZSERIES_RING)
    d5 = DiffOp.d(5, ZSERIES_RING)
    _, rem = right_reduce(d5, t)
    for j in range(3):
        assert rem.coefficient(j).eq_known(frame[5][j])


def test_right_reduce_l1_by_rank3_divisor(chis24, lam24, l1):
    # generic division route: quotient order 6, remainder (lambda)*D^0
    from bcpair import right_reduce, ZSERIES_RING
    chi0, chi1, chi2 = (s.truncate(12) for s in chis24)
    t = DiffOp([-chi0, -chi1, -chi2, ZSeries.one()], ZSERIES_RING)
    l1s = DiffOp([ZSeries.constant(c) for c in l1.coeffs], ZSERIES_RING)
    q, rem = right_reduce(l1s, t)
    assert q.order == 6
    assert rem.coefficient(0).eq_known(lam24.truncate(int(rem.coefficient(0).upper)))
    assert rem.coefficient(1).is_zero() and rem.coefficient(2).is_zero()


def test_verify_rank3_l1(chis24, lam24, l1):
    rep = verify_rank3(l1, chis24, lam24)
    assert rep.passed
    assert rep.verified_nonneg_orders >= 8
    assert rep.first_failure is None


def test_verify_rank3_l2(chis24, mu24, l2):
    rep = verify_rank3(l2, chis24, mu24)
    assert rep.passed
    assert rep.verified_nonneg_orders >= 8


def test_verify_rank3_perturbation_fails(chis24, lam24, l1):
    rep = verify_rank3(l1 + DiffOp.d(1, XLAURENT_RING), chis24, lam24)
    assert not rep.passed
    assert rep.first_failure[0] == 1      # the Q_1 component breaks first


def test_verify_rank3_wrong_eigenvalue(chis24, l2, mu24):
    # the eigenvalue of L2 is mu exactly; shifting it must fail at z^0
    shifted = mu24 + ZSeries.constant(xl({0: {4: F(1, 9)}}))
    rep = verify_rank3(l2, chis24, shifted)
    assert not rep.passed and rep.first_failure == (0, 0)


def test_derive_l1_matches_catalog(chis24, l1):
    chis = tuple(s.truncate(16) for s in chis24)
    coeffs = derive_L1_coeffs(*chis)
    for n in range(8):
        assert coeffs[n] == l1.coefficient(n)


def test_derive_l1_truncation_independent(chis24):
    a = derive_L1_coeffs(*(s.truncate(14) for s in chis24), verify=False)
    b = derive_L1_coeffs(*(s.truncate(18) for s in chis24), verify=False)
    assert a == b


def test_derive_l1_eps_zero_specialization(chis24, limit_op):
    coeffs = derive_L1_coeffs(*(s.truncate(16) for s in chis24), verify=False)
    ident = DiffOp.identity(XLAURENT_RING)
    expect = limit_op.op_power(3) - ident
    for n in range(8):
        assert coeffs[n].substitute_eps(0) == expect.coefficient(n)


def test_derive_l1_truncation_too_short(chis24):
    with pytest.raises(TruncationTooShort):
        derive_L1_coeffs(*(s.truncate(6) for s in chis24))


def test_solve_commuting_constant_coefficients():
    sol = solve_commuting(DiffOp.d(3), 4, window=(-4, 4), eps_degree=0)
    assert sol.contains(DiffOp.d(4))
    assert sol.dimension == 4      # 1, D, D^2, D^3
    for h in sol.homogeneous_basis:
        assert DiffOp.d(3).commutator(h).is_zero()


@pytest.fixture(scope="module")
def sol9(l1):
    return solve_commuting(l1, 9)


def test_solve_commuting_order9(l1, sol9):
    assert sol9.dimension == 1
    assert sol9.contains(l1)
    ident = DiffOp.identity(XLAURENT_RING)
    assert _in_span(ident, _eps_shifts(sol9.homogeneous_basis, 8))


def test_solve_commuting_window_edge_warning(l1):
    # the true support reaches x^18; a window ending exactly there must warn
    sol = solve_commuting(l1, 9, window=(-12, 18))
    assert sol.contains(l1)
    assert any("window edge" in w for w in sol.warnings)


def test_solve_commuting_window_too_small(l1):
    with pytest.raises(PipelineError):
        solve_commuting(l1, 9, window=(-2, 2))


def test_affine_set_sample_and_membership(l1, sol9):
    sol = sol9
    r = rng(40)
    params = [F(r.randint(-20, 20), r.randint(1, 7))
              for _ in sol.homogeneous_basis]
    member = sol.sample(params)
    assert l1.commutator(member).is_zero()
    assert sol.contains(member)
    assert not sol.contains(sol.particular + DiffOp.d(1, XLAURENT_RING))


def test_find_bc_relation_trivial():
    q = find_bc_relation(DiffOp.d(1), DiffOp.d(2), 4)
    assert q == BivarPoly({(0, 1): ep(1), (2, 0): ep(-1)})


def test_find_bc_relation_d3_d4():
    q = find_bc_relation(DiffOp.d(3), DiffOp.d(4), 12)
    assert q == BivarPoly({(0, 3): ep(1), (4, 0): ep(-1)})


def test_find_bc_relation_limit_pair(limit_op):
    ident = DiffOp.identity(XLAURENT_RING)
    a = limit_op.op_power(3) - ident
    b = limit_op.op_power(4) - limit_op
    q = find_bc_relation(a, b, 36)
    assert q == BivarPoly({(0, 3): ep(1), (4, 0): ep(-1), (3, 0): ep(-1)})


def test_find_bc_relation_none_within_bound():
    assert find_bc_relation(DiffOp.d(2), DiffOp.d(3), 5) is None


def test_find_bc_relation_rejects_noncommuting():
    x_op = DiffOp.from_coeff(XLaurent.var(), XLAURENT_RING).compose(DiffOp.d(1))
    with pytest.raises(PipelineError):
        find_bc_relation(DiffOp.d(1) + x_op, DiffOp.d(2), 6)
