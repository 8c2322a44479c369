"""Operator ring: composition, commutators, powers, application, reduction."""

from fractions import Fraction

import pytest

from bcpair import (BivarPoly, CoefficientRingMismatch, DiffOp,
                    NonCommutingPair, ReductionError, XLAURENT_RING,
                    ZSERIES_RING, XLaurent, ZSeries, commutator, compose,
                    ep, eval_poly_at_pair, op_power, right_reduce, xl)
from bcpair.diffop import binom
from conftest import random_xlaurent, rng

F = Fraction
D = DiffOp.d(1, XLAURENT_RING)
I = DiffOp.identity(XLAURENT_RING)


def coeff_op(c: XLaurent) -> DiffOp:
    return DiffOp.from_coeff(c, XLAURENT_RING)


def random_op(r, max_order=3) -> DiffOp:
    return DiffOp([random_xlaurent(r, xspan=2, terms=2)
                   for _ in range(r.randint(1, max_order + 1))], XLAURENT_RING)


def test_binomials():
    import math
    assert binom(9, 2) == 36
    assert binom(48, 24) == math.comb(48, 24)
    assert binom(3, 5) == 0


def test_compose_first_order_leibniz():
    a = xl({2: 1, -1: F(1, 3)})
    lhs = D.compose(coeff_op(a))
    assert lhs == coeff_op(a).compose(D) + coeff_op(a.derive())


def test_compose_d2_x2():
    # D^2 . x^2 = x^2 D^2 + 4x D + 2, checked against applications to x^k
    lhs = DiffOp.d(2).compose(coeff_op(xl({2: 1})))
    rhs = DiffOp([xl({0: 2}), xl({1: 4}), xl({2: 1})], XLAURENT_RING)
    assert lhs == rhs
    for k in range(5):
        f = xl({k: 1})
        assert lhs.apply(f) == DiffOp.d(2).apply(coeff_op(xl({2: 1})).apply(f))


def test_compose_identity():
    r = rng(10)
    for _ in range(50):
        a = random_op(r)
        assert a.compose(I) == a
        assert I.compose(a) == a


def test_order_and_leading_coefficient_multiplicative():
    r = rng(11)
    for _ in range(200):
        a, b = random_op(r), random_op(r)
        if a.is_zero() or b.is_zero():
            continue
        prod = a.compose(b)
        assert prod.order == a.order + b.order
        assert prod.leading_coefficient() == \
            a.leading_coefficient() * b.leading_coefficient()


def test_mixed_rings_rejected():
    zs = DiffOp.d(1, ZSERIES_RING)
    with pytest.raises(CoefficientRingMismatch):
        D.compose(zs)


def test_commutator_weyl():
    x_op = coeff_op(XLaurent.var())
    assert commutator(D, x_op) == I


def test_commutator_antisymmetry_and_self():
    r = rng(12)
    for _ in range(300):
        a, b = random_op(r, 2), random_op(r, 2)
        assert commutator(a, a).is_zero()
        assert commutator(a, b) == -commutator(b, a)


def test_jacobi_identity():
    r = rng(13)
    for _ in range(60):
        a, b, c = (random_op(r, 2) for _ in range(3))
        total = (commutator(a, commutator(b, c))
                 + commutator(b, commutator(c, a))
                 + commutator(c, commutator(a, b)))
        assert total.is_zero()


def test_op_power_basics():
    r = rng(14)
    a = random_op(r, 2)
    assert op_power(a, 0) == I
    assert op_power(a, 1) == a
    d3 = op_power(D, 3)
    assert d3.order == 3 and d3.is_monic()
    assert op_power(a, 3) == a.compose(a).compose(a)


def test_apply_basics():
    assert D.apply(xl({3: 1})) == xl({2: 3})
    euler = coeff_op(XLaurent.var()).compose(D)
    for n in (-3, -1, 1, 2, 5):
        assert euler.apply(xl({n: 1})) == xl({n: n})


def test_apply_homomorphism_seeded():
    r = rng(15)
    for _ in range(200):
        a, b = random_op(r, 2), random_op(r, 2)
        f = random_xlaurent(r, xspan=3, terms=3)
        assert a.compose(b).apply(f) == a.apply(b.apply(f))


def test_apply_zseries():
    s = ZSeries(0, [xl({1: 1}), xl({2: 1})], 2)
    out = D.apply(s)
    assert out.coefficient(0) == xl({0: 1})
    assert out.coefficient(1) == xl({1: 2})


def test_eval_poly_trivial():
    r = rng(16)
    a = random_op(r, 2)
    q = BivarPoly({(1, 0): ep(1)})
    assert eval_poly_at_pair(q, a, a) == a


def test_eval_poly_d_pair():
    q = BivarPoly({(0, 1): ep(1), (2, 0): ep(-1)})  # w - z^2
    assert eval_poly_at_pair(q, D, DiffOp.d(2)).is_zero()


def test_eval_poly_monomial_order_independent():
    q = BivarPoly({(2, 1): ep(2), (0, 2): ep(-1), (1, 0): ep(3), (0, 0): ep(5)})
    a, b = DiffOp.d(2), DiffOp.d(3)
    total = DiffOp.zero(XLAURENT_RING)
    for ze, we in sorted(q.c, reverse=True):
        total = total + op_power(a, ze).compose(op_power(b, we)).scale(q.c[(ze, we)])
    assert eval_poly_at_pair(q, a, b) == total


def test_eval_poly_rejects_noncommuting():
    x_op = coeff_op(XLaurent.var())
    with pytest.raises(NonCommutingPair, match="W_0"):
        eval_poly_at_pair(BivarPoly({(1, 1): ep(1)}), D, x_op)


def test_right_reduce_by_self():
    r = rng(17)
    t = DiffOp([random_xlaurent(r), random_xlaurent(r), random_xlaurent(r),
                XLaurent.one()], XLAURENT_RING)
    q, rem = right_reduce(t, t)
    assert q == I and rem.is_zero()


def test_right_reduce_one_step():
    r = rng(18)
    c0, c1, c2 = (random_xlaurent(r) for _ in range(3))
    t = DiffOp([-c0, -c1, -c2, XLaurent.one()], XLAURENT_RING)
    q, rem = right_reduce(DiffOp.d(3), t)
    assert q == I
    assert rem == DiffOp([c0, c1, c2], XLAURENT_RING)


def test_right_reduce_round_trip_seeded():
    r = rng(19)
    for _ in range(200):
        a = random_op(r, 5)
        t = DiffOp([random_xlaurent(r, 2, 2) for _ in range(3)] + [XLaurent.one()],
                   XLAURENT_RING)
        q, rem = right_reduce(a, t)
        assert q.compose(t) + rem == a
        assert rem.is_zero() or rem.order < t.order


def test_right_reduce_requires_monic():
    t = DiffOp([XLaurent.one(), xl({0: 2})], XLAURENT_RING)
    with pytest.raises(ReductionError):
        right_reduce(DiffOp.d(2), t)


def test_zero_operator_order_sentinel():
    z = DiffOp.zero(XLAURENT_RING)
    assert z.order == float("-inf")
    assert z.compose(D).is_zero()
    assert (z.order + D.order) == float("-inf")


def test_substitute_eps_on_operator():
    a = DiffOp([xl({0: {2: F(1, 3)}}), xl({1: {0: 1, 4: 2}})], XLAURENT_RING)
    at2 = a.substitute_eps(2)
    assert at2 == DiffOp([xl({0: F(4, 3)}), xl({1: 33})], XLAURENT_RING)
    assert a.substitute_eps(0) == DiffOp([XLaurent.zero(), xl({1: 1})], XLAURENT_RING)
