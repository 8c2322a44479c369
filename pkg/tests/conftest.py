import random
from fractions import Fraction

import pytest

from bcpair import (EpsPoly, XLaurent, chi_series_triple, curve_series,
                    lambda_fn, make_l1, make_l2, make_limit_op, mu_fn)

SEED = 20120715


@pytest.fixture(scope="session")
def l1():
    return make_l1()


@pytest.fixture(scope="session")
def l2():
    return make_l2()


@pytest.fixture(scope="session")
def limit_op():
    return make_limit_op()


@pytest.fixture(scope="session")
def chis24():
    return chi_series_triple(24)


@pytest.fixture(scope="session")
def lam24():
    return curve_series(lambda_fn(), 24)


@pytest.fixture(scope="session")
def mu24():
    return curve_series(mu_fn(), 24)


def rng(salt: int = 0) -> random.Random:
    return random.Random(SEED + salt)


def random_fraction(r: random.Random, span: int = 9) -> Fraction:
    return Fraction(r.randint(-span, span), r.randint(1, 4))


def random_epspoly(r: random.Random, max_exp: int = 4) -> EpsPoly:
    return EpsPoly({r.randint(0, max_exp): random_fraction(r)
                    for _ in range(r.randint(0, 2))})


def random_xlaurent(r: random.Random, xspan: int = 3, terms: int = 3) -> XLaurent:
    return XLaurent({r.randint(-xspan, xspan): random_epspoly(r)
                     for _ in range(r.randint(0, terms))})
