"""High-precision verification of the pole-data compatibility system."""

from fractions import Fraction

import pytest
from mpmath import mp, mpf, workdps

from bcpair import (BranchAssignment, gamma_equation_residual, gamma_eval,
                    kn_check, kn_residuals, pole_data_from_chi)
from bcpair.kncheck import Jet, _point_quantities, default_tolerance

F = Fraction


def test_jet_arithmetic():
    with workdps(30):
        x = Jet((mpf(2), mpf(1), mpf(0)))
        p = x * x + 3 * x - 1          # value 9, d1 = 2x+3 = 7, d2 = 2
        assert p.d[0] == 9 and p.d[1] == 7 and p.d[2] == 2
        q = 1 / x
        assert abs(q.d[1] + mpf(1) / 4) < mpf(10) ** -25
        s = x.sqrt_with_value(mp.sqrt(mpf(2)))
        assert abs((s * s).d[0] - 2) < mpf(10) ** -25
        assert abs((s * s).d[1] - 1) < mpf(10) ** -25


def test_gamma_values():
    assert gamma_eval(0, -1, 0)[0] == 0
    g = gamma_eval(1, -1, 0, 40)[0]
    with workdps(50):
        assert abs(g - mpf(2) ** (mpf(-1) / 3)) < mpf(10) ** -39


def test_gamma_derivatives_against_finite_differences():
    with workdps(60):
        h = mpf(10) ** -15
        x = mpf(3) / 2
        vals = gamma_eval(x, -1, 4, 50)
        plus = gamma_eval(x + h, -1, 3, 50)
        minus = gamma_eval(x - h, -1, 3, 50)
        for k in range(4):
            fd = (plus[k] - minus[k]) / (2 * h)
            assert abs(fd - vals[k + 1]) < mpf(10) ** -25


def test_gamma_domain_and_sign_checks():
    with pytest.raises(ValueError):
        gamma_eval(1, 1, 0)             # eps must be negative
    with pytest.raises(ValueError):
        gamma_eval(-2, -1, 0)           # x^3 + eps^2 <= 0
    with pytest.raises(ValueError):
        kn_residuals(0, -1)             # gamma vanishes at x = 0


def test_gamma_equation_residual_tiny():
    assert gamma_equation_residual(2, -1, 60) < mpf(10) ** -50
    assert gamma_equation_residual(F(3, 2), F(-2), 60) < mpf(10) ** -50


def test_cube_roots_of_unity():
    with workdps(60):
        a = (-1 + mp.sqrt(mpf(3)) * mp.mpc(0, 1)) / 2
        assert abs(a**3 - 1) < mpf(10) ** -55
        assert abs(1 + a + a**2) < mpf(10) ** -55


def test_kn_residuals_at_x2():
    data = kn_residuals(2, -1, 60)
    assert data.max_residual < default_tolerance(60)
    assert len(data.residuals) == 12
    # alpha_{i2} = 1 exactly by construction, d_{i2} = -2 gamma'/gamma
    with workdps(70):
        g, gp = gamma_eval(2, -1, 1, 60)
        for i in range(6):
            assert data.alphas[i][2].value() == 1
            assert abs(data.ds[i][2].value() + 2 * gp / g) < mpf(10) ** -50


def test_sigma_pairing():
    data = kn_residuals(2, -1, 50)
    # the second pole triple carries the conjugate sheet: alpha and d for
    # i and i+3 agree once the sign of the w-dependent part flips, which
    # shows up as both rows solving the system with the same gamma data
    for s in range(3):
        for j in range(2):
            assert data.alphas[s][j].value() != data.alphas[s + 3][j].value()
    flipped = _point_quantities(2, -1, 50, BranchAssignment(w_signs=(1, 1, 1)))
    for s in range(3):
        for j in range(2):
            assert abs(flipped.alphas[s][j].value()
                       - data.alphas[s + 3][j].value()) < mpf(10) ** -40


def test_residue_extraction_cross_check():
    alphas, ds = pole_data_from_chi(2, -1, 60)
    data = kn_residuals(2, -1, 60)
    for i in range(6):
        for j in range(3):
            assert abs(alphas[i][j].value() - data.alphas[i][j].value()) < mpf(10) ** -45
            assert abs(ds[i][j].value() - data.ds[i][j].value()) < mpf(10) ** -45


def test_displayed_variant_fails():
    with pytest.raises(ArithmeticError):
        kn_residuals(2, -1, 40, variant="displayed")


def test_kn_check_multipoint():
    rep = kn_check(points=(1, F(3, 2), 2, 3, 5), eps=-1, precision=60)
    assert rep.passed
    assert rep.max_residual < mpf(10) ** -40
    assert rep.max_gamma_residual < mpf(10) ** -50


def test_kn_residuals_other_eps():
    data = kn_residuals(3, F(-1, 2), 60)
    assert data.max_residual < default_tolerance(60)
