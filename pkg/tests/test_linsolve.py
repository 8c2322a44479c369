"""Linear algebra helpers: exact solvers, modular plumbing, interpolation."""

from fractions import Fraction

from bcpair import linsolve
from conftest import rng

F = Fraction


def test_gauss_solve_unique():
    mat = [[F(2), F(1)], [F(1), F(-1)], [F(3), F(0)]]
    rhs = [F(5), F(1), F(6)]
    sol, err = linsolve.gauss_solve(mat, rhs)
    assert err is None and sol == [F(2), F(1)]


def test_gauss_solve_inconsistent():
    mat = [[F(1), F(1)], [F(1), F(1)]]
    rhs = [F(1), F(2)]
    sol, err = linsolve.gauss_solve(mat, rhs)
    assert sol is None and err[0] == "inconsistent"


def test_gauss_solve_underdetermined():
    mat = [[F(1), F(1)]]
    rhs = [F(1)]
    sol, err = linsolve.gauss_solve(mat, rhs)
    assert sol is None and err[0] == "underdetermined"


def test_gauss_solve_random_round_trip():
    r = rng(30)
    for _ in range(150):
        n = r.randint(1, 5)
        x = [F(r.randint(-9, 9), r.randint(1, 5)) for _ in range(n)]
        mat = [[F(r.randint(-5, 5)) for _ in range(n)] for _ in range(n + 1)]
        rhs = [sum(mat[i][j] * x[j] for j in range(n)) for i in range(n + 1)]
        sol, err = linsolve.gauss_solve(mat, rhs)
        if sol is not None:
            assert sol == x
        else:
            assert err[0] == "underdetermined"


def test_prime_stream_and_primality():
    it = linsolve.prime_stream()
    p1, p2 = next(it), next(it)
    assert p1 == (1 << 61) - 1
    assert p1 != p2
    assert linsolve._is_probable_prime(p2)
    assert not linsolve._is_probable_prime(p1 * p2)


def test_crt_and_reconstruction():
    r = rng(31)
    it = linsolve.prime_stream()
    p1, p2 = next(it), next(it)
    for _ in range(300):
        f = F(r.randint(-10**12, 10**12), r.randint(1, 10**6))
        r1 = linsolve.fraction_mod(f, p1)
        r2 = linsolve.fraction_mod(f, p2)
        combined, modulus = linsolve.crt_pair(r1, p1, r2, p2)
        assert linsolve.rational_reconstruct(combined, modulus) == f


def test_reconstruction_failure_is_detected():
    # a value too large for a single prime's bound comes back None or wrong;
    # with the paired modulus it must round-trip exactly
    p = next(linsolve.prime_stream())
    big = F(10**20, 7)
    r1 = linsolve.fraction_mod(big, p)
    rec = linsolve.rational_reconstruct(r1, p)
    assert rec != big


def test_mod_echelon_solve_and_kernel():
    p = 10**9 + 7
    ech = linsolve.ModEchelon(p)
    # x + y = 3, x - y = 1  -> x = 2, y = 1
    ech.insert({0: 1, 1: 1}, 3)
    ech.insert({0: 1, 1: p - 1}, 1)
    sol = ech.solve_particular([0, 1])
    assert sol[0] == 2 and sol[1] == 1
    # homogeneous system with a free column
    ech2 = linsolve.ModEchelon(p)
    ech2.insert({0: 1, 1: p - 2}, 0)     # x = 2y
    vec = ech2.kernel_vector([0, 1], 1)
    assert vec[1] == 1 and vec[0] == 2


def test_mod_echelon_inconsistency():
    p = 10**9 + 7
    ech = linsolve.ModEchelon(p)
    ech.insert({0: 1}, 1)
    ech.insert({0: 1}, 2)
    assert ech.inconsistent


def test_fraction_echelon_kernel():
    ech = linsolve.FractionEchelon()
    ech.insert({0: F(1), 1: F(1), 2: F(1)})
    ech.insert({0: F(1), 1: F(2), 2: F(3)})
    basis = ech.kernel_basis([0, 1, 2])
    assert len(basis) == 1
    vec = basis[0]
    assert vec[0] + vec[1] + vec[2] == 0
    assert vec[0] + 2 * vec[1] + 3 * vec[2] == 0
    assert ech.reduce_vector({0: F(2), 1: F(3), 2: F(4)}) == {}


def test_lagrange_interpolation():
    # p(t) = t^2 - 3/2 t + 2
    pts = [(F(0), F(2)), (F(1), F(3, 2)), (F(2), F(3))]
    assert linsolve.lagrange_coefficients(pts) == [F(2), F(-3, 2), F(1)]


def test_lagrange_round_trip_seeded():
    r = rng(32)
    for _ in range(100):
        deg = r.randint(0, 6)
        coeffs = [F(r.randint(-9, 9), r.randint(1, 4)) for _ in range(deg + 1)]
        xs = r.sample(range(1, 40), deg + 1)
        pts = [(F(x), sum(c * F(x) ** k for k, c in enumerate(coeffs)))
               for x in xs]
        got = linsolve.lagrange_coefficients(pts)
        assert got[:deg + 1] == coeffs
        assert all(v == 0 for v in got[deg + 1:])
