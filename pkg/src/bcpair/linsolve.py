"""Exact linear algebra helpers for the constructive pipeline.

Three solvers live here, each deterministic:

* small dense Gaussian elimination over the rationals (first-nonzero pivot in
  column order),
* sparse forward echelon over a prime field, used with CRT and rational
  reconstruction for the big commutant systems (results are always re-verified
  by exact substitution at the call site, never trusted from elimination),
* sparse incremental echelon over the rationals for small column counts
  (kernel extraction for algebraic-relation discovery).

Plus Lagrange interpolation and the modular plumbing (primes, CRT, rational
reconstruction).
"""

from __future__ import annotations

import math
from fractions import Fraction


# ---------------------------------------------------------------------------
# dense exact elimination
# ---------------------------------------------------------------------------

def gauss_solve(matrix: list[list[Fraction]], rhs: list[Fraction]):
    """Solve M x = b exactly over Q.

    Returns (solution, None) for a unique solution of the (possibly
    overdetermined) consistent system, (None, reason) otherwise; ``reason`` is
    ("underdetermined", rank) or ("inconsistent", row_index).
    """
    m = len(matrix)
    if m == 0:
        return [], None
    n = len(matrix[0])
    a = [list(map(Fraction, row)) + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    piv_rows: list[int] = []
    row = 0
    for col in range(n):
        sel = None
        for r in range(row, m):
            if a[r][col]:
                sel = r
                break
        if sel is None:
            continue
        a[row], a[sel] = a[sel], a[row]
        pv = a[row][col]
        a[row] = [v / pv for v in a[row]]
        for r in range(m):
            if r != row and a[r][col]:
                f = a[r][col]
                ar, arow = a[r], a[row]
                a[r] = [ar[k] - f * arow[k] for k in range(n + 1)]
        piv_rows.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if a[r][n]:
            return None, ("inconsistent", r)
    if len(piv_rows) < n:
        return None, ("underdetermined", len(piv_rows))
    sol = [Fraction(0)] * n
    for r, col in enumerate(piv_rows):
        sol[col] = a[r][n]
    return sol, None


# ---------------------------------------------------------------------------
# primes / CRT / rational reconstruction
# ---------------------------------------------------------------------------

def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24 with these bases
    for base in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_stream(start: int = (1 << 61) - 1):
    """Deterministic descending stream of primes below 2^61."""
    n = start
    while True:
        if _is_probable_prime(n):
            yield n
        n -= 2 if n % 2 else 1


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Combine residues; moduli must be coprime."""
    inv = pow(m1, -1, m2)
    t = ((r2 - r1) * inv) % m2
    return r1 + m1 * t, m1 * m2


def rational_reconstruct(r: int, m: int) -> Fraction | None:
    """Find num/den = r (mod m) with |num|, den <= sqrt(m/2), or None."""
    r %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, r
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    if t1 < 0:
        r1, t1 = -r1, -t1
    if math.gcd(r1, t1) != 1 or math.gcd(t1, m) != 1:
        return None
    return Fraction(r1, t1)


def fraction_mod(f: Fraction, p: int) -> int:
    num, den = f.numerator, f.denominator
    if den % p == 0:
        raise ZeroDivisionError("denominator not invertible mod p")
    return num * pow(den, -1, p) % p


# ---------------------------------------------------------------------------
# sparse echelon over GF(p)
# ---------------------------------------------------------------------------

class ModEchelon:
    """Forward echelon over GF(p) with sparse dict rows.

    Rows carry an extra right-hand-side scalar.  Pivot columns follow a fixed
    total order (the integer column ids); the first row to claim a column
    keeps it, which is deterministic for a fixed insertion order.
    """

    def __init__(self, p: int):
        self.p = p
        self.rows: dict[int, tuple[dict[int, int], int]] = {}  # pivot col -> (row, rhs)
        self.inconsistent = False

    def insert(self, row: dict[int, int], rhs: int) -> None:
        p = self.p
        row = {c: v % p for c, v in row.items() if v % p}
        rhs %= p
        while row:
            lead = min(row)
            hit = self.rows.get(lead)
            if hit is None:
                inv = pow(row[lead], -1, p)
                row = {c: v * inv % p for c, v in row.items()}
                self.rows[lead] = (row, rhs * inv % p)
                return
            prow, prhs = hit
            f = row[lead]
            for c, v in prow.items():
                nv = (row.get(c, 0) - f * v) % p
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            rhs = (rhs - f * prhs) % p
        if rhs:
            self.inconsistent = True

    def pivot_columns(self) -> set[int]:
        return set(self.rows)

    def _back_substitute(self, columns: list[int], free_values: dict[int, int],
                         use_rhs: bool) -> dict[int, int]:
        p = self.p
        sol = {c: free_values.get(c, 0) for c in columns if c not in self.rows}
        for lead in sorted(self.rows, reverse=True):
            row, rhs = self.rows[lead]
            acc = rhs if use_rhs else 0
            for c, v in row.items():
                if c == lead:
                    continue
                s = sol.get(c, 0)
                if s:
                    acc = (acc - v * s) % p
            sol[lead] = acc % p
        return sol

    def solve_particular(self, columns: list[int]) -> dict[int, int]:
        """Solution with every free column set to 0."""
        return self._back_substitute(columns, {}, use_rhs=True)

    def kernel_vector(self, columns: list[int], free_col: int) -> dict[int, int]:
        """Homogeneous solution with 1 at ``free_col``, 0 at other free columns."""
        return self._back_substitute(columns, {free_col: 1}, use_rhs=False)


# ---------------------------------------------------------------------------
# sparse echelon over Q (small column counts)
# ---------------------------------------------------------------------------

class FractionEchelon:
    """Incremental reduced echelon over Q with sparse dict rows (no RHS)."""

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    def insert(self, row: dict[int, Fraction]) -> None:
        row = {c: v for c, v in row.items() if v}
        while row:
            lead = min(row)
            prow = self.rows.get(lead)
            if prow is None:
                inv = 1 / row[lead]
                self.rows[lead] = {c: v * inv for c, v in row.items()}
                return
            f = row[lead]
            for c, v in prow.items():
                nv = row.get(c, Fraction(0)) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)

    def rank(self) -> int:
        return len(self.rows)

    def reduce_vector(self, row: dict) -> dict:
        """Forward-reduce a vector against the echelon; residual is returned."""
        row = {c: v for c, v in row.items() if v}
        while row:
            lead = min(row)
            prow = self.rows.get(lead)
            if prow is None:
                return row
            f = row[lead]
            for c, v in prow.items():
                nv = row.get(c, Fraction(0)) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        return row

    def kernel_basis(self, columns: list[int]) -> list[dict[int, Fraction]]:
        """One kernel vector per free column (value 1 there), fully reduced."""
        piv = set(self.rows)
        free = [c for c in columns if c not in piv]
        basis = []
        for fcol in free:
            vec = {fcol: Fraction(1)}
            for lead in sorted(self.rows, reverse=True):
                row = self.rows[lead]
                acc = Fraction(0)
                for c, v in row.items():
                    if c == lead:
                        continue
                    s = vec.get(c)
                    if s:
                        acc -= v * s
                if acc:
                    vec[lead] = acc
            basis.append(vec)
        return basis


# ---------------------------------------------------------------------------
# interpolation
# ---------------------------------------------------------------------------

def lagrange_coefficients(points: list[tuple[Fraction, Fraction]]) -> list[Fraction]:
    """Exact coefficients (ascending degree) of the Lagrange interpolant."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    xs = [Fraction(x) for x, _ in points]
    for i, (xi, yi) in enumerate(points):
        # numerator polynomial prod_{j != i} (t - x_j), built incrementally
        num = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = [Fraction(0)] + num
            for k in range(len(num) - 1):
                num[k] -= xj * num[k + 1]
            denom *= xi - xj
        scale = Fraction(yi) / denom
        for k in range(len(num)):
            coeffs[k] += scale * num[k]
    return coeffs
