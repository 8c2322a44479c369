"""High-precision numeric verification of the deformation-parameter system.

The twelve compatibility equations on the pole data (gamma_i, alpha_ij, d_ij)
are evaluated at rational sample points with mpmath arbitrary-precision
complex arithmetic.  All x-derivatives come from exact jet propagation
through the closed forms of gamma and its derivatives (finite differences
exist only as a cross-check); the fractional-power constants carry explicit
branch choices, searched over a finite set when the principal ones fail.

Only eps < 0 is supported; the closed-form solution of the gamma equation
assumes it, and positive eps is untested territory.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf, mpmathify

GUARD_DIGITS = 10

_BINOM_MAX = 8
_binom_rows = [[1]]
for _n in range(1, _BINOM_MAX + 1):
    _prev = _binom_rows[-1]
    _binom_rows.append([1] + [_prev[i] + _prev[i + 1] for i in range(_n - 1)] + [1])


def _binom(n, k):
    return _binom_rows[n][k]


class Jet:
    """Truncated derivative table: d[k] is the k-th x-derivative's value."""

    __slots__ = ("d",)

    def __init__(self, values):
        self.d = tuple(values)

    @classmethod
    def const(cls, value, order: int) -> "Jet":
        return cls((mpmathify(value),) + (mpf(0),) * order)

    @property
    def order(self) -> int:
        return len(self.d) - 1

    def value(self):
        return self.d[0]

    def derivative(self) -> "Jet":
        if len(self.d) < 2:
            raise ValueError("jet order too low for a derivative")
        return Jet(self.d[1:])

    def _pair(self, other):
        if not isinstance(other, Jet):
            other = Jet.const(other, self.order)
        n = min(len(self.d), len(other.d))
        return self.d[:n], other.d[:n], n

    def __add__(self, other):
        a, b, n = self._pair(other)
        return Jet(tuple(a[k] + b[k] for k in range(n)))

    __radd__ = __add__

    def __sub__(self, other):
        a, b, n = self._pair(other)
        return Jet(tuple(a[k] - b[k] for k in range(n)))

    def __rsub__(self, other):
        a, b, n = self._pair(other)
        return Jet(tuple(b[k] - a[k] for k in range(n)))

    def __neg__(self):
        return Jet(tuple(-v for v in self.d))

    def __mul__(self, other):
        a, b, n = self._pair(other)
        return Jet(tuple(
            sum(_binom(k, i) * a[i] * b[k - i] for i in range(k + 1))
            for k in range(n)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b, n = self._pair(other)
        out = []
        for k in range(n):
            acc = a[k]
            for i in range(k):
                acc -= _binom(k, i) * out[i] * b[k - i]
            out.append(acc / b[0])
        return Jet(tuple(out))

    def __rtruediv__(self, other):
        return Jet.const(other, self.order) / self

    def __pow__(self, n: int):
        out = Jet.const(1, self.order)
        for _ in range(n):
            out = out * self
        return out

    def sqrt_with_value(self, root0) -> "Jet":
        """Square-root jet whose value is the caller-chosen branch ``root0``."""
        out = [mpmathify(root0)]
        for k in range(1, len(self.d)):
            acc = self.d[k]
            for i in range(1, k):
                acc -= _binom(k, i) * out[i] * out[k - i]
            out.append(acc / (2 * out[0]))
        return Jet(tuple(out))


# ---------------------------------------------------------------------------
# gamma and its exact derivatives
# ---------------------------------------------------------------------------

def _check_domain(x, eps):
    eps = Fraction(eps) if not isinstance(eps, Fraction) else eps
    if eps >= 0:
        raise ValueError("eps must be negative")
    return eps


def gamma_eval(x, eps, derivatives: int = 4, precision: int = 60):
    """gamma = x/(x^3 + eps^2)^(1/3) and derivatives, real cube-root branch.

    ``x`` must be real with x^3 + eps^2 > 0; returns derivative values
    0..``derivatives`` at the requested decimal precision.
    """
    eps = _check_domain(x, eps)
    if derivatives < 0 or derivatives > 4:
        raise ValueError("0 to 4 derivatives are available")
    with mp.workdps(precision + GUARD_DIGITS):
        xv = mpmathify(x)
        e2 = mpmathify(eps) ** 2
        u = xv**3 + e2
        if u <= 0:
            raise ValueError("outside the domain: x^3 + eps^2 must be positive")
        ur = lambda p: u ** (mpf(-p) / 3)
        vals = [
            xv * ur(1),
            e2 * ur(4),
            -4 * e2 * xv**2 * ur(7),
            e2 * (-8 * xv * ur(7) + 28 * xv**4 * ur(10)),
            e2 * (-8 * ur(7) + 168 * xv**3 * ur(10) - 280 * xv**6 * ur(13)),
        ]
        return vals[:derivatives + 1]


def gamma_equation_residual(x, eps, precision: int = 60):
    """|1 - 2 gamma^3 + gamma^6 + eps * gamma'^(3/2)| on the real branch."""
    with mp.workdps(precision + GUARD_DIGITS):
        g, gp = gamma_eval(x, eps, 1, precision + GUARD_DIGITS)[:2]
        return abs(1 - 2 * g**3 + g**6 + mpmathify(eps) * gp ** mpf(1.5))


# ---------------------------------------------------------------------------
# branch bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BranchAssignment:
    """Fourth roots rotate the principal value by i^k; square roots by (-1)^k."""

    m3_quarter: int = 0        # (-3)^(1/4)
    m3_three_quarter: int = 0  # (-3)^(3/4)
    c4_quarter: int = 0        # c4^(1/4); c4^(3/4) is its cube
    sqrt_3c4: int = 0          # sqrt(3 c4)
    sqrt_gamma_prime: int = 0  # sqrt(gamma'); gamma'^(3/2) is its cube
    w_signs: tuple = (0, 0, 0)  # sheet of w at the three finite poles

    def describe(self) -> dict:
        return {
            "(-3)^(1/4)": f"principal * i^{self.m3_quarter}",
            "(-3)^(3/4)": f"principal * i^{self.m3_three_quarter}",
            "c4^(1/4)": f"principal * i^{self.c4_quarter}",
            "sqrt(3*c4)": f"principal * (-1)^{self.sqrt_3c4}",
            "sqrt(gamma')": f"principal * (-1)^{self.sqrt_gamma_prime}",
            "w at poles": [f"principal * (-1)^{s}" for s in self.w_signs],
        }


@dataclass
class KNData:
    """One sample-point evaluation: parameters, pole data and residuals."""

    x: object
    eps: object
    precision: int
    branch: BranchAssignment
    alphas: list          # alphas[i][j], i = 0..5, j = 0..2
    ds: list              # ds[i][j]
    residuals: list       # 12 values: Eq[i,0], Eq[i,1] for i = 1..6
    max_residual: object


def _point_quantities(x, eps, precision, branch: BranchAssignment,
                      variant: str = "resolved"):
    """All pole-data quantities at one x, as jets; returns KNData.

    ``variant="resolved"`` uses the H_s and tau_0 closed forms forced by the
    verified chi_0 (the published display of those two is inconsistent with
    chi_0 and never satisfies the system); ``variant="displayed"`` keeps the
    published forms, for demonstrating that failure.
    """
    eps = _check_domain(x, eps)
    with mp.workdps(precision + GUARD_DIGITS):
        I = mpc(0, 1)
        gs = gamma_eval(x, eps, 4, precision)
        g = Jet(gs)                    # gamma, order 4
        gp = g.derivative()            # gamma', order 3
        gpp = gp.derivative()
        gppp = gpp.derivative()
        g4 = gppp.derivative()
        ev = mpmathify(eps)
        c4 = -ev**4 / 3888

        r34 = mpc(-3) ** (mpf(3) / 4) * I**branch.m3_three_quarter
        cq = mpc(c4) ** (mpf(1) / 4) * I**branch.c4_quarter
        sc = mp.sqrt(mpc(3 * c4)) * (-1) ** branch.sqrt_3c4
        sq = gp.sqrt_with_value(mp.sqrt(gp.value()) * (-1) ** branch.sqrt_gamma_prime)
        sq3 = sq * sq * sq             # gamma'^(3/2), same branch cubed
        cq3 = cq**3                    # c4^(3/4), same branch cubed

        a = (-1 + mp.sqrt(mpf(3)) * I) / 2
        aa = [mpc(1), a, a.conjugate()]

        h1 = I * r34 / cq * g * sq
        h0 = I * r34 * (g * gpp - 4 * gp * gp) / (2 * cq * sq)
        h1p = h1.derivative()
        h0p = h0.derivative()

        xjet = Jet((mpmathify(x), mpf(1), mpf(0), mpf(0), mpf(0)))
        ujet = xjet**3 + ev**2
        u13 = xjet / g                 # (x^3 + eps^2)^(1/3), real branch
        u23 = u13 * u13

        G = []
        H = []
        for s in range(3):
            ag2 = (aa[s] * g) * (aa[s] * g)
            P = h0 + ag2
            G.append((h1p - h0 - ag2) / (2 * h1) + gp / (2 * g) - gpp / (2 * gp))
            if variant == "displayed":
                H.append((P * h1p - 2 * h0p - 7 * aa[s] ** 2 * g * gp) / (2 * h1)
                         - P * P / (2 * h1 * h1) - h0 * gp / (2 * h1 * g)
                         + P * gpp / (2 * h1 * gp))
            else:
                H.append(-2 / (xjet * xjet) + aa[s] ** 2 * u13 / 18
                         - aa[s] * xjet * xjet * u23 / 648)

        g3 = g**3
        tau1 = ((4 * gp * gp - 9 * g * gpp) / (2 * g * g)
                + (4 * gp * gppp - 3 * gpp * gpp) / (4 * gp * gp)
                + I * (g3 - 1) * (g3 - 1) / (4 * sc * g * g * gp))
        if variant == "displayed":
            tau0 = (I * (g3 - 1) * (g3 - 1) / (sc * g3) - 1 / g
                    - I * (g3 - 1) * (g3 - 1) * gpp / (4 * sc * g * g * gp * gp)
                    - 2 * I * r34 * cq3 * g3 / (27 * sq3)
                    - I * r34 * (g3 - 1) * (g3 - 1) / (18 * cq * g * sq3)
                    - 3 * gppp / g + 10 * gp * gpp / (g * g) - 4 * gp**3 / g3
                    + g4 / gp - 5 * gpp * gppp / (2 * gp * gp)
                    + 3 * gpp**3 / (2 * gp**3) - 3 * gpp * gpp / (g * gp))
        else:
            x3 = xjet**3
            tau0 = 20 / ujet + 32 * ev**2 / (ujet * x3) - ujet * x3 / 2916
            _ = (g4, cq3, sq3)  # displayed variant uses these; resolved does not

        # w and dw/dz at the three finite poles z = a_s gamma
        w_jets = []
        wz_jets = []
        for s in range(3):
            zeta = aa[s] * g
            wsq = 1 - 2 * zeta**3 - (ev**4 / 3888) * zeta**4 + zeta**6
            root0 = mp.sqrt(wsq.value()) * (-1) ** branch.w_signs[s]
            w = wsq.sqrt_with_value(root0)
            wz = (-6 * zeta * zeta - (ev**4 / 972) * zeta**3 + 6 * zeta**5) / (2 * w)
            w_jets.append(w)
            wz_jets.append(wz)

        alphas = [[None] * 3 for _ in range(6)]
        ds = [[None] * 3 for _ in range(6)]
        one = Jet.const(1, g.order)
        for i in range(6):
            s = i % 3
            sigma = -1 if i >= 3 else 1
            w = w_jets[s] * sigma
            wz = wz_jets[s] * sigma
            ag = aa[s] * g
            ag2 = ag * ag
            alphas[i][0] = H[s] + w * h0 / (6 * g * g * gp) + aa[s] ** 2 * w / (6 * gp)
            alphas[i][1] = G[s] - w * h1 / (6 * g * g * gp)
            alphas[i][2] = one
            hsum = Jet.const(0, g.order)
            for m_ in (1, 2):
                hsum = hsum + (1 - aa[s] ** 2 * aa[(s + m_) % 3]) * H[(s + m_) % 3]
            ds[i][0] = (tau0 / 2 + aa[s] ** 2 / (2 * g) + gp * hsum / (3 * g)
                        + ((h0 + 2 * ag2) * w - (h0 + ag2) * ag * wz) / (6 * g3))
            if variant == "displayed":
                ds[i][1] = (tau1
                            - G[(s + 1) % 3] * gp / ((aa[s] - aa[(s + 1) % 3]) * g)
                            - G[(s + 2) % 3] * gp / ((aa[s] - aa[(s + 2) % 3]) * g)
                            + (ag * wz - w) * h1 / (6 * g3))
            else:
                # the gamma'_m = a_m gamma' factors of the pole expansion
                ds[i][1] = (tau1
                            - aa[(s + 1) % 3] * G[(s + 1) % 3] * gp
                            / ((aa[s] - aa[(s + 1) % 3]) * g)
                            - aa[(s + 2) % 3] * G[(s + 2) % 3] * gp
                            / ((aa[s] - aa[(s + 2) % 3]) * g)
                            + (ag * wz - w) * h1 / (6 * g3))
            ds[i][2] = -2 * gp / g

        residuals = []
        for i in range(6):
            a0, a1 = alphas[i][0], alphas[i][1]
            eq0 = a0 * a1 + a0 * ds[i][2] - a0.derivative() - ds[i][0]
            eq1 = a1 * a1 - a0 + a1 * ds[i][2] - a1.derivative() - ds[i][1]
            residuals.append(eq0.value())
            residuals.append(eq1.value())
        max_res = max(abs(r) for r in residuals)
        return KNData(x, eps, precision, branch, alphas, ds, residuals, max_res)


def _zpoly_eval(coeffs, z: Jet) -> Jet:
    out = Jet.const(0, z.order)
    for c in reversed(coeffs):
        out = out * z + c
    return out


def _zpoly_dz(coeffs):
    return [k * coeffs[k] for k in range(1, len(coeffs))]


def pole_data_from_chi(x, eps, precision: int = 60, w_signs=(0, 0, 0)):
    """alpha_ij and d_ij extracted from the chi functions at their poles.

    This is the defining property of the pole data (residue and constant term
    of each chi at each of the six poles) computed straight from the verified
    rational closed forms, with none of the intermediate parameter formulas.  It
    serves as the independent cross-check of the formula path.  Returns
    (alphas, ds) with the same indexing as KNData.
    """
    eps = _check_domain(x, eps)
    with mp.workdps(precision + GUARD_DIGITS):
        I = mpc(0, 1)
        ev = mpmathify(eps)
        g = Jet(gamma_eval(x, eps, 4, precision))
        gp = g.derivative()
        xj = Jet((mpmathify(x), mpf(1), mpf(0), mpf(0), mpf(0)))
        a = (-1 + mp.sqrt(mpf(3)) * I) / 2
        aa = [mpc(1), a, a.conjugate()]
        zero, one = Jet.const(0, 4), Jet.const(1, 4)
        x2 = xj * xj
        x3 = x2 * xj
        x6 = x3 * x3
        u = x3 + ev**2
        kappa = [-x3, zero, zero, u]

        # chi_j = (Na + Nb w)/D over the common denominators of the displays
        d0 = [zero] + [11664 * (x3 * c) for c in kappa]
        na0 = [5832 * (x3 * c) for c in kappa] + [zero]
        t2 = [zero] + [-2 * (x6 * u * c) for c in kappa]
        extra = [zero, -116640 * x3, 54 * ev**2 * x6, -1944 * ev**2 * x3,
                 116640 * x3 + Jet.const(186624 * ev**2, 4)]
        na0 = [na0[i] + t2[i] + extra[i] for i in range(5)]
        nb0 = [-5832 * x6, -209952 * x3]
        d1 = [12 * (x2 * c) for c in kappa]
        na1 = [-204 * x3, zero, -(ev**2) * x3, Jet.const(132 * ev**2, 4) + 204 * x3]
        nb1 = [-108 * x3]
        d2 = [xj * c for c in kappa]
        na2 = [zero, zero, zero, Jet.const(-3 * ev**2, 4)]
        nb2 = [zero]
        chis = [(na0, nb0, d0), (na1, nb1, d1), (na2, nb2, d2)]

        wcoeffs = [one, zero, zero, Jet.const(-2, 4),
                   Jet.const(-(ev**4) / 3888, 4), zero, one]
        wprime = _zpoly_dz(wcoeffs)

        alphas = [[None] * 3 for _ in range(6)]
        ds = [[None] * 3 for _ in range(6)]
        for i in range(6):
            s = i % 3
            sigma = -1 if i >= 3 else 1
            z0 = aa[s] * g
            wsq = _zpoly_eval(wcoeffs, z0)
            w = wsq.sqrt_with_value(mp.sqrt(wsq.value()) * (-1) ** w_signs[s]) * sigma
            wz = _zpoly_eval(wprime, z0) / (2 * w)
            for j, (na, nb, dd) in enumerate(chis):
                dp, dpp = _zpoly_dz(dd), _zpoly_dz(_zpoly_dz(dd))
                nap = _zpoly_dz(na)
                nbp = _zpoly_dz(nb) if len(nb) > 1 else []
                dpv = _zpoly_eval(dp, z0)
                nav, nbv = _zpoly_eval(na, z0), _zpoly_eval(nb, z0)
                res = (nav + nbv * w) / dpv          # residue at the simple pole
                const = ((_zpoly_eval(nap, z0)
                          + (_zpoly_eval(nbp, z0) if nbp else Jet.const(0, 4)) * w
                          + nbv * wz
                          - res * (_zpoly_eval(dpp, z0) * mpf("0.5"))) / dpv)
                alphas[i][j] = -res / (aa[s] * gp)
                ds[i][j] = const
        return alphas, ds


def default_tolerance(precision: int):
    return mpf(10) ** (-(precision - 20))


def find_branch(x, eps, precision: int = 60, tolerance=None,
                variant: str = "resolved") -> BranchAssignment:
    """Search the finite branch set for an assignment solving the system.

    Principal choices are tried first; the three w-sheets decouple per pole
    pair, so they are optimized independently for each global assignment.
    """
    if tolerance is None:
        tolerance = default_tolerance(precision)
    combos = sorted(itertools.product(range(4), range(4), range(4), range(2), range(2)),
                    key=lambda t: (sum(t), t))
    best = None
    for i14, i34, ic4, s3, sg in combos:
        w_signs = []
        worst = mpf(0)
        for s in range(3):
            per_sign = []
            for ws in (0, 1):
                signs = [0, 0, 0]
                signs[s] = ws
                data = _point_quantities(x, eps, precision,
                                         BranchAssignment(i14, i34, ic4, s3, sg,
                                                          tuple(signs)), variant)
                res = [data.residuals[2 * s], data.residuals[2 * s + 1],
                       data.residuals[2 * (s + 3)], data.residuals[2 * (s + 3) + 1]]
                per_sign.append((max(abs(r) for r in res), ws))
            m, ws = min(per_sign)
            w_signs.append(ws)
            worst = max(worst, m)
        cand = BranchAssignment(i14, i34, ic4, s3, sg, tuple(w_signs))
        if worst < tolerance:
            return cand
        if best is None or worst < best[0]:
            best = (worst, cand)
    raise ArithmeticError(
        f"no branch assignment reaches tolerance {tolerance}; "
        f"smallest max-residual achieved was {mp.nstr(best[0], 5)} at {best[1]}")


def kn_residuals(x, eps, precision: int = 60,
                 branch: BranchAssignment | None = None,
                 variant: str = "resolved") -> KNData:
    """The 12 compatibility residuals at one sample point.

    With ``branch=None`` the branch assignment is discovered at this point.
    x = 0 is excluded (gamma vanishes there).
    """
    if x == 0:
        raise ValueError("x = 0 is excluded: gamma vanishes")
    if branch is None:
        branch = find_branch(x, eps, precision, variant=variant)
    return _point_quantities(x, eps, precision, branch, variant)


@dataclass
class KNReport:
    """Multi-point verification summary."""

    eps: object
    precision: int
    tolerance: object
    branch: BranchAssignment
    points: list
    max_residuals: list
    gamma_residuals: list
    passed: bool

    @property
    def max_residual(self):
        return max(self.max_residuals)

    @property
    def max_gamma_residual(self):
        return max(self.gamma_residuals)


def kn_check(points=(1, Fraction(3, 2), 2, 3, 5), eps=-1, precision: int = 60,
             tolerance=None, variant: str = "resolved") -> KNReport:
    """Discover the branch at the first point, verify all points with it."""
    pts = list(points)
    if tolerance is None:
        tolerance = default_tolerance(precision)
    branch = find_branch(pts[0], eps, precision, tolerance, variant)
    max_residuals = []
    gamma_residuals = []
    for x in pts:
        data = _point_quantities(x, eps, precision, branch, variant)
        max_residuals.append(data.max_residual)
        gamma_residuals.append(gamma_equation_residual(x, eps, precision))
    passed = all(r < tolerance for r in max_residuals)
    return KNReport(eps, precision, tolerance, branch, pts,
                    max_residuals, gamma_residuals, passed)
