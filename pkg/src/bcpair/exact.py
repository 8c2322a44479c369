"""Exact arithmetic layer.

Everything downstream computes over these types:

* ``Rational``     -- arbitrary-precision rationals (``fractions.Fraction``).
* ``EpsPoly``      -- polynomials in the parameter ``eps`` over the rationals.
* ``XLaurent``     -- Laurent polynomials in ``x`` with ``EpsPoly`` coefficients.
* ``XZPoly``       -- polynomials in ``(x, z)`` over ``EpsPoly`` (non-negative
  exponents only; negative powers of ``x`` live in fraction denominators).
* ``XZFraction``   -- quotients of ``XZPoly`` with equality by cross
  multiplication.  No canonical form, no multivariate gcd.
* ``ZSeries``      -- truncated Laurent series in ``z`` whose coefficients are
  ``XLaurent``.  Dense in ``z``, sparse in ``x``.
* ``BivarPoly``    -- polynomials in two commuting placeholders ``(z, w)`` over
  ``EpsPoly``; used for algebraic relations between a pair of operators.

All values are immutable by convention: no method mutates ``self`` or its
arguments, so sharing across threads is safe and results do not depend on
evaluation order.
"""

from __future__ import annotations

import math
from fractions import Fraction

Rational = Fraction

INF = float("inf")

#: default number of retained series terms beyond the lowest exponent
DEFAULT_SERIES_ORDER = 16


def _fr(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an integer or Fraction, got {type(value).__name__}")


class ExactError(ArithmeticError):
    """Raised when an exact operation is impossible (bad unit, inexact division...)."""


# ---------------------------------------------------------------------------
# polynomials in eps over Q
# ---------------------------------------------------------------------------

class EpsPoly:
    """Polynomial in ``eps`` with rational coefficients, stored sparsely.

    The coefficient map never stores zeros.  Exponents are non-negative
    integers; in all operator data only even exponents up to 8 occur, but the
    arithmetic itself is general.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: dict[int, Fraction] | None = None):
        c: dict[int, Fraction] = {}
        if coeffs:
            for e, v in coeffs.items():
                v = _fr(v)
                if v:
                    if e < 0:
                        raise ValueError("negative eps exponent")
                    c[int(e)] = v
        self.c = c

    @classmethod
    def const(cls, value) -> "EpsPoly":
        return cls({0: _fr(value)})

    @classmethod
    def eps_power(cls, k: int, coeff=1) -> "EpsPoly":
        return cls({k: _fr(coeff)})

    @classmethod
    def zero(cls) -> "EpsPoly":
        return cls()

    @classmethod
    def one(cls) -> "EpsPoly":
        return cls({0: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.c

    def is_rational(self) -> bool:
        return not self.c or set(self.c) == {0}

    def as_rational(self) -> Fraction:
        if not self.c:
            return Fraction(0)
        if set(self.c) != {0}:
            raise ExactError("eps polynomial is not constant")
        return self.c[0]

    def is_monomial(self) -> bool:
        return len(self.c) == 1

    def degree(self) -> int:
        return max(self.c) if self.c else -1

    def __add__(self, other: "EpsPoly") -> "EpsPoly":
        c = dict(self.c)
        for e, v in other.c.items():
            s = c.get(e, _ZERO) + v
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        out = EpsPoly.__new__(EpsPoly)
        out.c = c
        return out

    def __sub__(self, other: "EpsPoly") -> "EpsPoly":
        c = dict(self.c)
        for e, v in other.c.items():
            s = c.get(e, _ZERO) - v
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        out = EpsPoly.__new__(EpsPoly)
        out.c = c
        return out

    def __neg__(self) -> "EpsPoly":
        out = EpsPoly.__new__(EpsPoly)
        out.c = {e: -v for e, v in self.c.items()}
        return out

    def __mul__(self, other) -> "EpsPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, EpsPoly):
            return NotImplemented
        c: dict[int, Fraction] = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                s = c.get(e, _ZERO) + v1 * v2
                if s:
                    c[e] = s
                else:
                    del c[e]
        out = EpsPoly.__new__(EpsPoly)
        out.c = c
        return out

    __rmul__ = __mul__

    def scale(self, value) -> "EpsPoly":
        value = _fr(value)
        out = EpsPoly.__new__(EpsPoly)
        out.c = {e: v * value for e, v in self.c.items()} if value else {}
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = EpsPoly.const(other)
        return isinstance(other, EpsPoly) and self.c == other.c

    def substitute(self, value) -> Fraction:
        """Evaluate at a rational value of eps."""
        value = _fr(value)
        return sum((v * value**e for e, v in self.c.items()), Fraction(0))

    def divide_monomial(self, coeff: Fraction, exp: int) -> "EpsPoly":
        """Exact division by ``coeff * eps**exp``; every term must be divisible."""
        if not coeff:
            raise ExactError("division by zero eps monomial")
        c = {}
        for e, v in self.c.items():
            if e < exp:
                raise ExactError(f"eps^{e} term not divisible by eps^{exp}")
            c[e - exp] = v / coeff
        out = EpsPoly.__new__(EpsPoly)
        out.c = c
        return out

    def divexact(self, other: "EpsPoly") -> "EpsPoly":
        """Exact polynomial division; raises if the remainder is nonzero."""
        if other.is_zero():
            raise ExactError("division by zero eps polynomial")
        if other.is_monomial():
            (e, v), = other.c.items()
            return self.divide_monomial(v, e)
        rem = dict(self.c)
        de = other.degree()
        dl = other.c[de]
        q: dict[int, Fraction] = {}
        while rem:
            e = max(rem)
            if e < de:
                raise ExactError("inexact eps-polynomial division")
            qe, qv = e - de, rem[e] / dl
            q[qe] = qv
            for oe, ov in other.c.items():
                t = oe + qe
                s = rem.get(t, _ZERO) - qv * ov
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        out = EpsPoly.__new__(EpsPoly)
        out.c = q
        return out

    def __repr__(self):
        return f"EpsPoly({self})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c):
            v = self.c[e]
            if e == 0:
                parts.append(str(v))
            elif e == 1:
                parts.append(f"{v}*eps")
            else:
                parts.append(f"{v}*eps^{e}")
        return " + ".join(parts)


_ZERO = Fraction(0)
_EP_ZERO = EpsPoly()
_EP_ONE = EpsPoly({0: Fraction(1)})


def ep(value) -> EpsPoly:
    """Promote an int/Fraction (or pass an EpsPoly through) to ``EpsPoly``."""
    if isinstance(value, EpsPoly):
        return value
    return EpsPoly.const(value)


# ---------------------------------------------------------------------------
# Laurent polynomials in x over EpsPoly
# ---------------------------------------------------------------------------

class XLaurent:
    """Laurent polynomial in ``x`` whose coefficients are ``EpsPoly``.

    Exponents may be negative; d/dx maps ``x**n`` to ``n*x**(n-1)`` for every
    integer ``n``.  No zero coefficients are stored.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: dict[int, EpsPoly] | None = None):
        c: dict[int, EpsPoly] = {}
        if coeffs:
            for e, v in coeffs.items():
                v = ep(v) if not isinstance(v, EpsPoly) else v
                if not v.is_zero():
                    c[int(e)] = v
        self.c = c

    @classmethod
    def zero(cls) -> "XLaurent":
        return cls()

    @classmethod
    def one(cls) -> "XLaurent":
        return cls({0: _EP_ONE})

    @classmethod
    def monomial(cls, xexp: int, coeff=1) -> "XLaurent":
        return cls({xexp: ep(coeff)})

    @classmethod
    def var(cls) -> "XLaurent":
        return cls({1: _EP_ONE})

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return set(self.c) == {0} and self.c[0] == _EP_ONE

    def __add__(self, other: "XLaurent") -> "XLaurent":
        c = dict(self.c)
        for e, v in other.c.items():
            s = c[e] + v if e in c else v
            if s.is_zero():
                del c[e]
            else:
                c[e] = s
        out = XLaurent.__new__(XLaurent)
        out.c = c
        return out

    def __sub__(self, other: "XLaurent") -> "XLaurent":
        c = dict(self.c)
        for e, v in other.c.items():
            s = c[e] - v if e in c else -v
            if s.is_zero():
                del c[e]
            else:
                c[e] = s
        out = XLaurent.__new__(XLaurent)
        out.c = c
        return out

    def __neg__(self) -> "XLaurent":
        out = XLaurent.__new__(XLaurent)
        out.c = {e: -v for e, v in self.c.items()}
        return out

    def __mul__(self, other) -> "XLaurent":
        if isinstance(other, (int, Fraction, EpsPoly)):
            return self.scale(other)
        if not isinstance(other, XLaurent):
            return NotImplemented
        c: dict[int, EpsPoly] = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                p = v1 * v2
                if e in c:
                    s = c[e] + p
                    if s.is_zero():
                        del c[e]
                    else:
                        c[e] = s
                elif not p.is_zero():
                    c[e] = p
        out = XLaurent.__new__(XLaurent)
        out.c = c
        return out

    __rmul__ = __mul__

    def scale(self, value) -> "XLaurent":
        value = ep(value)
        if value.is_zero():
            return XLaurent.zero()
        out = XLaurent.__new__(XLaurent)
        out.c = {}
        for e, v in self.c.items():
            p = v * value
            if not p.is_zero():
                out.c[e] = p
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, EpsPoly)):
            other = XLaurent({0: ep(other)})
        return isinstance(other, XLaurent) and self.c == other.c

    def derive(self) -> "XLaurent":
        out = XLaurent.__new__(XLaurent)
        out.c = {e - 1: v.scale(e) for e, v in self.c.items() if e != 0}
        return out

    def coefficient(self, xexp: int) -> EpsPoly:
        return self.c.get(xexp, _EP_ZERO)

    def min_exp(self) -> int:
        return min(self.c) if self.c else 0

    def max_exp(self) -> int:
        return max(self.c) if self.c else 0

    def substitute_eps(self, value) -> "XLaurent":
        out = XLaurent.__new__(XLaurent)
        out.c = {}
        for e, v in self.c.items():
            r = v.substitute(value)
            if r:
                out.c[e] = EpsPoly.const(r)
        return out

    def evaluate_x(self, x0: Fraction) -> EpsPoly:
        """Evaluate at a nonzero rational x."""
        x0 = _fr(x0)
        if not x0:
            raise ExactError("cannot evaluate a Laurent polynomial at x = 0")
        total = _EP_ZERO
        for e, v in self.c.items():
            total = total + v.scale(x0**e)
        return total

    def is_unit(self) -> bool:
        """A unit is a single x-monomial whose EpsPoly coefficient is a monomial."""
        return len(self.c) == 1 and next(iter(self.c.values())).is_monomial()

    def divide_unit(self, unit: "XLaurent") -> "XLaurent":
        """Exact division by a unit monomial; used by series inversion."""
        if not unit.is_unit():
            raise ExactError(f"not an invertible coefficient: {unit}")
        (xe, epoly), = unit.c.items()
        (ee, ev), = epoly.c.items()
        out = XLaurent.__new__(XLaurent)
        out.c = {}
        for e, v in self.c.items():
            out.c[e - xe] = v.divide_monomial(ev, ee)
        return out

    def __repr__(self):
        return f"XLaurent({self})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c, reverse=True):
            v = self.c[e]
            body = f"({v})" if len(v.c) > 1 else str(v)
            if e == 0:
                parts.append(body)
            else:
                parts.append(f"{body}*x^{e}")
        return " + ".join(parts)


_XL_ZERO = XLaurent()
_XL_ONE = XLaurent.one()


def xl(coeffs: dict[int, object]) -> XLaurent:
    """Shorthand constructor: ``{x_exp: rational or {eps_exp: rational}}``."""
    c: dict[int, EpsPoly] = {}
    for e, v in coeffs.items():
        c[e] = EpsPoly(v) if isinstance(v, dict) else ep(v)
    return XLaurent(c)


def laurent_derive(p: XLaurent) -> XLaurent:
    """d/dx on Laurent polynomials (linear, satisfies the product rule)."""
    return p.derive()


# ---------------------------------------------------------------------------
# polynomials and fractions in (x, z)
# ---------------------------------------------------------------------------

class XZPoly:
    """Polynomial in ``(x, z)`` over ``EpsPoly``; exponents are non-negative."""

    __slots__ = ("c",)

    def __init__(self, coeffs: dict[tuple[int, int], EpsPoly] | None = None):
        c: dict[tuple[int, int], EpsPoly] = {}
        if coeffs:
            for (xe, ze), v in coeffs.items():
                v = ep(v) if not isinstance(v, EpsPoly) else v
                if not v.is_zero():
                    if xe < 0 or ze < 0:
                        raise ValueError("XZPoly exponents must be non-negative")
                    c[(xe, ze)] = v
        self.c = c

    @classmethod
    def zero(cls) -> "XZPoly":
        return cls()

    @classmethod
    def one(cls) -> "XZPoly":
        return cls({(0, 0): _EP_ONE})

    @classmethod
    def monomial(cls, xexp: int, zexp: int, coeff=1) -> "XZPoly":
        return cls({(xexp, zexp): ep(coeff)})

    def is_zero(self) -> bool:
        return not self.c

    def __add__(self, other: "XZPoly") -> "XZPoly":
        c = dict(self.c)
        for k, v in other.c.items():
            s = c[k] + v if k in c else v
            if s.is_zero():
                del c[k]
            else:
                c[k] = s
        out = XZPoly.__new__(XZPoly)
        out.c = c
        return out

    def __sub__(self, other: "XZPoly") -> "XZPoly":
        return self + (-other)

    def __neg__(self) -> "XZPoly":
        out = XZPoly.__new__(XZPoly)
        out.c = {k: -v for k, v in self.c.items()}
        return out

    def __mul__(self, other) -> "XZPoly":
        if isinstance(other, (int, Fraction, EpsPoly)):
            return self.scale(other)
        if not isinstance(other, XZPoly):
            return NotImplemented
        c: dict[tuple[int, int], EpsPoly] = {}
        for (x1, z1), v1 in self.c.items():
            for (x2, z2), v2 in other.c.items():
                k = (x1 + x2, z1 + z2)
                p = v1 * v2
                if k in c:
                    s = c[k] + p
                    if s.is_zero():
                        del c[k]
                    else:
                        c[k] = s
                elif not p.is_zero():
                    c[k] = p
        out = XZPoly.__new__(XZPoly)
        out.c = c
        return out

    __rmul__ = __mul__

    def scale(self, value) -> "XZPoly":
        value = ep(value)
        out = XZPoly.__new__(XZPoly)
        out.c = {}
        if not value.is_zero():
            for k, v in self.c.items():
                p = v * value
                if not p.is_zero():
                    out.c[k] = p
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, XZPoly) and self.c == other.c

    def derive_x(self) -> "XZPoly":
        out = XZPoly.__new__(XZPoly)
        out.c = {}
        for (xe, ze), v in self.c.items():
            if xe:
                out.c[(xe - 1, ze)] = v.scale(xe)
        return out

    def substitute_eps(self, value) -> "XZPoly":
        out = XZPoly.__new__(XZPoly)
        out.c = {}
        for k, v in self.c.items():
            r = v.substitute(value)
            if r:
                out.c[k] = EpsPoly.const(r)
        return out

    def z_coefficients(self) -> dict[int, XLaurent]:
        """Regroup as a polynomial in z with XLaurent coefficients."""
        rows: dict[int, dict[int, EpsPoly]] = {}
        for (xe, ze), v in self.c.items():
            rows.setdefault(ze, {})[xe] = v
        return {ze: XLaurent(d) for ze, d in rows.items()}

    def __repr__(self):
        return f"XZPoly({self})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for (xe, ze) in sorted(self.c):
            v = self.c[(xe, ze)]
            body = f"({v})" if len(v.c) > 1 else str(v)
            if xe:
                body += f"*x^{xe}"
            if ze:
                body += f"*z^{ze}"
            parts.append(body)
        return " + ".join(parts)


class XZFraction:
    """Quotient of two ``XZPoly``.  Equality is by cross multiplication.

    There is no canonical form: numerator and denominator are kept exactly
    as arithmetic produced them (no multivariate gcd).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: XZPoly, den: XZPoly | None = None):
        if den is None:
            den = XZPoly.one()
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in XZFraction")
        self.num = num
        self.den = den

    @classmethod
    def zero(cls) -> "XZFraction":
        return cls(XZPoly.zero())

    @classmethod
    def one(cls) -> "XZFraction":
        return cls(XZPoly.one())

    @classmethod
    def from_poly(cls, p: XZPoly) -> "XZFraction":
        return cls(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "XZFraction") -> "XZFraction":
        return XZFraction(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    def __sub__(self, other: "XZFraction") -> "XZFraction":
        return XZFraction(self.num * other.den - other.num * self.den,
                          self.den * other.den)

    def __neg__(self) -> "XZFraction":
        return XZFraction(-self.num, self.den)

    def __mul__(self, other) -> "XZFraction":
        if isinstance(other, (int, Fraction, EpsPoly)):
            return XZFraction(self.num.scale(other), self.den)
        return XZFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: "XZFraction") -> "XZFraction":
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero XZFraction")
        return XZFraction(self.num * other.den, self.den * other.num)

    def derive_x(self) -> "XZFraction":
        return XZFraction(self.num.derive_x() * self.den - self.num * self.den.derive_x(),
                          self.den * self.den)

    def substitute_eps(self, value) -> "XZFraction":
        den = self.den.substitute_eps(value)
        if den.is_zero():
            raise ZeroDivisionError("denominator vanishes at this eps value")
        return XZFraction(self.num.substitute_eps(value), den)

    def __repr__(self):
        return f"({self.num}) / ({self.den})"


def fraction_equal(a: XZFraction, b: XZFraction) -> bool:
    """Exact equality of fractions: a.num*b.den - b.num*a.den == 0."""
    return (a.num * b.den - b.num * a.den).is_zero()


# ---------------------------------------------------------------------------
# truncated Laurent series in z with XLaurent coefficients
# ---------------------------------------------------------------------------

class ZSeries:
    """Truncated Laurent series in ``z``.

    ``coeffs[i]`` is the ``XLaurent`` coefficient of ``z**(lowest+i)``.  The
    series is known exactly for all exponents below ``upper`` (and is zero
    below ``lowest``); ``upper == INF`` marks an exact finite expansion.
    Arithmetic propagates the smallest valid window of its inputs, so the
    reported window never overstates what is actually known.
    """

    __slots__ = ("lowest", "coeffs", "upper")

    def __init__(self, lowest: int, coeffs: list[XLaurent], upper=INF):
        # trim known-zero leading terms; they stay implicitly known
        i = 0
        n = len(coeffs)
        while i < n and coeffs[i].is_zero():
            i += 1
        if i == n:
            lowest, coeffs = 0, []
            if not math.isinf(upper):
                upper = max(upper, 0)
        else:
            lowest, coeffs = lowest + i, list(coeffs[i:])
        if not math.isinf(upper):
            want = upper - lowest
            if want < len(coeffs):
                coeffs = coeffs[:want]
            else:
                coeffs = coeffs + [_XL_ZERO] * (want - len(coeffs))
            # drop trailing zeros only in storage; window semantics unchanged
        self.lowest = lowest
        self.coeffs = coeffs
        self.upper = upper

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, upper=INF) -> "ZSeries":
        return cls(0, [], upper)

    @classmethod
    def one(cls) -> "ZSeries":
        return cls(0, [_XL_ONE], INF)

    @classmethod
    def constant(cls, value: XLaurent) -> "ZSeries":
        return cls(0, [value], INF)

    @classmethod
    def from_z_coefficients(cls, zc: dict[int, XLaurent]) -> "ZSeries":
        """Exact series from a finite z-coefficient map (e.g. a polynomial)."""
        if not zc:
            return cls.zero()
        lo, hi = min(zc), max(zc)
        coeffs = [zc.get(e, _XL_ZERO) for e in range(lo, hi + 1)]
        return cls(lo, coeffs, INF)

    @classmethod
    def from_xzpoly(cls, p: XZPoly) -> "ZSeries":
        return cls.from_z_coefficients(p.z_coefficients())

    # -- structure ---------------------------------------------------------

    def known_len(self) -> float:
        return self.upper - self.lowest if not math.isinf(self.upper) else INF

    def coefficient(self, zexp: int) -> XLaurent:
        if not math.isinf(self.upper) and zexp >= self.upper:
            raise ExactError(f"z^{zexp} is beyond the truncation window (< {self.upper})")
        i = zexp - self.lowest
        if i < 0 or i >= len(self.coeffs):
            return _XL_ZERO
        return self.coeffs[i]

    def is_zero(self) -> bool:
        """True when every *known* coefficient vanishes."""
        return all(v.is_zero() for v in self.coeffs)

    def first_nonzero(self):
        for i, v in enumerate(self.coeffs):
            if not v.is_zero():
                return self.lowest + i, v
        return None

    def truncate(self, upper: int) -> "ZSeries":
        new_upper = upper if math.isinf(self.upper) else min(self.upper, upper)
        return ZSeries(self.lowest, self.coeffs, new_upper)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "ZSeries") -> "ZSeries":
        upper = min(self.upper, other.upper)
        lo = min(self.lowest, other.lowest)
        if math.isinf(upper):
            hi = max(self.lowest + len(self.coeffs), other.lowest + len(other.coeffs))
        else:
            hi = upper
        coeffs = []
        for e in range(lo, hi):
            coeffs.append(self.coefficient(e) + other.coefficient(e))
        return ZSeries(lo, coeffs, upper)

    def __sub__(self, other: "ZSeries") -> "ZSeries":
        return self + (-other)

    def __neg__(self) -> "ZSeries":
        return ZSeries(self.lowest, [-v for v in self.coeffs], self.upper)

    def __mul__(self, other) -> "ZSeries":
        if isinstance(other, (int, Fraction, EpsPoly, XLaurent)):
            return self.scale(other)
        la, lb = self.lowest, other.lowest
        lo = la + lb
        upper = min(self.upper + lb, other.upper + la)
        if math.isinf(upper):
            hi = lo + len(self.coeffs) + len(other.coeffs) - 1 if self.coeffs and other.coeffs else lo
        else:
            hi = upper
        n = max(0, int(hi - lo))
        acc: list[XLaurent] = [_XL_ZERO] * n
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            jmax = min(len(other.coeffs), n - i)
            for j in range(jmax):
                b = other.coeffs[j]
                if not b.is_zero():
                    acc[i + j] = acc[i + j] + a * b
        return ZSeries(lo, acc, upper)

    __rmul__ = __mul__

    def scale(self, value) -> "ZSeries":
        if isinstance(value, XLaurent):
            return ZSeries(self.lowest, [v * value for v in self.coeffs], self.upper)
        value = ep(value)
        return ZSeries(self.lowest, [v.scale(value) for v in self.coeffs], self.upper)

    def z_shift(self, k: int) -> "ZSeries":
        upper = self.upper if math.isinf(self.upper) else self.upper + k
        return ZSeries(self.lowest + k, self.coeffs, upper)

    def derive(self) -> "ZSeries":
        """d/dx, applied coefficient-wise (z is a spectral parameter)."""
        return ZSeries(self.lowest, [v.derive() for v in self.coeffs], self.upper)

    def substitute_eps(self, value) -> "ZSeries":
        return ZSeries(self.lowest, [v.substitute_eps(value) for v in self.coeffs], self.upper)

    def eq_known(self, other: "ZSeries") -> bool:
        """Equality of all coefficients on the intersection of known windows."""
        upper = min(self.upper, other.upper)
        lo = min(self.lowest, other.lowest)
        if math.isinf(upper):
            hi = max(self.lowest + len(self.coeffs), other.lowest + len(other.coeffs))
        else:
            hi = int(upper)
        return all(self.coefficient(e) == other.coefficient(e) for e in range(lo, hi))

    __eq__ = eq_known

    def __repr__(self):
        inside = ", ".join(f"z^{self.lowest + i}: {v}" for i, v in enumerate(self.coeffs)
                           if not v.is_zero())
        tail = "exact" if math.isinf(self.upper) else f"O(z^{self.upper})"
        return f"ZSeries({inside or '0'}; {tail})"


def series_divide(num: ZSeries, den: ZSeries, nterms: int | None = None) -> ZSeries:
    """Series division; the leading z-coefficient of ``den`` must be a unit.

    The result ``s`` satisfies ``s * den == num`` through the returned window.
    """
    lead = den.first_nonzero()
    if lead is None:
        raise ZeroDivisionError("division by zero series")
    ld, d0 = lead
    if not d0.is_unit():
        raise ExactError(f"leading z-coefficient is not an invertible unit: {d0}")
    lo = num.lowest - ld
    win = min(num.upper - num.lowest, den.upper - den.lowest)
    if nterms is not None:
        win = min(win, nterms)
    if math.isinf(win):
        raise ExactError("series division needs a finite term count for exact inputs")
    win = int(win)
    dshift = [den.coefficient(ld + j) for j in range(win)]
    out: list[XLaurent] = []
    for k in range(win):
        acc = num.coefficient(num.lowest + k)
        for j in range(1, k + 1):
            dj = dshift[j]
            if not dj.is_zero() and not out[k - j].is_zero():
                acc = acc - dj * out[k - j]
        out.append(acc.divide_unit(d0))
    return ZSeries(lo, out, lo + win)


def fraction_to_series(a: XZFraction, order: int = DEFAULT_SERIES_ORDER) -> ZSeries:
    """Expand an (x, z)-fraction as a z-series with ``order`` retained terms.

    The denominator's lowest z-coefficient must be invertible (a single
    x-monomial whose EpsPoly coefficient is a monomial); eps-content is moved
    into the numerator by exact monomial division.
    """
    num = ZSeries.from_xzpoly(a.num)
    den = ZSeries.from_xzpoly(a.den)
    return series_divide(num, den, nterms=order)


def series_sqrt(s: ZSeries) -> ZSeries:
    """Square root of a series with constant term 1 (the branch with value 1).

    Rejects anything whose lowest exponent is not 0 or whose constant term is
    not 1: there is no Puiseux support here.
    """
    if s.lowest != 0 or s.coefficient(0) != _XL_ONE:
        raise ExactError("series_sqrt needs lowest exponent 0 and constant term 1")
    win = s.known_len()
    if math.isinf(win):
        win = len(s.coeffs)
    win = int(win)
    half = Fraction(1, 2)
    out: list[XLaurent] = [_XL_ONE]
    for k in range(1, win):
        acc = s.coefficient(k)
        for j in range(1, k):
            acc = acc - out[j] * out[k - j]
        out.append(acc.scale(half))
    return ZSeries(0, out, s.upper if not math.isinf(s.upper) else win)


# ---------------------------------------------------------------------------
# bivariate polynomials in (z, w) over EpsPoly
# ---------------------------------------------------------------------------

class BivarPoly:
    """Polynomial in two commuting symbols (z, w) over ``EpsPoly``.

    Used for algebraic relations Q(z, w) evaluated at a commuting operator
    pair, with z standing for the lower-order operator.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: dict[tuple[int, int], EpsPoly] | None = None):
        c: dict[tuple[int, int], EpsPoly] = {}
        if coeffs:
            for (ze, we), v in coeffs.items():
                v = ep(v) if not isinstance(v, EpsPoly) else v
                if not v.is_zero():
                    c[(ze, we)] = v
        self.c = c

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, other) -> bool:
        return isinstance(other, BivarPoly) and self.c == other.c

    def __add__(self, other: "BivarPoly") -> "BivarPoly":
        c = dict(self.c)
        for k, v in other.c.items():
            s = c[k] + v if k in c else v
            if s.is_zero():
                del c[k]
            else:
                c[k] = s
        return BivarPoly(c)

    def __sub__(self, other: "BivarPoly") -> "BivarPoly":
        c = dict(self.c)
        for k, v in other.c.items():
            s = c[k] - v if k in c else -v
            if s.is_zero():
                del c[k]
            else:
                c[k] = s
        return BivarPoly(c)

    def scale(self, value) -> "BivarPoly":
        value = ep(value)
        return BivarPoly({k: v * value for k, v in self.c.items()})

    def substitute_eps(self, value) -> "BivarPoly":
        out: dict[tuple[int, int], EpsPoly] = {}
        for k, v in self.c.items():
            r = v.substitute(value)
            if r:
                out[k] = EpsPoly.const(r)
        return BivarPoly(out)

    def __str__(self):
        if not self.c:
            return "0"
        def key(item):
            (ze, we), _ = item
            return (-(we), -(ze))
        parts = []
        for (ze, we), v in sorted(self.c.items(), key=key):
            factors = []
            if not v == _EP_ONE or (ze == 0 and we == 0):
                factors.append(f"({v})" if len(v.c) > 1 else str(v))
            if we:
                factors.append("w" if we == 1 else f"w^{we}")
            if ze:
                factors.append("z" if ze == 1 else f"z^{ze}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"BivarPoly({self})"
