"""High-precision decimal oracle, independent of the certified path.

Roots come from ``mpmath.polyroots`` and values are evaluated in plain
multiprecision floating point.  A floor is flagged ``near_integer`` when the
decimal value sits within ``10**-guard`` of an integer, in which case the
oracle abstains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from floorlab.exact_numbers import AlgebraicReal, FieldElement


def alpha_decimal(a: AlgebraicReal, dps: int = 200) -> mpmath.mpf:
    with mpmath.workdps(dps + 20):
        if a.is_rational:
            r = a.rational_value
            return mpmath.mpf(r.numerator) / r.denominator
        coeffs = list(reversed(a.defining_poly.coeffs))
        roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
        lo = mpmath.mpf(a.lo.numerator) / a.lo.denominator
        hi = mpmath.mpf(a.hi.numerator) / a.hi.denominator
        tol = mpmath.mpf(10) ** (-(dps // 2))
        real = [mpmath.re(z) for z in roots if abs(mpmath.im(z)) < tol]
        inside = [x for x in real if lo - tol <= x <= hi + tol]
        if len(inside) != 1:
            raise ArithmeticError(f"oracle could not locate the root of {a}")
        return +inside[0]


def element_decimal(x: FieldElement, dps: int = 200) -> mpmath.mpf:
    a = alpha_decimal(x.base, dps)
    with mpmath.workdps(dps + 20):
        acc = mpmath.mpf(0)
        for c in reversed(x.coords):
            acc = acc * a + mpmath.mpf(c.numerator) / c.denominator
        return acc


@dataclass(frozen=True)
class OracleFloor:
    value: Optional[int]
    near_integer: bool


def decimal_floor(value: mpmath.mpf, dps: int = 200, guard: int = 150) -> OracleFloor:
    with mpmath.workdps(dps + 20):
        fl = int(mpmath.floor(value))
        gap = min(value - fl, fl + 1 - value)
        if gap < mpmath.mpf(10) ** (-guard):
            return OracleFloor(None, True)
        return OracleFloor(fl, False)


class DecimalEvaluator:
    """Oracle evaluation of nested floors for one base number."""

    def __init__(self, alpha: AlgebraicReal, dps: int = 200):
        self.dps = dps
        # rational bases are evaluated exactly; decimals cannot decide exact integers
        self.rational = alpha.rational_value
        self.alpha = alpha_decimal(alpha, dps)

    def value(self, x: FieldElement) -> mpmath.mpf:
        with mpmath.workdps(self.dps + 20):
            acc = mpmath.mpf(0)
            for c in reversed(x.coords):
                acc = acc * self.alpha + mpmath.mpf(c.numerator) / c.denominator
            return acc

    def floor(self, n: int, x, shift=0) -> int:
        """floor(n * x + shift); ``x`` is a FieldElement or an mpf."""
        if n == 0:
            v = Fraction(shift)
            return v.numerator // v.denominator
        if isinstance(x, FieldElement):
            if self.rational is not None:
                v = n * sum(c * self.rational**i for i, c in enumerate(x.coords)) + Fraction(shift)
                return v.numerator // v.denominator
            if not any(x.coords[1:]):
                # a rational element of an irrational field
                v = n * Fraction(x.coords[0] if x.coords else 0) + Fraction(shift)
                return v.numerator // v.denominator
        with mpmath.workdps(self.dps + 20):
            v = x if isinstance(x, mpmath.mpf) else self.value(x)
            s = mpmath.mpf(shift.numerator) / shift.denominator if hasattr(shift, "denominator") else mpmath.mpf(shift)
            res = decimal_floor(n * v + s, self.dps)
        if res.near_integer:
            raise ArithmeticError(f"decimal oracle abstains at n={n}: value within 1e-150 of an integer")
        return res.value
