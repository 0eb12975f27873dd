"""Certified floors and fractional parts of ``n * x + c``.

``[.]`` is the floor function everywhere, negatives included.  A floor is
either computed exactly (rational value) or read off an enclosure of
``n * x + c`` whose endpoints have the same floor; enclosure precision starts
at 2^-64 and doubles until that happens, which terminates because the value
is then irrational.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from floorlab.exact_numbers import FieldElement, RationalLike, enclose, rationality_of

START_PRECISION = 64


class Exactness(enum.Enum):
    EXACT_RATIONAL = "ExactRational"
    INTERVAL_CERTIFIED = "IntervalCertified"


@dataclass(frozen=True)
class LinearForm:
    """The real number ``n * elem + shift``."""

    n: int
    elem: FieldElement
    shift: Fraction = Fraction(0)

    def as_element(self) -> FieldElement:
        return self.elem * self.n + Fraction(self.shift)


@dataclass(frozen=True)
class FloorResult:
    value: int
    exactness: Exactness
    final_interval_width: Fraction


def _floor_with_width(n: int, elem: FieldElement, shift: Fraction) -> tuple[int, Exactness, Fraction]:
    r = rationality_of(elem)
    if r is not None or n == 0:
        v = n * (r if r is not None else 0) + shift
        return v.numerator // v.denominator, Exactness.EXACT_RATIONAL, Fraction(0)
    a, b = shift.numerator, shift.denominator
    p = START_PRECISION
    while True:
        L, H, D = elem.enclosure_scaled(p)
        lo, hi = (n * L, n * H) if n > 0 else (n * H, n * L)
        Db = D * b
        f_lo = (lo * b + a * D) // Db
        if f_lo == (hi * b + a * D) // Db:
            return f_lo, Exactness.INTERVAL_CERTIFIED, Fraction(hi - lo, D)
        p *= 2


def floor_value(n: int, elem: FieldElement, shift: RationalLike = 0) -> int:
    """Certified ``floor(n * elem + shift)``; the hot path used by sweeps."""
    if shift == 0:
        r = rationality_of(elem)
        if r is None and n:
            p = START_PRECISION
            while True:
                L, H, D = elem.enclosure_scaled(p)
                if n > 0:
                    f = (n * L) // D
                    if f == (n * H) // D:
                        return f
                else:
                    f = (n * H) // D
                    if f == (n * L) // D:
                        return f
                p *= 2
    return _floor_with_width(n, elem, Fraction(shift))[0]


def certified_floor(f: LinearForm) -> FloorResult:
    return FloorResult(*_floor_with_width(f.n, f.elem, Fraction(f.shift)))


def certified_frac(f: LinearForm) -> tuple[FloorResult, FieldElement]:
    """Floor together with the exact fractional part ``f - floor(f)``."""
    fl = certified_floor(f)
    return fl, f.as_element() - fl.value


def frac_enclosure(frac: FieldElement, width: RationalLike = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
    return enclose(frac, width)


def eval_bracket_chain(n: int, multipliers: Sequence[FieldElement], shifts: Sequence[RationalLike] | None = None) -> int:
    """b_0 = n, b_i = floor(b_{i-1} * multiplier_i + shift_i), left to right."""
    if not multipliers:
        raise ValueError("multipliers must be nonempty")
    if shifts is None:
        shifts = [0] * len(multipliers)
    if len(shifts) != len(multipliers):
        raise ValueError("shifts and multipliers differ in length")
    b = n
    for mult, s in zip(multipliers, shifts):
        b = floor_value(b, mult, s)
    return b
