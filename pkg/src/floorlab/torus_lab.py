"""Orbits f(n) = ({n a^l}, {n a^(l+k)}) on the unit square, exact band
membership, line support, r(n) statistics and Weyl sums.

Band membership and line support are exact.  Weyl sums are floating-point
diagnostics; their phases are reduced mod 1 in integer arithmetic first so
that large n does not destroy the fractional part.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from floorlab.certified_floor import LinearForm, certified_frac, floor_value
from floorlab.exact_numbers import (
    AlgebraicReal,
    FieldElement,
    IntPolynomial,
    dyadic_interval,
    enclose,
    evaluate_poly_at,
    power_in_field,
    rationality_of,
    sign_of,
)
from floorlab.identity_engine import ConstantPolynomial, RationalAlpha, integer_roots, r_of


class ZeroFrequency(ValueError):
    pass


@dataclass(frozen=True)
class TorusPoint:
    n: int
    x: FieldElement
    y: FieldElement

    def enclosure(self, width=Fraction(1, 10**15)) -> tuple:
        return enclose(self.x, width), enclose(self.y, width)

    def decimal(self, digits: int = 12) -> tuple[str, str]:
        return _decimal(self.x, digits), _decimal(self.y, digits)


def _decimal(x: FieldElement, digits: int) -> str:
    lo, hi = enclose(x, Fraction(1, 10 ** (digits + 3)))
    mid = (lo + hi) / 2
    with localcontext() as ctx:
        ctx.prec = digits
        return str(+(Decimal(mid.numerator) / Decimal(mid.denominator)))


class _OrbitMap:
    def __init__(self, alpha: AlgebraicReal, l: int, k: int):
        self.xl = power_in_field(alpha, l)
        self.xlk = power_in_field(alpha, l + k)

    def __call__(self, n: int) -> TorusPoint:
        _, fx = certified_frac(LinearForm(n, self.xl))
        _, fy = certified_frac(LinearForm(n, self.xlk))
        return TorusPoint(n, fx, fy)


def orbit_point(n: int, alpha: AlgebraicReal, l: int = 1, k: int = 1) -> TorusPoint:
    return _OrbitMap(alpha, l, k)(n)


def orbit(alpha: AlgebraicReal, l: int, k: int, ns: Iterable[int]) -> list[TorusPoint]:
    f = _OrbitMap(alpha, l, k)
    return [f(n) for n in ns]


def polynomial_orbit(alpha: AlgebraicReal, l: int, k: int, poly: IntPolynomial, ns: Iterable[int]) -> list[TorusPoint]:
    """Points f(P(n)) for n in ``ns`` with integer roots of P skipped; each
    point carries the index P(n)."""
    if not isinstance(poly, IntPolynomial):
        poly = IntPolynomial(poly)
    if poly.degree < 1:
        raise ConstantPolynomial("polynomial orbit needs a non-constant P")
    roots = set(integer_roots(poly))
    f = _OrbitMap(alpha, l, k)
    return [f(poly(n)) for n in ns if n not in roots]


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class RegionSpec:
    """Bands -j <= y - c x < -(j-1), j = 1..band_count, on [0,1)^2.

    ``coefficient`` is normally a field element over the orbit's base.  An
    AlgebraicReal from another field is accepted too; its comparisons are
    then decided by interval refinement plus an exact equality test.
    """

    coefficient: Union[FieldElement, AlgebraicReal]
    band_count: int = 1

    def approx_slope(self) -> float:
        c = self.coefficient
        if isinstance(c, AlgebraicReal):
            return c.approx()
        lo, hi = enclose(c, Fraction(1, 2**60))
        return float((lo + hi) / 2)


OUTSIDE = None


def _foreign_floor(pt: TorusPoint, c: AlgebraicReal) -> int:
    # floor(y - c x) with c outside the field of the point
    x, y = pt.x, pt.y
    if x.is_zero():
        return floor_value(1, y)
    p = 64
    while True:
        xl, xh, xd = x.enclosure_scaled(p)
        yl, yh, yd = y.enclosure_scaled(p)
        cl, ch = dyadic_interval(c, p)
        cd = 1 << p
        prods = [Fraction(cl * xl, cd * xd), Fraction(cl * xh, cd * xd), Fraction(ch * xl, cd * xd), Fraction(ch * xh, cd * xd)]
        lo = Fraction(yl, yd) - max(prods)
        hi = Fraction(yh, yd) - min(prods)
        f_lo, f_hi = math.floor(lo), math.floor(hi)
        if f_lo == f_hi:
            return f_lo
        if f_hi - f_lo == 1:
            # the enclosure straddles t = f_hi; y - c x = t iff c = (y - t)/x
            t = f_hi
            u = (y - t) / x
            if evaluate_poly_at(c.defining_poly, u).is_zero() and sign_of(u - c.lo) >= 0 and sign_of(c.hi - u) >= 0:
                return t
        p *= 2


def region_membership(pt: TorusPoint, region: RegionSpec) -> Optional[int]:
    """Band index j with -j <= y - c x < -(j-1), or OUTSIDE (None)."""
    c = region.coefficient
    if isinstance(c, AlgebraicReal):
        if c.is_rational:
            fl = floor_value(1, pt.y - pt.x * c.rational_value)
        else:
            fl = _foreign_floor(pt, c)
    else:
        fl = floor_value(1, pt.y - c * pt.x)
    j = -fl
    return j if 1 <= j <= region.band_count else OUTSIDE


def identity_region(alpha: AlgebraicReal, k: int, m: int = 1) -> RegionSpec:
    return RegionSpec(power_in_field(alpha, k), m)


# ---------------------------------------------------------------------------
# r(n) statistics


@dataclass(frozen=True)
class Distribution:
    N: int
    m: int
    counts: tuple  # counts[j-1] = #{0 < n <= N : r(n) = j}

    @property
    def frequencies(self) -> tuple:
        return tuple(Fraction(c, self.N) for c in self.counts)

    @property
    def deviations(self) -> tuple:
        return tuple(abs(float(f) - 1 / self.m) for f in self.frequencies)


def empirical_distribution(alpha: Union[AlgebraicReal, FieldElement], m: int, N: int) -> Distribution:
    a = alpha if isinstance(alpha, FieldElement) else power_in_field(alpha, 1)
    if rationality_of(a) is not None:
        raise RationalAlpha("distribution of r(n) needs an irrational alpha")
    counts = [0] * m
    for n in range(1, N + 1):
        counts[r_of(n, a, m) - 1] += 1
    return Distribution(N, m, tuple(counts))


def band_counts(points: Iterable[TorusPoint], region: RegionSpec) -> tuple[tuple, int]:
    """Per-band counts and the number of points outside every band."""
    counts = [0] * region.band_count
    outside = 0
    for pt in points:
        j = region_membership(pt, region)
        if j is OUTSIDE:
            outside += 1
        else:
            counts[j - 1] += 1
    return tuple(counts), outside


# ---------------------------------------------------------------------------
# line support


@dataclass(frozen=True)
class LineFit:
    slope: Fraction
    intercept_offset: Fraction  # r in a^(l+k) = s a^l + r
    intercepts: tuple
    verdict: str = "exact"

    def lines(self) -> list[tuple[Fraction, Fraction]]:
        return [(self.slope, t) for t in self.intercepts]


@dataclass(frozen=True)
class NoRationalRelation:
    reason: str


def _height(q: Fraction) -> int:
    return max(abs(q.numerator), q.denominator)


def _intercepts(s: Fraction, r: Fraction) -> tuple:
    # y - s x takes values in the lattice (1/g)Z, g = lcm(den s, den r),
    # restricted to lines that meet [0,1)^2 in a segment
    g = s.denominator * r.denominator // math.gcd(s.denominator, r.denominator)
    if s > 0:
        lo, hi, closed_lo = -s, Fraction(1), False
    elif s < 0:
        lo, hi, closed_lo = Fraction(0), 1 - s, False
    else:
        lo, hi, closed_lo = Fraction(0), Fraction(1), True
    out = []
    j = math.floor(lo * g)
    while Fraction(j, g) < hi:
        t = Fraction(j, g)
        if t > lo or (closed_lo and t == lo):
            out.append(t)
        j += 1
    return tuple(out)


def detect_line_support(alpha: AlgebraicReal, l: int, k: int, s_bound: int = 50, q_bound: int = 50) -> Union[LineFit, NoRationalRelation]:
    """Exact search for a^(l+k) = s a^l + r with s, r rational of bounded height."""
    xl = power_in_field(alpha, l)
    xlk = power_in_field(alpha, l + k)
    if rationality_of(xl) is not None:
        return NoRationalRelation("alpha^l is rational: the orbit abscissa takes finitely many values")
    i = next(i for i, c in enumerate(xl.coords) if i and c)
    s = xlk.coords[i] / xl.coords[i]
    rest = xlk - xl * s
    r = rationality_of(rest)
    if r is None:
        return NoRationalRelation("1, alpha^l, alpha^(l+k) are linearly independent over Q")
    if _height(s) > s_bound or _height(r) > q_bound:
        return NoRationalRelation(f"relation s={s}, r={r} exceeds the height bounds")
    return LineFit(s, r, _intercepts(s, r))


def point_intercept(pt: TorusPoint, slope: Fraction) -> Optional[Fraction]:
    """y - slope * x when it is rational, else None."""
    return rationality_of(pt.y - pt.x * slope)


def verify_line_support(fit: LineFit, points: Iterable[TorusPoint]) -> bool:
    allowed = set(fit.intercepts)
    return all(point_intercept(pt, fit.slope) in allowed for pt in points)


# ---------------------------------------------------------------------------
# Weyl sums

Scalar = Union[int, Fraction, AlgebraicReal, FieldElement]


@dataclass(frozen=True)
class Linear:
    """x(n) = n * theta in T^d."""

    theta: tuple


@dataclass(frozen=True)
class Polynomial:
    """x(n) = sum_j coeffs[j] * n^j in T^d; coeffs[j] is a d-vector."""

    coeffs: tuple


@dataclass(frozen=True)
class WeylSumResult:
    k: tuple
    N: int
    magnitude: float
    phase_error_bound: float
    precision: str = "float64 phases, exactly reduced mod 1; fsum accumulation"


def _dyadic(x: Scalar, q: int) -> int:
    """Integer X with |x - X/2^q| <= 2^-q (exact when x * 2^q is an integer)."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return math.floor(x * 2**q)
    if isinstance(x, AlgebraicReal):
        if x.is_rational:
            return _dyadic(x.rational_value, q)
        return dyadic_interval(x, q)[0]
    r = rationality_of(x)
    if r is not None:
        return _dyadic(r, q)
    L, _, D = x.enclosure_scaled(q + 2)
    return (L << q) // D


def weyl_sum(spec: Union[Linear, Polynomial], k: Sequence[int], N: int) -> WeylSumResult:
    """|(2N+1)^-1 sum_{|n|<=N} exp(2 pi i k.x(n))|."""
    k = tuple(int(c) for c in (k if isinstance(k, (list, tuple)) else [k]))
    if not any(k):
        raise ZeroFrequency("frequency vector must be nonzero")
    if isinstance(spec, Linear):
        coeffs = [tuple(0 for _ in spec.theta), tuple(spec.theta)]
    else:
        coeffs = [tuple(v) if isinstance(v, (list, tuple)) else (v,) for v in spec.coeffs]
    d = len(coeffs[0])
    if len(k) != d or any(len(v) != d for v in coeffs):
        raise ValueError("frequency and coefficient dimensions differ")
    deg = len(coeffs) - 1
    knorm = sum(abs(c) for c in k)
    q = 64 + deg * max(N, 1).bit_length() + knorm.bit_length() + 4
    mod = 1 << q
    K = [sum(ki * _dyadic(c, q) for ki, c in zip(k, vec)) % mod for vec in coeffs]
    exact = all(
        isinstance(c, (int, Fraction)) or rationality_of(c if isinstance(c, FieldElement) else c.element()) is not None
        for vec in coeffs
        for c in vec
    )
    two_pi = 2 * math.pi
    re, im = [], []
    for n in range(-N, N + 1):
        ph = 0
        for c in reversed(K):
            ph = (ph * n + c) % mod
        ang = two_pi * (ph / mod)
        re.append(math.cos(ang))
        im.append(math.sin(ang))
    mag = math.hypot(math.fsum(re), math.fsum(im)) / (2 * N + 1)
    err = 0.0 if exact else float(sum(knorm * N**j for j in range(deg + 1))) * 2.0**-q
    return WeylSumResult(k, N, mag, err)


# ---------------------------------------------------------------------------
# dumps


@dataclass(frozen=True)
class DumpRecord:
    n: int
    x: str
    y: str
    band: Union[int, str, None]  # None = outside, "" = no region given


def orbit_dump(
    alpha: AlgebraicReal,
    l: int,
    k: int,
    ns: Iterable[int],
    region: Optional[RegionSpec] = None,
    digits: int = 12,
) -> list[DumpRecord]:
    f = _OrbitMap(alpha, l, k)
    out = []
    for n in ns:
        pt = f(n)
        x, y = pt.decimal(digits)
        band = region_membership(pt, region) if region is not None else ""
        out.append(DumpRecord(n, x, y, band))
    return out


def dump_csv(records: Sequence[DumpRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "x", "y", "band"])
    for r in records:
        w.writerow([r.n, r.x, r.y, "outside" if r.band is None else r.band])
    return buf.getvalue()


def read_dump_csv(text: str) -> list[DumpRecord]:
    rows = list(csv.DictReader(io.StringIO(text)))
    def band(text):
        if text == "outside":
            return None
        return int(text) if text else ""

    return [DumpRecord(int(r["n"]), r["x"], r["y"], band(r["band"])) for r in rows]


def clip_line(slope: float, intercept: float) -> Optional[tuple[tuple[float, float], tuple[float, float]]]:
    """Segment of y = slope * x + intercept inside the closed unit square."""
    pts = []
    for x in (0.0, 1.0):
        y = slope * x + intercept
        if 0.0 <= y <= 1.0:
            pts.append((x, y))
    if slope:
        for y in (0.0, 1.0):
            x = (y - intercept) / slope
            if 0.0 <= x <= 1.0:
                pts.append((x, y))
    pts = sorted(set(pts))
    if len(pts) < 2:
        return None
    return pts[0], pts[-1]
