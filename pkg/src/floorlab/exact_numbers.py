"""Exact rationals, integer polynomials, real algebraic numbers and Q[alpha].

Rationals are :class:`fractions.Fraction`.  A real algebraic number is kept as
its minimal polynomial over Q together with a rational isolating interval;
rational numbers are demoted to degree-1 polynomials with a degenerate
interval ``lo == hi``.  Field elements are coordinate vectors over the power
basis of one base number.

Certified numerics go through dyadic integer enclosures: at precision ``p``
every quantity is bracketed by integers scaled by ``2**p``.  These enclosures
are memoised per base number and per precision.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction]


class ZeroPolynomial(ValueError):
    pass


class MOutOfRange(ValueError):
    pass


class NonUniqueRoot(AssertionError):
    pass


class NotIsolating(ValueError):
    """The interval does not isolate exactly one root of the polynomial."""


class InconsistentPair(ValueError):
    pass


class MixedBase(ValueError):
    """Arithmetic between field elements over different base numbers."""


# ---------------------------------------------------------------------------
# integer polynomials


def _strip(coeffs: Sequence) -> tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, constant term first."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable[int]):
        cs = _strip(int(c) for c in coeffs)
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: RationalLike) -> int:
        """Exact sign of the polynomial at a rational point."""
        return _sign_at(self.coeffs, Fraction(x))

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> "IntPolynomial":
        if self.is_zero():
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def __str__(self) -> str:
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"


def _sign_at(coeffs: Sequence[int], x: Fraction) -> int:
    # sign(f(a/b) * b**d) with b > 0, all in integers
    if not coeffs:
        return 0
    a, b = x.numerator, x.denominator
    acc = coeffs[-1]
    bpow = 1
    for c in reversed(coeffs[:-1]):
        bpow *= b
        acc = acc * a + c * bpow
    return (acc > 0) - (acc < 0)


# rational-coefficient helpers (tuples of Fractions, constant term first)


def _qstrip(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _qdivmod(num, den):
    num = [Fraction(c) for c in num]
    den = _qstrip(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    lead = den[-1]
    while len(_qstrip(num)) >= len(den):
        num = _qstrip(num)
        shift = len(num) - len(den)
        factor = num[-1] / lead
        q[shift] = factor
        for i, d in enumerate(den):
            num[shift + i] -= factor * d
        num.pop()
    return _qstrip(q), _qstrip(num)


def _qgcd(a, b):
    a, b = _qstrip(a), _qstrip(b)
    while b:
        _, r = _qdivmod(a, b)
        a, b = b, r
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


def _to_int_poly(q) -> IntPolynomial:
    q = _qstrip(q)
    if not q:
        return IntPolynomial([])
    den = 1
    for c in q:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    return IntPolynomial(int(Fraction(c) * den) for c in q).primitive()


def squarefree_part(poly: IntPolynomial) -> IntPolynomial:
    if poly.is_zero():
        raise ZeroPolynomial("zero polynomial")
    p = poly.primitive()
    if p.degree < 1:
        return p
    g = _qgcd(list(p.coeffs), list(p.derivative().coeffs))
    if len(g) <= 1:
        return p
    q, r = _qdivmod(list(p.coeffs), g)
    assert not r
    return _to_int_poly(q)


def irreducible_factors(poly: IntPolynomial) -> list[IntPolynomial]:
    """Distinct irreducible factors over Q (primitive, positive leading)."""
    import sympy

    x = sympy.Symbol("x")
    expr = sum(int(c) * x**i for i, c in enumerate(poly.coeffs))
    _, factors = sympy.factor_list(expr, x)
    out = []
    for fac, _mult in factors:
        cs = sympy.Poly(fac, x).all_coeffs()[::-1]
        f = IntPolynomial(int(c) for c in cs).primitive()
        if f.degree >= 1:
            out.append(f)
    return out


# ---------------------------------------------------------------------------
# Sturm sequences


@lru_cache(maxsize=512)
def sturm_sequence(poly: IntPolynomial) -> tuple:
    """Sturm chain of a squarefree polynomial, each member scaled to integers
    by a positive constant (which leaves signs unchanged)."""
    f0 = [Fraction(c) for c in poly.coeffs]
    f1 = [Fraction(c) for c in poly.derivative().coeffs]
    chain = [f0]
    if f1:
        chain.append(f1)
    while len(chain) >= 2 and len(_qstrip(chain[-1])) > 1:
        _, r = _qdivmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    out = []
    for q in chain:
        den = 1
        for c in q:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in q]
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        out.append(tuple(c // g for c in ints) if g else tuple(ints))
    return tuple(out)


def _variations(chain, x: Fraction) -> int:
    signs = [s for s in (_sign_at(c, x) for c in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(poly: IntPolynomial, lo: RationalLike, hi: RationalLike) -> int:
    """Number of distinct real roots in the closed interval [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        return 0
    p = squarefree_part(poly)
    if p.degree < 1:
        return 0
    chain = sturm_sequence(p)
    n = _variations(chain, lo) - _variations(chain, hi)
    if p.sign_at(lo) == 0:
        n += 1
    return n


def _root_bound(poly: IntPolynomial) -> Fraction:
    lead = abs(poly.leading)
    return 1 + Fraction(max(abs(c) for c in poly.coeffs[:-1]), lead) if poly.degree else Fraction(1)


# ---------------------------------------------------------------------------
# real algebraic numbers


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class AlgebraicReal:
    """Real root of an irreducible primitive integer polynomial, pinned by a
    rational interval containing no other root.

    Build instances through :func:`algebraic_real`, :func:`rational_number`
    or :func:`isolate_positive_roots`; the raw constructor trusts its input.
    """

    defining_poly: IntPolynomial
    lo: Fraction
    hi: Fraction

    @property
    def degree(self) -> int:
        return self.defining_poly.degree

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def rational_value(self) -> Optional[Fraction]:
        if self.degree != 1:
            return None
        c0, c1 = self.defining_poly.coeffs
        return Fraction(-c0, c1)

    def __str__(self) -> str:
        r = self.rational_value
        if r is not None:
            return _fmt_q(r)
        return f"root({self.defining_poly}, {_fmt_q(self.lo)}, {_fmt_q(self.hi)})"

    def __repr__(self) -> str:
        return f"AlgebraicReal({self})"

    def approx(self) -> float:
        lo, hi = refine(self, Fraction(1, 2**60))
        return float((lo + hi) / 2)

    def element(self) -> "FieldElement":
        """This number as an element of its own field."""
        return power_in_field(self, 1)


def rational_number(r: RationalLike) -> AlgebraicReal:
    r = Fraction(r)
    return AlgebraicReal(IntPolynomial([-r.numerator, r.denominator]), r, r)


def algebraic_real(poly: Union[IntPolynomial, Sequence[int]], lo: RationalLike, hi: RationalLike) -> AlgebraicReal:
    """Validate that ``[lo, hi]`` isolates one real root of ``poly`` and return
    that root over its minimal polynomial."""
    if not isinstance(poly, IntPolynomial):
        poly = IntPolynomial(poly)
    if poly.is_zero():
        raise ZeroPolynomial("zero polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise NotIsolating(f"empty interval [{lo}, {hi}]")
    sq = squarefree_part(poly)
    if count_roots(sq, lo, hi) != 1:
        raise NotIsolating(f"{poly} has {count_roots(sq, lo, hi)} roots in [{lo}, {hi}]")
    for fac in irreducible_factors(sq):
        if count_roots(fac, lo, hi) == 1:
            if fac.degree == 1:
                return rational_number(Fraction(-fac.coeffs[0], fac.coeffs[1]))
            return AlgebraicReal(fac, lo, hi)
    raise NonUniqueRoot("root not attributed to any irreducible factor")


def isolate_positive_roots(poly: Union[IntPolynomial, Sequence[int]]) -> list[AlgebraicReal]:
    """All distinct positive real roots, ascending, each over its minimal
    polynomial with a Sturm-certified isolating interval."""
    if not isinstance(poly, IntPolynomial):
        poly = IntPolynomial(poly)
    if poly.is_zero():
        raise ZeroPolynomial("zero polynomial")
    sq = squarefree_part(poly)
    if sq.degree < 1:
        return []
    roots = []
    for fac in irreducible_factors(sq):
        if fac.degree == 1:
            r = Fraction(-fac.coeffs[0], fac.coeffs[1])
            if r > 0:
                roots.append(rational_number(r))
            continue
        stack = [(Fraction(0), _root_bound(fac))]
        while stack:
            a, b = stack.pop()
            # fac is irreducible of degree >= 2, so rational endpoints are never roots
            n = count_roots(fac, a, b)
            if n == 0:
                continue
            if n == 1 and a > 0:
                roots.append(AlgebraicReal(fac, a, b))
                continue
            mid = (a + b) / 2
            stack.append((mid, b))
            stack.append((a, mid))
    return _sort_roots(roots)


def _sort_roots(roots: list[AlgebraicReal]) -> list[AlgebraicReal]:
    # roots of distinct irreducible factors are distinct; shrink until intervals separate
    width = Fraction(1)
    while True:
        ivs = [refine(r, width) for r in roots]
        order = sorted(range(len(roots)), key=lambda i: ivs[i][0])
        ok = all(ivs[order[i]][1] < ivs[order[i + 1]][0] for i in range(len(order) - 1))
        if ok:
            return [roots[i] for i in order]
        width /= 16


def compare(a: AlgebraicReal, b: AlgebraicReal) -> int:
    """Exact comparison of two real algebraic numbers."""
    if a.defining_poly == b.defining_poly:
        # same minimal polynomial: equal iff the isolating intervals share the root
        lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
        if lo <= hi and count_roots(a.defining_poly, lo, hi) == 1:
            return 0
    elif a.is_rational and b.is_rational:
        x, y = a.rational_value, b.rational_value
        return (x > y) - (x < y)
    width = Fraction(1)
    while True:
        alo, ahi = refine(a, width)
        blo, bhi = refine(b, width)
        if ahi < blo:
            return -1
        if bhi < alo:
            return 1
        width /= 16


_ROOT_RE = re.compile(r"^\s*root\(\s*\[([^\]]*)\]\s*,\s*([^,]+?)\s*,\s*([^,]+?)\s*\)\s*$")


def parse_algebraic(text: str) -> AlgebraicReal:
    """Parse ``root([c0,...,cd], lo, hi)`` or a rational ``p/q`` / integer."""
    m = _ROOT_RE.match(text)
    if m:
        coeffs = [int(c) for c in m.group(1).split(",") if c.strip()]
        return algebraic_real(coeffs, Fraction(m.group(2).strip()), Fraction(m.group(3).strip()))
    try:
        return rational_number(Fraction(text.strip()))
    except ValueError:
        raise ValueError(f"cannot parse algebraic number {text!r}; expected root([c0,...,cd],lo,hi) or p/q") from None


# ---------------------------------------------------------------------------
# refinement and dyadic enclosures


def refine(a: AlgebraicReal, target_width: RationalLike) -> tuple[Fraction, Fraction]:
    """Isolating interval of width at most ``target_width`` (plain bisection)."""
    target_width = Fraction(target_width)
    if target_width <= 0:
        raise ValueError("target_width must be positive")
    if a.is_rational:
        r = a.rational_value
        return r, r
    # bisect to a power of two so repeated calls share the memo
    p = 0
    while Fraction(1, 2**p) > target_width:
        p += 1
    lo, hi = _bisect_to(a, p)
    return lo, hi


@lru_cache(maxsize=4096)
def _bisect_to(a: AlgebraicReal, p: int) -> tuple[Fraction, Fraction]:
    target = Fraction(1, 2**p)
    if p > 0 and a.hi - a.lo > target:
        lo, hi = _bisect_to(a, p // 2)
    else:
        lo, hi = a.lo, a.hi
    coeffs = a.defining_poly.coeffs
    s_lo = _sign_at(coeffs, lo)
    while hi - lo > target:
        mid = (lo + hi) / 2
        s = _sign_at(coeffs, mid)
        if s == 0:  # pragma: no cover - irreducible of degree >= 2
            raise NonUniqueRoot("rational root of an irreducible polynomial")
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


@lru_cache(maxsize=4096)
def dyadic_interval(a: AlgebraicReal, p: int) -> tuple[int, int]:
    """Integers (A, B) with A/2^p <= a <= B/2^p and B - A <= 3."""
    lo, hi = refine(a, Fraction(1, 2**p))
    scale = 2**p
    A = (lo.numerator * scale) // lo.denominator
    B = -((-hi.numerator * scale) // hi.denominator)
    return A, B


def _imul(a: tuple[int, int], b: tuple[int, int], p: int) -> tuple[int, int]:
    # product of two intervals scaled by 2^p, rounded outward
    prods = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(prods) >> p, -((-max(prods)) >> p)


@lru_cache(maxsize=4096)
def power_enclosures(a: AlgebraicReal, p: int) -> tuple:
    """Intervals (scaled by 2^p) for a^0 .. a^(d-1)."""
    one = (1 << p, 1 << p)
    out = [one]
    base = dyadic_interval(a, p)
    for _ in range(1, a.degree):
        out.append(_imul(out[-1], base, p))
    return tuple(out)


# ---------------------------------------------------------------------------
# field elements


def _reduce(coeffs: Sequence[Fraction], modulus: IntPolynomial) -> tuple:
    d = modulus.degree
    c = [Fraction(x) for x in coeffs]
    lead = modulus.leading
    mod = modulus.coeffs
    for top in range(len(c) - 1, d - 1, -1):
        f = c[top]
        if f:
            f = f / lead
            for i in range(d + 1):
                c[top - d + i] -= f * mod[i]
    c = c[:d] + [Fraction(0)] * (d - len(c))
    return tuple(c)


@dataclass(frozen=True, eq=True)
class FieldElement:
    """c0 + c1*a + ... + c_{d-1}*a^{d-1} over a fixed base number ``a``."""

    base: AlgebraicReal
    coords: tuple

    @classmethod
    def from_coeffs(cls, base: AlgebraicReal, coeffs: Iterable[RationalLike]) -> "FieldElement":
        return cls(base, _reduce([Fraction(c) for c in coeffs], base.defining_poly))

    @classmethod
    def rational(cls, base: AlgebraicReal, r: RationalLike) -> "FieldElement":
        return cls.from_coeffs(base, [Fraction(r)])

    def _check(self, other) -> "FieldElement":
        if isinstance(other, (int, Fraction)):
            return FieldElement.rational(self.base, other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.base is not self.base and other.base != self.base:
            raise MixedBase(f"{self.base} vs {other.base}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.base, tuple(x + y for x, y in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.base, tuple(-x for x in self.coords))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.base, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.base, tuple(x * other for x in self.coords))
        other = self._check(other)
        if other is NotImplemented:
            return other
        prod = [Fraction(0)] * (len(self.coords) + len(other.coords) - 1)
        for i, x in enumerate(self.coords):
            if x:
                for j, y in enumerate(other.coords):
                    prod[i + j] += x * y
        return FieldElement.from_coeffs(self.base, prod)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        r0, r1 = [Fraction(c) for c in self.base.defining_poly.coeffs], _qstrip(self.coords)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _qdivmod(r0, r1)
            qs = _polymul(q, s1)
            s_new = _qstrip([_get(s0, i) - _get(qs, i) for i in range(max(len(s0), len(qs)))])
            r0, r1, s0, s1 = r1, r, s1, s_new
        c = r1[0]
        return FieldElement.from_coeffs(self.base, [x / c for x in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = self._check(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = FieldElement.rational(self.base, 1)
        sq = self
        while e:
            if e & 1:
                result = result * sq
            sq = sq * sq
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(_fmt_q(c) if i == 0 else f"{_fmt_q(c)}*a^{i}")
        return " + ".join(terms) or "0"

    @cached_property
    def _scaled(self) -> tuple[int, tuple]:
        # common denominator and integer numerators of the coordinates
        den = 1
        for c in self.coords:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return den, tuple(int(c * den) for c in self.coords)

    @cached_property
    def _enc_memo(self) -> dict:
        return {}

    def enclosure_scaled(self, p: int) -> tuple[int, int, int]:
        """(L, H, D) with L/D <= value <= H/D, from precision-p power enclosures."""
        hit = self._enc_memo.get(p)
        if hit is not None:
            return hit
        den, nums = self._scaled
        pw = power_enclosures(self.base, p)
        L = H = 0
        for a, (lo, hi) in zip(nums, pw):
            if a > 0:
                L += a * lo
                H += a * hi
            elif a < 0:
                L += a * hi
                H += a * lo
        out = self._enc_memo[p] = (L, H, den << p)
        return out


def _get(seq, i):
    return seq[i] if i < len(seq) else Fraction(0)


def _polymul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def power_in_field(a: AlgebraicReal, e: int) -> FieldElement:
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    return FieldElement.from_coeffs(a, [0] * e + [1])


def rationality_of(x: FieldElement) -> Optional[Fraction]:
    if any(x.coords[1:]):
        return None
    return x.coords[0] if x.coords else Fraction(0)


def sign_of(x: FieldElement) -> int:
    """Exact sign: canonical-zero test, then escalating dyadic enclosures."""
    if x.is_zero():
        return 0
    r = rationality_of(x)
    if r is not None:
        return (r > 0) - (r < 0)
    p = 64
    while True:
        L, H, _ = x.enclosure_scaled(p)
        if L > 0:
            return 1
        if H < 0:
            return -1
        p *= 2


def enclose(x: FieldElement, width: RationalLike) -> tuple[Fraction, Fraction]:
    """Rational interval of width at most ``width`` containing the value."""
    width = Fraction(width)
    r = rationality_of(x)
    if r is not None:
        return r, r
    p = 64
    while True:
        L, H, D = x.enclosure_scaled(p)
        if Fraction(H - L, D) <= width:
            return Fraction(L, D), Fraction(H, D)
        p *= 2


def evaluate_poly_at(poly: IntPolynomial, x: FieldElement) -> FieldElement:
    acc = FieldElement.rational(x.base, 0)
    for c in reversed(poly.coeffs):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# characteristic numbers of the identity families


def construct_characteristic_alpha(l: int, k: int, m: int, M: int) -> AlgebraicReal:
    """Unique positive root of x^(l+k) - m x^l - M, for 1 <= M and M^k < (m+1)^l."""
    if min(l, k, m) < 1:
        raise ValueError("l, k, m must be positive")
    if M < 1 or M**k >= (m + 1) ** l:
        raise MOutOfRange(f"M={M} outside Z cap [1, (m+1)^(l/k)) for l={l}, k={k}, m={m}")
    poly = IntPolynomial([-M] + [0] * (l - 1) + [-m] + [0] * (k - 1) + [1])
    roots = isolate_positive_roots(poly)
    if len(roots) != 1:
        raise NonUniqueRoot(f"{poly} has {len(roots)} positive roots")
    alpha = roots[0]
    # m < alpha^k < m+1 certified by the sign of the defining polynomial along y = x^k
    ak = power_in_field(alpha, k)
    if sign_of(ak - m) != 1 or sign_of(ak - (m + 1)) != -1:
        raise NonUniqueRoot("root not in (m^(1/k), (m+1)^(1/k))")
    return alpha


def lemma_samedenom_check(pq: RationalLike, pq2: RationalLike, l: int, k: int) -> tuple[int, bool]:
    """For a^l = p/q and a^k = p'/q', return gcd(q, q') and whether
    gcd(q, q') != 1 unless q = q' = 1."""
    pq, pq2 = Fraction(pq), Fraction(pq2)
    if pq**k != pq2**l:
        raise InconsistentPair(f"({pq})^{k} != ({pq2})^{l}")
    q, q2 = pq.denominator, pq2.denominator
    g = math.gcd(q, q2)
    return g, (g != 1) or (q == 1 and q2 == 1)
