"""Per-n and range checks of the nested-floor identities and their
algebraic conditions.

Every bracket is a certified floor (see :mod:`floorlab.certified_floor`).
The identity families are

* ``Z1``     ``[([n a] + 1) a] = [n a^2] + 1``                       all n
* ``Z2``     ``[[n a] a] + 1 = [n a^2]``                             n != 0
* ``MAIN``   ``[[n a^l] a^k] + 1 = [n a^(l+k)]``                     n != 0
* ``DELTA``  ``[[n a^l] a^k + delta] = [n a^(l+k)]``                 all n
* ``MVAR``   ``[[n a^l] a^k] + [n m a^l] + 1 - m [n a^l] = [n a^(l+k)]``  n != 0
* ``PAIR``   ``[n b] - [[n a] b/a] = [n m a] + 1 - m [n a]``          n != 0
* ``POLY``   ``MAIN`` evaluated at ``P(n)``                          P(n) != 0
* ``TRIPLE`` ``[[[n a] a] a] + 1 = [n a^3]``                         n != 0
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Union

import mpmath

from floorlab.certified_floor import floor_value
from floorlab.exact_numbers import (
    AlgebraicReal,
    FieldElement,
    IntPolynomial,
    RationalLike,
    dyadic_interval,
    evaluate_poly_at,
    irreducible_factors,
    power_in_field,
    rationality_of,
    sign_of,
)

DEFAULT_VIOLATION_CAP = 1000


class BetaMissing(ValueError):
    pass


class BadDelta(ValueError):
    pass


class RationalAlpha(ValueError):
    pass


class ZeroN(ValueError):
    pass


class AlphaOutOfHypothesis(ValueError):
    pass


class ConstantPolynomial(ValueError):
    pass


class Variant(enum.Enum):
    Z1 = "z1"
    Z2 = "z2"
    MAIN = "main"
    DELTA = "delta"
    MVAR = "mvar"
    PAIR = "pair"
    POLY = "poly"
    TRIPLE = "triple"


# variants whose identity is quantified over all of Z
_ADMITS_ZERO = {Variant.Z1, Variant.DELTA}


@dataclass(frozen=True)
class IdentityCase:
    variant: Variant
    alpha: AlgebraicReal
    l: int = 1
    k: int = 1
    m: int = 1
    delta: Optional[Fraction] = None
    poly: Optional[IntPolynomial] = None
    beta: Union[AlgebraicReal, FieldElement, None] = None

    def __post_init__(self):
        if min(self.l, self.k, self.m) < 1:
            raise ValueError("l, k, m must be positive integers")
        if self.variant is Variant.POLY:
            if self.poly is None or self.poly.degree < 1:
                raise ConstantPolynomial("Poly variant needs a non-constant polynomial")
        if self.variant is Variant.DELTA:
            if self.delta is None:
                raise BadDelta("Delta variant needs delta")
            object.__setattr__(self, "delta", Fraction(self.delta))
            if not 0 <= self.delta < 1:
                raise BadDelta(f"delta={self.delta} outside [0, 1)")

    # convenience constructors
    @classmethod
    def z1(cls, alpha):
        return cls(Variant.Z1, alpha)

    @classmethod
    def z2(cls, alpha):
        return cls(Variant.Z2, alpha)

    @classmethod
    def main(cls, alpha, l=1, k=1):
        return cls(Variant.MAIN, alpha, l, k)

    @classmethod
    def with_delta(cls, alpha, delta, l=1, k=1):
        return cls(Variant.DELTA, alpha, l, k, delta=Fraction(delta))

    @classmethod
    def mvar(cls, alpha, l=1, k=1, m=1):
        return cls(Variant.MVAR, alpha, l, k, m)

    @classmethod
    def pair(cls, alpha, beta, m=1):
        return cls(Variant.PAIR, alpha, m=m, beta=beta)

    @classmethod
    def polynomial(cls, alpha, poly, l=1, k=1):
        if not isinstance(poly, IntPolynomial):
            poly = IntPolynomial(poly)
        return cls(Variant.POLY, alpha, l, k, poly=poly)

    @classmethod
    def triple(cls, alpha):
        return cls(Variant.TRIPLE, alpha)

    def describe(self) -> dict:
        out = {"variant": self.variant.value, "alpha": str(self.alpha)}
        if self.variant in (Variant.MAIN, Variant.DELTA, Variant.MVAR, Variant.POLY):
            out.update(l=self.l, k=self.k)
        if self.variant in (Variant.MVAR, Variant.PAIR):
            out["m"] = self.m
        if self.delta is not None:
            out["delta"] = str(self.delta)
        if self.poly is not None:
            out["poly"] = list(self.poly.coeffs)
        if self.beta is not None:
            out["beta"] = str(self.beta)
        return out


@dataclass(frozen=True)
class ResidualReport:
    n: int
    lhs: int
    rhs: int
    residual: int
    skipped: bool = False

    @property
    def holds(self) -> bool:
        return self.skipped or self.residual == 0


# ---------------------------------------------------------------------------
# beta in Q*alpha + Q


def express_in_alpha_line(alpha: AlgebraicReal, beta: AlgebraicReal, height: int = 10**6) -> Optional[FieldElement]:
    """Return beta as s*alpha + r in Q[alpha] if such s, r exist with an integer
    relation of height <= ``height``; otherwise None.

    PSLQ only proposes the relation; acceptance requires that the candidate is
    a root of beta's minimal polynomial inside beta's isolating interval.
    """
    if beta.is_rational:
        return FieldElement.rational(alpha, beta.rational_value)
    if alpha.is_rational or beta.degree > alpha.degree or alpha.degree % beta.degree:
        return None
    from floorlab.oracle import alpha_decimal

    with mpmath.workdps(60):
        a = alpha_decimal(alpha, 60)
        b = alpha_decimal(beta, 60)
        rel = mpmath.pslq([mpmath.mpf(1), a, b], maxcoeff=height, maxsteps=10**5)
    if not rel or rel[2] == 0:
        return None
    a0, a1, a2 = (int(c) for c in rel)
    u = FieldElement.from_coeffs(alpha, [Fraction(-a0, a2), Fraction(-a1, a2)])
    if not evaluate_poly_at(beta.defining_poly, u).is_zero():
        return None
    if sign_of(u - beta.lo) < 0 or sign_of(beta.hi - u) < 0:
        return None
    return u


# ---------------------------------------------------------------------------
# evaluation


def _mixed_ratio_floor(b: int, beta: AlgebraicReal, alpha: AlgebraicReal, max_precision: int = 1 << 14) -> int:
    # floor(b * beta / alpha) for positive alpha, beta over unrelated bases
    if b == 0:
        return 0
    p = 64
    while p <= max_precision:
        bl, bh = dyadic_interval(beta, p)
        al, ah = dyadic_interval(alpha, p)
        if al > 0:
            if b > 0:
                lo, hi = (b * bl) // ah, (b * bh) // al
            else:
                lo, hi = (b * bh) // al, (b * bl) // ah
            if lo == hi:
                return lo
        p *= 2
    raise ArithmeticError("mixed-base floor not certified within precision cap")


class _Evaluator:
    """A case compiled to its field elements."""

    def __init__(self, case: IdentityCase):
        self.case = case
        v = case.variant
        a = case.alpha
        self.poly_roots: frozenset = frozenset()
        if v is Variant.PAIR:
            self._setup_pair(case)
            return
        self.a1 = power_in_field(a, 1)
        if v in (Variant.Z1, Variant.Z2, Variant.TRIPLE):
            self.a2 = power_in_field(a, 2)
            self.a3 = power_in_field(a, 3)
        else:
            self.al = power_in_field(a, case.l)
            self.ak = power_in_field(a, case.k)
            self.alk = power_in_field(a, case.l + case.k)
        if v is Variant.POLY:
            self.poly_roots = frozenset(integer_roots(case.poly))

    def _setup_pair(self, case: IdentityCase):
        if case.beta is None:
            raise BetaMissing("Pair variant needs beta")
        a, beta = case.alpha, case.beta
        self.mixed = None
        if isinstance(beta, FieldElement):
            if beta.base != a:
                raise ValueError("beta must be a field element over alpha")
            be = beta
        else:
            be = express_in_alpha_line(a, beta)
            if be is None and a.is_rational:
                # alpha is a rational scalar over beta's field
                be = beta.element()
                self.p_alpha = FieldElement.rational(beta, a.rational_value)
                self.p_beta = be
                self.p_ratio = be / a.rational_value
                return
            if be is None:
                self.mixed = (a, beta)
                self.p_alpha = a.element()
                self.p_beta = beta.element()
                return
        self.p_alpha = power_in_field(a, 1)
        self.p_beta = be
        self.p_ratio = be / self.p_alpha

    def skipped(self, n: int) -> bool:
        v = self.case.variant
        if v is Variant.POLY:
            return n in self.poly_roots
        return n == 0 and v not in _ADMITS_ZERO

    def sides(self, n: int) -> tuple[int, int]:
        case = self.case
        v = case.variant
        if v is Variant.Z1:
            b = floor_value(n, self.a1)
            return floor_value(b + 1, self.a1), floor_value(n, self.a2) + 1
        if v is Variant.Z2:
            b = floor_value(n, self.a1)
            return floor_value(b, self.a1) + 1, floor_value(n, self.a2)
        if v is Variant.TRIPLE:
            b = floor_value(n, self.a1)
            b = floor_value(b, self.a1)
            return floor_value(b, self.a1) + 1, floor_value(n, self.a3)
        if v is Variant.PAIR:
            m = case.m
            na = floor_value(n, self.p_alpha)
            if self.mixed is not None:
                inner = _mixed_ratio_floor(na, self.mixed[1], self.mixed[0])
            else:
                inner = floor_value(na, self.p_ratio)
            lhs = floor_value(n, self.p_beta) - inner
            return lhs, floor_value(n * m, self.p_alpha) + 1 - m * na
        if v is Variant.POLY:
            n = case.poly(n)
        b = floor_value(n, self.al)
        rhs = floor_value(n, self.alk)
        if v in (Variant.MAIN, Variant.POLY):
            return floor_value(b, self.ak) + 1, rhs
        if v is Variant.DELTA:
            return floor_value(b, self.ak, case.delta), rhs
        if v is Variant.MVAR:
            m = case.m
            return floor_value(b, self.ak) + floor_value(n * m, self.al) + 1 - m * b, rhs
        raise AssertionError(v)

    def report(self, n: int) -> ResidualReport:
        if self.skipped(n):
            return ResidualReport(n, 0, 0, 0, True)
        lhs, rhs = self.sides(n)
        return ResidualReport(n, lhs, rhs, lhs - rhs)


def integer_roots(poly: IntPolynomial) -> list[int]:
    """Integer roots of P from its linear rational factors."""
    roots = []
    for fac in irreducible_factors(poly):
        if fac.degree == 1 and fac.coeffs[1] == 1:
            roots.append(-fac.coeffs[0])
    return sorted(roots)


def check_identity(case: IdentityCase, n: int) -> ResidualReport:
    return _Evaluator(case).report(n)


# ---------------------------------------------------------------------------
# range scans


@dataclass
class ScanSummary:
    checked: int = 0
    skipped: int = 0
    violation_count: int = 0
    violations: list = field(default_factory=list)
    first_violation: Optional[ResidualReport] = None
    cap: int = DEFAULT_VIOLATION_CAP

    @property
    def holds(self) -> bool:
        return self.violation_count == 0

    @property
    def first_violation_n(self) -> Optional[int]:
        return None if self.first_violation is None else self.first_violation.n


def _first_key(r: ResidualReport) -> tuple:
    # smallest |n| first, positive n before negative
    return abs(r.n), r.n < 0


def _scan_chunk(args) -> ScanSummary:
    case, lo, hi, cap = args
    ev = _Evaluator(case)
    out = ScanSummary(cap=cap)
    for n in range(lo, hi + 1):
        if ev.skipped(n):
            out.skipped += 1
            continue
        out.checked += 1
        lhs, rhs = ev.sides(n)
        if lhs != rhs:
            rep = ResidualReport(n, lhs, rhs, lhs - rhs)
            out.violation_count += 1
            if len(out.violations) < cap:
                out.violations.append(rep)
            if out.first_violation is None or _first_key(rep) < _first_key(out.first_violation):
                out.first_violation = rep
    return out


def _merge(parts: Iterable[ScanSummary], cap: int) -> ScanSummary:
    out = ScanSummary(cap=cap)
    viols = []
    for part in parts:
        out.checked += part.checked
        out.skipped += part.skipped
        out.violation_count += part.violation_count
        viols.extend(part.violations)
        fv = part.first_violation
        if fv is not None and (out.first_violation is None or _first_key(fv) < _first_key(out.first_violation)):
            out.first_violation = fv
    viols.sort(key=lambda r: r.n)
    out.violations = viols[:cap]
    return out


def default_workers() -> int:
    env = os.environ.get("FLOORLAB_WORKERS")
    return max(1, int(env)) if env else 1


def _partition(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    total = hi - lo + 1
    parts = max(1, min(parts, total))
    step = -(-total // parts)
    return [(a, min(a + step - 1, hi)) for a in range(lo, hi + 1, step)]


def scan_identity(case: IdentityCase, n_lo: int, n_hi: int, cap: int = DEFAULT_VIOLATION_CAP, workers: Optional[int] = None) -> ScanSummary:
    """Check every n in [n_lo, n_hi].  Violations are listed in n order up to
    ``cap``; counts are always exact.  Output does not depend on ``workers``."""
    if n_lo > n_hi:
        raise ValueError("n_lo must not exceed n_hi")
    workers = default_workers() if workers is None else workers
    _Evaluator(case)  # surface BetaMissing and friends before forking
    chunks = _partition(n_lo, n_hi, workers)
    jobs = [(case, a, b, cap) for a, b in chunks]
    if workers <= 1 or len(jobs) == 1:
        parts = [_scan_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, jobs))
    return _merge(parts, cap)


def first_violation(case: IdentityCase, n_max: int) -> Optional[ResidualReport]:
    """Smallest-|n| violation with 0 < |n| <= n_max (n before -n), stopping early."""
    ev = _Evaluator(case)
    for a in range(0 if case.variant in _ADMITS_ZERO else 1, n_max + 1):
        for n in (a, -a) if a else (0,):
            if ev.skipped(n):
                continue
            lhs, rhs = ev.sides(n)
            if lhs != rhs:
                return ResidualReport(n, lhs, rhs, lhs - rhs)
    return None


# ---------------------------------------------------------------------------
# algebraic conditions


@dataclass(frozen=True)
class ConditionReport:
    value: Optional[FieldElement]
    is_integer: bool
    M: Optional[int]
    in_range: bool
    range_description: str
    alpha_positive: bool = True
    alpha_irrational: Optional[bool] = None
    not_in_field: bool = False

    @property
    def holds(self) -> bool:
        ok = self.is_integer and self.in_range and self.alpha_positive and not self.not_in_field
        if self.alpha_irrational is not None:
            ok = ok and self.alpha_irrational
        return ok

    def to_dict(self) -> dict:
        return {
            "value": None if self.value is None else str(self.value),
            "is_integer": self.is_integer,
            "M": self.M,
            "in_range": self.in_range,
            "range": self.range_description,
            "alpha_positive": self.alpha_positive,
            "alpha_irrational": self.alpha_irrational,
            "not_in_field": self.not_in_field,
            "holds": self.holds,
        }


def check_condition(alpha: AlgebraicReal, l: int, k: int, m: int = 1) -> ConditionReport:
    """alpha^(l+k) - m alpha^l in Z cap [1, (m+1)^(l/k)), decided exactly."""
    value = power_in_field(alpha, l + k) - power_in_field(alpha, l) * m
    r = rationality_of(value)
    is_int = r is not None and r.denominator == 1
    M = int(r) if is_int else None
    in_range = is_int and M >= 1 and M**k < (m + 1) ** l
    positive = sign_of(alpha.element()) > 0
    desc = f"Z cap [1, {m + 1}^({l}/{k}))"
    return ConditionReport(value, is_int, M, in_range, desc, alpha_positive=positive)


def check_condition_pair(alpha: AlgebraicReal, beta: Union[AlgebraicReal, FieldElement], m: int) -> ConditionReport:
    """alpha > 1 irrational and beta - m alpha in Z cap [1, alpha)."""
    irrational = not alpha.is_rational
    desc = "Z cap [1, alpha)"
    if isinstance(beta, FieldElement):
        be = beta
    else:
        be = express_in_alpha_line(alpha, beta)
    if be is None:
        return ConditionReport(None, False, None, False, desc, alpha_irrational=irrational, not_in_field=True)
    a = power_in_field(alpha, 1)
    value = be - a * m
    r = rationality_of(value)
    is_int = r is not None and r.denominator == 1
    M = int(r) if is_int else None
    in_range = is_int and M >= 1 and sign_of(a - M) > 0
    positive = sign_of(a) > 0 and sign_of(be) > 0
    irrational = irrational and sign_of(a - 1) > 0
    return ConditionReport(value, is_int, M, in_range, desc, alpha_positive=positive, alpha_irrational=irrational)


@dataclass(frozen=True)
class DeltaInterval:
    lower: FieldElement  # closed end alpha^k - 1
    upper: Fraction  # open end 1

    def contains(self, delta: RationalLike) -> bool:
        delta = Fraction(delta)
        return delta < self.upper and sign_of(FieldElement.rational(self.lower.base, delta) - self.lower) >= 0


def admissible_delta_interval(alpha: AlgebraicReal, k: int) -> DeltaInterval:
    """[alpha^k - 1, 1) for alpha in (0, 1) or (1, 2^(1/k))."""
    a = power_in_field(alpha, 1)
    ak = power_in_field(alpha, k)
    if sign_of(a) <= 0 or sign_of(a - 1) == 0 or sign_of(ak - 2) >= 0:
        raise AlphaOutOfHypothesis(f"alpha={alpha} not in (0,1) u (1, 2^(1/{k}))")
    return DeltaInterval(ak - 1, Fraction(1))


def r_of(n: int, alpha: Union[AlgebraicReal, FieldElement], m: int) -> int:
    """r(n) = [n m a] + 1 - m [n a], which lies in {1, ..., m}."""
    a = alpha if isinstance(alpha, FieldElement) else power_in_field(alpha, 1)
    if rationality_of(a) is not None:
        raise RationalAlpha("r(n) needs an irrational alpha")
    if n == 0:
        raise ZeroN("r(n) is defined for n != 0")
    r = floor_value(n * m, a) + 1 - m * floor_value(n, a)
    assert 1 <= r <= m, (n, r)
    return r


# ---------------------------------------------------------------------------
# condition vs identity


@dataclass(frozen=True)
class EquivalenceRow:
    alpha: AlgebraicReal
    condition: Optional[bool]
    identity_holds: bool
    first_violation: Optional[int]
    violation_count: int
    status: str  # agree | undistinguished | no-verdict | disagreement
    note: str = ""

    @property
    def hard_failure(self) -> bool:
        return self.status == "disagreement"

    def to_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "condition": self.condition,
            "identity_holds": self.identity_holds,
            "first_violation": self.first_violation,
            "violation_count": self.violation_count,
            "status": self.status,
            "note": self.note,
        }


def condition_verdict(case: IdentityCase) -> tuple[Optional[bool], Optional[ConditionReport], str]:
    """Expected truth value of the identity under the matching characterization, or
    None where none applies."""
    v, a = case.variant, case.alpha
    if v in (Variant.Z1, Variant.Z2):
        rep = check_condition(a, 1, 1, 1)
        return rep.holds, rep, ""
    if v is Variant.MAIN:
        rep = check_condition(a, case.l, case.k, 1)
        return rep.holds, rep, ""
    if v is Variant.MVAR:
        rep = check_condition(a, case.l, case.k, case.m)
        return rep.holds, rep, ""
    if v is Variant.POLY:
        rep = check_condition(a, case.l, case.k, 1)
        note = ""
        al = rationality_of(power_in_field(a, case.l))
        ak = rationality_of(power_in_field(a, case.k))
        if al is not None and ak is not None:
            note = "alpha^l and alpha^k both rational: the polynomial characterization does not apply"
        return rep.holds, rep, note
    if v is Variant.PAIR:
        if case.beta is None:
            raise BetaMissing("Pair variant needs beta")
        rep = check_condition_pair(a, case.beta, case.m)
        return rep.holds, rep, ""
    if v is Variant.DELTA:
        rep = check_condition(a, case.l, case.k, 1)
        try:
            iv = admissible_delta_interval(a, case.k)
        except AlphaOutOfHypothesis as exc:
            return None, rep, str(exc)
        if not iv.contains(case.delta):
            return None, rep, f"delta={case.delta} outside [alpha^k - 1, 1)"
        return rep.holds, rep, ""
    return None, None, "open problem: evidence only, no characterization claimed"


def classify(condition: Optional[bool], holds: bool) -> str:
    if condition is None:
        return "no-verdict"
    if condition and not holds:
        return "disagreement"
    if not condition and holds:
        return "undistinguished"
    return "agree"


def cross_validate(
    make_case: Callable[[AlgebraicReal], IdentityCase],
    alphas: Iterable[AlgebraicReal],
    n_max: int,
    workers: Optional[int] = None,
) -> list[EquivalenceRow]:
    """Condition verdict against an identity scan over 0 < |n| <= n_max (n = 0
    included for variants quantified over all of Z)."""
    rows = []
    for a in alphas:
        case = make_case(a)
        cond, _, note = condition_verdict(case)
        scan = scan_identity(case, -n_max, n_max, workers=workers)
        rows.append(
            EquivalenceRow(a, cond, scan.holds, scan.first_violation_n, scan.violation_count, classify(cond, scan.holds), note)
        )
    return rows
