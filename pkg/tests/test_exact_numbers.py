from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from floorlab.exact_numbers import (
    FieldElement,
    InconsistentPair,
    IntPolynomial,
    MixedBase,
    MOutOfRange,
    NotIsolating,
    ZeroPolynomial,
    algebraic_real,
    construct_characteristic_alpha,
    count_roots,
    isolate_positive_roots,
    lemma_samedenom_check,
    parse_algebraic,
    power_in_field,
    rationality_of,
    refine,
    sign_of,
)
from floorlab.oracle import alpha_decimal, element_decimal

FAMILIES = [(l, k, m) for l in range(1, 4) for k in range(1, 4) for m in range(1, 4)]


def admissible(l, k, m):
    M = 1
    while M**k < (m + 1) ** l:
        yield M
        M += 1


ALL_FAMILIES = [(l, k, m, M) for (l, k, m) in FAMILIES for M in admissible(l, k, m)]


def test_family_count():
    assert len(ALL_FAMILIES) == 165


def test_int_polynomial_strips_and_prints():
    p = IntPolynomial([-1, -1, 1, 0, 0])
    assert p.degree == 2
    assert str(p) == "[-1,-1,1]"
    assert p(2) == 1
    assert IntPolynomial([0, 0]).is_zero()


def test_isolate_golden():
    (r,) = isolate_positive_roots([-1, -1, 1])
    lo, hi = refine(r, Fraction(1, 10**30))
    assert lo <= Fraction("1.6180339887498948482045868343656") and hi >= Fraction("1.6180339887498948482045868343656") - Fraction(1, 10**30)
    assert abs(float(lo) - float((1 + mpmath.sqrt(5)) / 2)) < 1e-15


def test_isolate_perfect_square_is_rational():
    (r,) = isolate_positive_roots([-4, 0, 1])
    assert r.is_rational and r.rational_value == 2
    assert r.defining_poly.degree == 1


def test_isolate_cubic():
    (r,) = isolate_positive_roots([-1, 0, -1, 1])
    lo, hi = refine(r, Fraction(1, 10**6))
    assert Fraction("1.465570") <= lo and hi <= Fraction("1.465572")


def test_isolate_sorted_and_certified():
    roots = isolate_positive_roots([-6, 11, -6, 1])
    assert [r.rational_value for r in roots] == [1, 2, 3]
    roots = isolate_positive_roots([2, 0, -5, 0, 1])  # x^4 - 5x^2 + 2
    assert len(roots) == 2
    assert roots[0].approx() < roots[1].approx()
    for r in roots:
        assert count_roots(r.defining_poly, r.lo, r.hi) == 1


def test_isolate_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        isolate_positive_roots([0])


def test_algebraic_real_rejects_bad_interval():
    with pytest.raises(NotIsolating):
        algebraic_real([-2, 0, 1], -2, 2)


def test_parse_roundtrip(golden):
    assert parse_algebraic(str(golden)) == golden
    assert parse_algebraic("3/2").rational_value == Fraction(3, 2)
    with pytest.raises(ValueError):
        parse_algebraic("sqrt(2)")


def test_construct_golden_and_silver(golden, silver):
    assert golden.defining_poly.coeffs == (-1, -1, 1)
    assert silver.defining_poly.coeffs == (-1, -2, 1)
    assert abs(silver.approx() - 2.4142135624) < 1e-10


def test_construct_out_of_range():
    with pytest.raises(MOutOfRange):
        construct_characteristic_alpha(2, 1, 1, 4)
    with pytest.raises(MOutOfRange):
        construct_characteristic_alpha(1, 1, 1, 0)


@pytest.mark.parametrize("l,k,m,M", ALL_FAMILIES)
def test_constructed_alpha_properties(l, k, m, M):
    a = construct_characteristic_alpha(l, k, m, M)
    x = a.element()
    assert sign_of(x ** (l + k) - m * x**l - M) == 0
    assert sign_of(x**k - m) > 0 and sign_of(x**k - (m + 1)) < 0
    assert rationality_of(power_in_field(a, l)) is None
    assert rationality_of(power_in_field(a, k)) is None


def test_power_in_field_examples(golden, silver, cbrt2):
    assert power_in_field(golden, 2).coords == (1, 1)
    assert power_in_field(silver, 2).coords == (1, 2)
    assert power_in_field(cbrt2, 1).coords == (0, 1, 0)
    assert power_in_field(cbrt2, 3).coords == (2, 0, 0)


def test_rationality_of(golden, silver):
    g = golden.element()
    s = silver.element()
    assert rationality_of(g * g - g) == 1
    assert rationality_of(g) is None
    assert rationality_of(s * s - 2 * s) == 1


def test_refine_examples(golden, three_halves):
    lo, hi = refine(golden, Fraction(1, 1000))
    assert Fraction("1.617") <= lo < hi <= Fraction("1.619")
    assert hi - lo <= Fraction(1, 1000)
    assert refine(three_halves, Fraction(1, 10)) == (Fraction(3, 2), Fraction(3, 2))


def test_sign_examples(golden):
    g = golden.element()
    assert sign_of(g * g - g - 1) == 0
    assert sign_of(g - 1) == 1
    assert sign_of(g - 2) == -1


def test_field_inverse_and_mixed_base(golden, silver):
    g = golden.element()
    assert (g * g.inverse() - 1).is_zero()
    assert (1 / g - (g - 1)).is_zero()
    with pytest.raises(MixedBase):
        g + silver.element()


def test_samedenom_examples():
    assert lemma_samedenom_check(Fraction(3, 2), Fraction(9, 4), 1, 2) == (2, True)
    assert lemma_samedenom_check(2, 8, 1, 3) == (1, True)
    with pytest.raises(InconsistentPair):
        lemma_samedenom_check(Fraction(3, 2), Fraction(7, 4), 1, 2)


@settings(max_examples=1000, deadline=None)
@given(
    p=st.integers(1, 40),
    q=st.integers(1, 40),
    l=st.integers(1, 4),
    k=st.integers(1, 4),
)
def test_samedenom_random_consistent_pairs(p, q, l, k):
    # alpha = p/q; alpha^l and alpha^k are consistent by construction
    a = Fraction(p, q)
    g, verdict = lemma_samedenom_check(a**l, a**k, l, k)
    assert verdict
    assert (g == 1) == (a.denominator == 1)


_BASES = ["root([-1,-1,1],1,2)", "root([-2,0,1],1,2)", "root([-1,0,-1,1],1,2)", "root([-4,0,0,1],1,2)", "root([-7,-4,4],1,2)", "3/2"]


@settings(max_examples=60, deadline=None)
@given(base=st.sampled_from(_BASES), e=st.integers(0, 8))
def test_power_matches_decimal(base, e):
    a = parse_algebraic(base)
    with mpmath.workdps(110):
        want = alpha_decimal(a, 100) ** e
        got = element_decimal(power_in_field(a, e), 100)
        assert abs(got - want) < mpmath.mpf(10) ** -80


@settings(max_examples=200, deadline=None)
@given(
    base=st.sampled_from(_BASES[:5]),
    c=st.lists(st.fractions(max_denominator=50).filter(lambda f: abs(f) < 100), min_size=3, max_size=3),
)
def test_sign_matches_decimal(base, c):
    a = parse_algebraic(base)
    x = FieldElement.from_coeffs(a, c)
    s = sign_of(x)
    if x.is_zero():
        assert s == 0
    else:
        v = element_decimal(x, 60)
        assert s == (1 if v > 0 else -1)
