from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from floorlab.certified_floor import (
    Exactness,
    LinearForm,
    certified_floor,
    certified_frac,
    eval_bracket_chain,
    floor_value,
    frac_enclosure,
)
from floorlab.exact_numbers import parse_algebraic, power_in_field, rationality_of, sign_of
from floorlab.oracle import DecimalEvaluator


def test_floor_examples(golden, three_halves):
    a = golden.element()
    assert certified_floor(LinearForm(1, a)).value == 1
    r = certified_floor(LinearForm(-1, a))
    assert r.value == -2 and r.exactness is Exactness.INTERVAL_CERTIFIED
    assert r.final_interval_width < 1
    q = certified_floor(LinearForm(2, three_halves.element()))
    assert q.value == 3 and q.exactness is Exactness.EXACT_RATIONAL


def test_frac_examples(golden, three_halves):
    a = golden.element()
    _, f = certified_frac(LinearForm(1, a))
    assert (f - (a - 1)).is_zero()
    lo, hi = frac_enclosure(f)
    assert Fraction("0.618") < lo <= hi < Fraction("0.619")

    _, f = certified_frac(LinearForm(2, three_halves.element()))
    assert f.is_zero()

    a2 = power_in_field(golden, 2)
    fl, f = certified_frac(LinearForm(2, a2))
    assert fl.value == 5
    assert (f - (2 * a2 - 5)).is_zero()
    lo, hi = frac_enclosure(f)
    assert Fraction("0.236") < lo <= hi < Fraction("0.237")


def test_chain_examples(golden):
    a = golden.element()
    assert eval_bracket_chain(1, [a, a]) == 1
    assert eval_bracket_chain(7, [a, a]) == 17
    assert eval_bracket_chain(1, [a, a, a]) == 1


def test_chain_shifts_and_errors(golden):
    a = golden.element()
    # [[3a]a + 1/2] = [4a + 1/2] = [6.97] = 6
    assert eval_bracket_chain(3, [a, a], [0, Fraction(1, 2)]) == 6
    with pytest.raises(ValueError):
        eval_bracket_chain(1, [])
    with pytest.raises(ValueError):
        eval_bracket_chain(1, [a], [0, 0])


_IRRATIONAL = ["root([-1,-1,1],1,2)", "root([-2,0,1],1,2)", "root([-1,0,-1,1],1,2)", "root([-1,-2,1],2,3)", "root([-3,0,-1,0,1],1,2)"]


@settings(max_examples=300, deadline=None)
@given(base=st.sampled_from(_IRRATIONAL), n=st.integers(-10**6, 10**6), e=st.integers(1, 4),
       shift=st.fractions(min_value=0, max_value=1, max_denominator=100))
def test_floor_law(base, n, e, shift):
    a = parse_algebraic(base)
    x = power_in_field(a, e)
    v = floor_value(n, x, shift)
    t = x * n + shift
    assert sign_of(t - v) >= 0
    assert sign_of(t - (v + 1)) < 0


@settings(max_examples=200, deadline=None)
@given(base=st.sampled_from(_IRRATIONAL), n=st.integers(1, 10**8), e=st.integers(1, 3))
def test_negation(base, n, e):
    x = power_in_field(parse_algebraic(base), e)
    assume(rationality_of(x) is None)
    assert floor_value(-n, x) == -floor_value(n, x) - 1


def test_monotone_scan(golden):
    a = golden.element()
    vals = [floor_value(n, a) for n in range(-500, 501)]
    assert all(u <= v for u, v in zip(vals, vals[1:]))


@pytest.mark.parametrize("base", _IRRATIONAL)
def test_against_oracle(base):
    a = parse_algebraic(base)
    ev = DecimalEvaluator(a, 200)
    for e in (1, 2, 3):
        x = power_in_field(a, e)
        for n in (1, -1, 7, -13, 999_983, -10**6):
            assert floor_value(n, x) == ev.floor(n, x)


def test_rational_field_element_in_irrational_field(cbrt2):
    x = power_in_field(cbrt2, 3)
    assert floor_value(-1, x) == -2
    r = certified_floor(LinearForm(5, x, Fraction(1, 3)))
    assert r.value == 10 and r.exactness is Exactness.EXACT_RATIONAL
