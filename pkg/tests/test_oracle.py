from fractions import Fraction

import mpmath
import pytest

from floorlab.exact_numbers import parse_algebraic, power_in_field
from floorlab.oracle import DecimalEvaluator, alpha_decimal, decimal_floor


def test_alpha_decimal_picks_the_isolated_root():
    a = parse_algebraic("root([2,0,-5,0,1],2,3)")  # larger positive root of x^4 - 5x^2 + 2
    with mpmath.workdps(60):
        assert abs(alpha_decimal(a, 50) - mpmath.sqrt((5 + mpmath.sqrt(17)) / 2)) < mpmath.mpf(10) ** -45


def test_decimal_floor_abstains_near_integers():
    with mpmath.workdps(220):
        assert decimal_floor(mpmath.mpf(3)).near_integer
        assert decimal_floor(mpmath.mpf("2.5")).value == 2
        assert decimal_floor(mpmath.mpf("-0.5")).value == -1


def test_evaluator_exact_paths(sqrt2):
    ev = DecimalEvaluator(sqrt2, 200)
    assert ev.floor(3, power_in_field(sqrt2, 2)) == 6
    assert ev.floor(0, power_in_field(sqrt2, 1), Fraction(7, 10)) == 0
    ev = DecimalEvaluator(parse_algebraic("3/2"), 200)
    assert ev.floor(-2, power_in_field(parse_algebraic("3/2"), 1)) == -3


def test_evaluator_irrational(golden):
    ev = DecimalEvaluator(golden, 200)
    assert ev.floor(-1, power_in_field(golden, 1)) == -2
    assert ev.floor(10**6, power_in_field(golden, 3)) == 4236067
