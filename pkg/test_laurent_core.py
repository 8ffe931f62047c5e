import math
import random
from fractions import Fraction

import pytest

from errors import DivisionByZero, NotIntegral, PrecisionIndeterminate
from laurent_core import (INFINITY, ONE, T, ZERO, add, coefficient, constant, format_series,
                          format_valuation, from_terms, inv, is_zero, monomial, mul, nth_root, power,
                          rational_root, residue, series, sub, truncate, val, val_bound, vanishes)


@pytest.mark.parametrize("x, expected", [
    (ZERO, INFINITY),
    (series([1, 1], offset=2), 2),
    (series([Fraction(1, 3), 0, 5], offset=-1), -1),
])
def test_val(x, expected):
    assert val(x) == expected


def test_val_of_vanishing_value_is_indeterminate():
    x = truncate(monomial(1, 3), 2)
    assert vanishes(x)
    assert not is_zero(x)
    with pytest.raises(PrecisionIndeterminate):
        val(x)
    assert val_bound(x) == 2


def test_add_cancellation():
    assert add(1 + T, 1 - T) == series([2])
    assert add(monomial(1, -1), add(monomial(-1, -1), T)) == T


def test_add_keeps_smaller_precision():
    x = series([1], precision=3)
    y = add(x, monomial(1, 4))
    assert y.precision == 3
    assert y == series([1], precision=3)


def test_mul():
    assert mul(1 + T, 1 - T) == series([1, 0, -1])
    assert mul(monomial(1, 2), monomial(1, -1)) == T


def test_mul_precision_rule():
    y = mul(series([1], precision=2), monomial(1, 3))
    assert y.precision == 5
    assert y.coeffs == (1,)
    assert y.offset == 3


def test_operators_match_functions():
    x = series([2, -1, 3], offset=-1)
    assert x * x == mul(x, x)
    assert x - x == ZERO
    assert (1 + T) ** 3 == power(1 + T, 3)


def test_inv_monomial_is_exact():
    assert inv(T, 4) == monomial(1, -1)
    assert inv(T, 4).is_exact


def test_inv_series():
    y = inv(1 + T, 4)
    assert y == series([1, -1, 1, -1], precision=4)
    back = mul(y, 1 + T)
    assert vanishes(sub(back, ONE))


def test_inv_relative_precision_of_high_valuation():
    y = inv(series([1, 1], offset=2), 5)
    assert val(y) == -2
    assert y.precision == 3


def test_inv_errors():
    with pytest.raises(DivisionByZero):
        inv(ZERO, 4)
    with pytest.raises(PrecisionIndeterminate):
        inv(truncate(T, 1), 4)


@pytest.mark.parametrize("x, expected", [
    (2 + T, 2),
    (T, 0),
    (series([Fraction(-1, 2), 7]), Fraction(-1, 2)),
])
def test_residue(x, expected):
    assert residue(x) == expected


def test_residue_needs_integral_element():
    with pytest.raises(NotIntegral):
        residue(monomial(1, -1))


def test_coefficient_and_truncate():
    x = series([1, 2, 3, 4])
    assert coefficient(x, 2) == 3
    assert coefficient(x, 9) == 0
    y = truncate(x, 2)
    assert y == series([1, 2], precision=2)
    with pytest.raises(PrecisionIndeterminate):
        coefficient(y, 2)


def test_from_terms_drops_zero_terms():
    x = from_terms({-1: Fraction(-1, 2), 0: 0, 2: 3})
    assert x.offset == -1
    assert x.coeffs == (Fraction(-1, 2), 0, 0, 3)


@pytest.mark.parametrize("c, e, expected", [
    (Fraction(4, 9), 2, Fraction(2, 3)),
    (-8, 3, -2),
    (2, 2, None),
    (-4, 2, None),
])
def test_rational_root(c, e, expected):
    assert rational_root(c, e) == expected


def test_nth_root_of_monomial():
    assert nth_root(monomial(-8, 3), 3, 10) == monomial(-2, 1)


def test_nth_root_binomial_series():
    x = series([4, 4])
    r = nth_root(x, 2, 10)
    assert val(r) == 0
    assert r.precision == 10
    assert vanishes(sub(mul(r, r), x))


@pytest.mark.parametrize("x, e", [
    (series([2]), 2),
    (T, 2),
    (series([-1, 1]), 2),
])
def test_nth_root_outside_field(x, e):
    assert nth_root(x, e, 8) is None


@pytest.mark.parametrize("x, text", [
    (1 + T, "1+T"),
    (series([Fraction(-1, 2), 0, 0, 3], offset=-1), "-1/2*T^-1+3*T^2"),
    (series([1, 1], precision=3), "1+T+O(T^3)"),
    (truncate(T, 1), "O(T)"),
    (ZERO, "0"),
    (monomial(-1, 1), "-T"),
])
def test_format_series(x, text):
    assert format_series(x) == text
    assert str(x) == text


@pytest.mark.parametrize("v, text", [
    (INFINITY, "inf"),
    (-INFINITY, "-inf"),
    (Fraction(1, 2), "1/2"),
    (3, "3"),
])
def test_format_valuation(v, text):
    assert format_valuation(v) == text


def random_element(rng):
    """Nonzero exact element with a few terms around T^0"""
    terms = {rng.randint(-4, 4): Fraction(rng.randint(1, 9) * rng.choice([-1, 1]), rng.randint(1, 5))
             for _ in range(rng.randint(1, 4))}
    return from_terms(terms)


def test_ultrametric_inequality():
    rng = random.Random(17)
    for _ in range(300):
        x, y = random_element(rng), random_element(rng)
        s = add(x, y)
        assert val(s) >= min(val(x), val(y))
        if val(x) != val(y):
            assert val(s) == min(val(x), val(y))


def test_valuation_is_multiplicative():
    rng = random.Random(19)
    for _ in range(300):
        x, y = random_element(rng), random_element(rng)
        assert val(mul(x, y)) == val(x) + val(y)


def test_inv_round_trip():
    rng = random.Random(23)
    for _ in range(100):
        # a second term keeps x off the exactly invertible monomials
        x = add(random_element(rng), monomial(1, 5))
        precision = rng.randint(1, 12)
        product = mul(x, inv(x, precision))
        assert product.precision == precision
        assert vanishes(sub(product, ONE))


def test_binomials_are_units():
    for l in range(1, 31):
        for k in range(1, l + 1):
            assert val(constant(math.comb(l, k))) == 0
