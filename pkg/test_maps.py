from fractions import Fraction

import pytest

from errors import (DegenerateInput, DegenerateMultiplier, EmptyMap, InexactInput, OutsideDisc,
                    RootOfUnity, UsageError)
from laurent_core import INFINITY, ONE, T, ZERO, constant, monomial, power, series
from maps import (WHOLE_FIELD, Boundary, DiscRadius, SupremumKind, WeierstrassData, bijection_disc,
                  boundary_collision, closed_disc_degree, compose, evaluate, growth_exponent,
                  injectivity_check, iterate, make_map, maximal_bijection_disc, power_series,
                  radius_of_convergence, series_mul, weierstrass_data)


def test_evaluate():
    f = make_map(1 + T, {2: 1})
    assert evaluate(f, T) == T + monomial(2, 2)
    assert evaluate(f, ZERO) == ZERO


def test_evaluate_linear_map():
    f = make_map(2 + T)
    x = series([3, 1], offset=-4)
    assert evaluate(f, x) == (2 + T) * x


def test_evaluate_outside_bijection_disc():
    f = make_map(1 + T, {2: 1})
    with pytest.raises(OutsideDisc):
        evaluate(f, ONE)
    assert evaluate(f, ONE, check_disc=False) == 2 + T


def test_compose_coefficient():
    h = compose(power_series([0, 0, 1]), power_series([0, 1, 0, 1]), 4)
    assert h.coefficient(2) == ONE
    assert h.coefficient(3) == ZERO
    assert h.coefficient(4) == constant(2)


def test_compose_with_identity():
    f = make_map(-1 + T, {2: T, 3: 1})
    assert compose(f, power_series([0, 1])).coeffs == (ZERO, -1 + T, T, ONE)


def test_compose_linear_outer_map():
    g = power_series([0, 1, T, 5], 6)
    h = compose(make_map(1 + T), g, 2)
    assert h.coeffs == (ZERO, 1 + T, (1 + T) * T)
    assert h.order == 2


def test_compose_needs_vanishing_inner_series():
    with pytest.raises(ValueError):
        compose(power_series([0, 1]), power_series([1, 1]))


def test_iterate():
    f = make_map(-1 + T, {2: 1})
    assert iterate(f, 1, 4).coeffs == (ZERO, -1 + T, ONE)
    assert iterate(f, 2, 4).coefficient(1) == series([1, -2, 1])


def test_iterate_linear():
    lam = 1 + T
    assert iterate(make_map(lam), 5, 3).coefficient(1) == lam ** 5


def test_compose_is_associative_through_truncation(corpus):
    order = 6
    for f, g, h in zip(corpus, corpus[1:], corpus[2:]):
        left = compose(f, compose(g, h, order), order)
        right = compose(compose(f, g, order), h, order)
        for degree in range(order + 1):
            assert left.coefficient(degree) == right.coefficient(degree)


def test_iterate_multiplier_is_multiplicative(corpus):
    for f in corpus[:8]:
        for n in (3, 4):
            assert iterate(f, n, 4).coefficient(1) == power(f.multiplier, n)


def test_series_mul_order():
    p = power_series([0, 1, 1], 5)
    q = power_series([0, 0, 1])
    assert series_mul(p, q).order == 7


@pytest.mark.parametrize("higher, expected", [
    ({2: 1}, 0),
    ({2: T, 3: T}, Fraction(1, 2)),
    ({}, INFINITY),
    ({2: monomial(1, 3)}, 3),
    ({2: monomial(1, -1), 4: ONE}, -1),
])
def test_growth_exponent(higher, expected):
    w, attained = growth_exponent(make_map(1 + T, higher))
    assert w == expected
    assert attained


@pytest.mark.parametrize("higher, expected", [
    ({2: 1}, DiscRadius(0, Boundary.OPEN)),
    ({2: monomial(1, 3)}, DiscRadius(-3, Boundary.OPEN)),
    ({}, WHOLE_FIELD),
])
def test_maximal_bijection_disc(higher, expected):
    assert maximal_bijection_disc(make_map(1 + T, higher)) == expected


def test_bijection_disc_supremum_kinds():
    assert bijection_disc(2, SupremumKind.ATTAINED) == DiscRadius(-2, Boundary.OPEN)
    assert bijection_disc(2, SupremumKind.DIVERGES_ON_SPHERE) == DiscRadius(-2, Boundary.OPEN)
    assert bijection_disc(2, SupremumKind.NOT_ATTAINED) == DiscRadius(-2, Boundary.CLOSED)


def test_disc_radius():
    d = DiscRadius(Fraction(1, 2))
    assert not d.is_rational
    assert d.contains(1)
    assert not d.contains(Fraction(1, 2))
    assert DiscRadius(Fraction(1, 2), Boundary.CLOSED).contains(Fraction(1, 2))
    assert d.radius(Fraction(1, 4)) == pytest.approx(0.5)
    assert WHOLE_FIELD.contains(-100)
    assert radius_of_convergence(make_map(1 + T, {2: 1})) == WHOLE_FIELD


@pytest.mark.parametrize("q, expected", [
    (1, WeierstrassData(2, 2, 1)),
    (2, WeierstrassData(3, 1, 1)),
])
def test_weierstrass_data(q, expected):
    h = power_series([0, T, 1])
    assert weierstrass_data(h, q) == expected


@pytest.mark.parametrize("q", [-2, 0, Fraction(5, 3)])
def test_weierstrass_data_of_identity(q):
    assert weierstrass_data(power_series([0, 1]), q) == WeierstrassData(q, 1, 1)


def test_weierstrass_data_errors():
    with pytest.raises(EmptyMap):
        weierstrass_data(power_series([]), 0)
    with pytest.raises(InexactInput):
        weierstrass_data(power_series([0, 1, 1], 4), 0)


@pytest.mark.parametrize("coeffs, q, expected", [
    ([0, 1, 1], 0, True),
    ([0, 1, monomial(1, -1)], 0, False),
    ([0, 1], 5, True),
    ([0, T, 1], 1, True),
    ([0, T, 1], Fraction(1, 2), False),
])
def test_injectivity_check(coeffs, q, expected):
    assert injectivity_check(power_series(coeffs), q) is expected


def test_injectivity_needs_linear_term():
    with pytest.raises(DegenerateInput):
        injectivity_check(power_series([0, 0, 1]), 0)


def test_closed_disc_degree():
    assert closed_disc_degree(power_series([0, 1, 1]), 0) == 2
    assert closed_disc_degree(power_series([0, 1, 1]), 1) == 1
    assert closed_disc_degree(power_series([0, 1, monomial(1, -1)]), 0) is None


def test_boundary_collision():
    # f(x) = x·(2 + T + x) vanishes at x = −2 − T
    assert boundary_collision(make_map(2 + T, {2: 1})) == (0, 1)
    assert boundary_collision(make_map(2 + T)) is None


def test_make_map_validation():
    with pytest.raises(DegenerateMultiplier):
        make_map(T, {2: 1})
    with pytest.raises(UsageError):
        make_map(1 + T, {1: 1})
    with pytest.raises(RootOfUnity):
        make_map(-1)


def test_make_map_certification():
    f = make_map(1 + T, {3: 0, 2: 1}, n_check=10)
    assert f.certified_to == 10
    assert f.higher == ((2, ONE),)
    assert f.degree == 2
    unchecked = make_map(-1, not_root_of_unity=False)
    assert unchecked.certified_to == 0
    assert unchecked.is_linear
