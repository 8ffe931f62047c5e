import pytest

from disc import distance_profile
from errors import ResonantMultiplier
from laurent_core import ONE, T, ZERO, add, monomial, sub, val, vanishes
from maps import growth_exponent, make_map, power_series
from schroder import (Conjugacy, IndexSolution, Method, bk_bound, check_bk_bound, cross_check,
                      enumerate_index_solutions, multinomial_integrality, residual, solve,
                      solve_by_composition, solve_by_partition)

K = 16
T_PRECISION = 32


def test_b2_for_residue_one():
    f = make_map(1 + T, {2: 1})
    c = solve_by_composition(f, 8, 16)
    b2 = c.b(2)
    assert val(b2) == -1
    assert b2.coeffs[:4] == (-1, 1, -1, 1)
    assert c.b(1) == ONE
    assert c.K == 8


def test_linear_map_is_already_linear():
    c = solve_by_composition(make_map(2 + T), 6, 16)
    assert c.series.coeffs == (ZERO, ONE)
    assert all(c.b(k) == ZERO for k in range(2, 7))


def test_b2_for_generic_residue():
    c = solve_by_composition(make_map(2 + T, {2: 1}), 4, 16)
    assert val(c.b(2)) == 0


def test_partition_b2_matches_composition():
    f = make_map(1 + T, {2: 1})
    assert solve_by_partition(f, 2, 16).b(2) == solve_by_composition(f, 2, 16).b(2)


def test_partition_without_quadratic_term():
    c = solve_by_partition(make_map(1 + T, {3: 1}), 5, 16)
    assert c.b(2) == ZERO
    assert not vanishes(c.b(3))


def test_partition_quadratic_k3():
    f = make_map(-1 + T, {2: T})
    assert cross_check(solve_by_partition(f, 3, 20), solve_by_composition(f, 3, 20)) == []


@pytest.mark.parametrize("k, l, expected", [
    (2, 1, {(0, 1)}),
    (3, 2, {(1, 1, 0)}),
    (4, 2, {(1, 0, 1, 0), (0, 2, 0, 0)}),
    (4, 3, {(2, 1, 0, 0)}),
])
def test_enumerate_index_solutions(k, l, expected):
    solutions = enumerate_index_solutions(k, l)
    assert {s.alphas for s in solutions} == expected
    for s in solutions:
        assert sum(s.alphas) == l
        assert sum(j * a for j, a in enumerate(s.alphas, start=1)) == k


def test_enumerate_index_solutions_range():
    with pytest.raises(ValueError):
        enumerate_index_solutions(3, 3)


def test_multinomial():
    solution = IndexSolution(4, 3, (2, 1, 0, 0))
    assert solution.factorial_product == 2
    assert solution.multinomial == 3
    assert all(multinomial_integrality(k) for k in range(2, 12))


def test_resonant_multiplier():
    f = make_map(-1, {2: 1}, not_root_of_unity=False)
    with pytest.raises(ResonantMultiplier):
        solve_by_composition(f, 4, 8)
    with pytest.raises(ResonantMultiplier):
        solve_by_partition(f, 4, 8)


def test_residual_vanishes():
    f = make_map(1 + T, {2: 1})
    report = residual(f, solve_by_composition(f, 8, 16))
    assert report.vanishes
    assert report.K == 8


def test_residual_detects_perturbation():
    f = make_map(1 + T, {2: 1})
    c = solve_by_composition(f, 8, 16)
    coeffs = list(c.series.coeffs)
    coeffs[2] = add(coeffs[2], ONE)
    broken = Conjugacy(power_series(coeffs, c.K), f, c.t_precision, c.method)
    report = residual(f, broken)
    assert not report.vanishes
    assert report.nonzero_degrees[0] == 2


@pytest.mark.parametrize("lam, higher, k2_bound", [
    (1 + T, {2: 1}, -1),
    (2 + T, {2: 1}, 0),
])
def test_coefficient_bound_at_k2(lam, higher, k2_bound):
    f = make_map(lam, higher)
    c = solve_by_composition(f, 6, 16)
    w, _ = growth_exponent(f)
    checks = check_bk_bound(c, distance_profile(lam, 8), w)
    assert checks[0].k == 2
    assert checks[0].bound == k2_bound
    assert checks[0].valuation == k2_bound
    assert checks[0].slack == 0
    assert all(check.holds for check in checks)


def test_coefficient_bound_for_linear_map():
    f = make_map(1 + T)
    c = solve_by_composition(f, 6, 16)
    checks = check_bk_bound(c, distance_profile(1 + T, 8), growth_exponent(f)[0])
    assert all(check.holds for check in checks)


def test_coefficient_bound_needs_long_profile():
    f = make_map(1 + T, {2: 1})
    c = solve_by_composition(f, 8, 16)
    with pytest.raises(ValueError):
        check_bk_bound(c, distance_profile(1 + T, 3), 0)


def test_bk_bound_formula():
    profile = distance_profile(-1 + T, 8)
    # n = 1..4 contribute 0 + 1 + 0 + 1
    assert bk_bound(5, profile, 1) == 4 - 2


def test_certified_precision():
    c = solve_by_composition(make_map(1 + T, {2: 1}), 4, 16)
    precision = c.certified_precision
    assert precision[1] == float("inf")
    assert precision[2] == 15
    assert len(c.coefficients) == 4


def test_solve_dispatch():
    f = make_map(2 + T, {3: monomial(1, -1)})
    assert solve(f, 5, 12, Method.PARTITION).method is Method.PARTITION
    assert solve(f, 5, 12).method is Method.COMPOSITION


def test_corpus_residuals(corpus):
    for f in corpus:
        assert residual(f, solve_by_composition(f, K, T_PRECISION)).vanishes


def test_corpus_methods_agree(corpus):
    for f in corpus:
        by_composition = solve_by_composition(f, 10, T_PRECISION)
        by_partition = solve_by_partition(f, 10, T_PRECISION)
        assert cross_check(by_composition, by_partition) == []


def test_corpus_coefficient_bound(corpus):
    for f in corpus:
        c = solve_by_composition(f, K, T_PRECISION)
        w, _ = growth_exponent(f)
        checks = check_bk_bound(c, distance_profile(f.multiplier, K - 1), w)
        assert all(check.holds for check in checks)


def test_cross_check_reports_difference():
    f = make_map(1 + T, {2: 1})
    c = solve_by_composition(f, 4, 16)
    other = Conjugacy(power_series([ZERO, ONE, sub(c.b(2), T), c.b(3), c.b(4)], 4), f, 16, Method.PARTITION)
    assert cross_check(c, other) == [2]
