"""Schröder conjugacy g(x) = x + Σ b_k x^k with g∘f = λg.

Two independent solvers are provided. ``solve_by_composition`` matches
coefficients of g∘f = λg degree by degree; ``solve_by_partition`` evaluates
the explicit recurrence

    b_k = 1/(λ(1−λ^(k−1))) Σ_l b_l Σ_α l!/(α₁!⋯α_k!) a₁^α₁ ⋯ a_k^α_k

over the nonnegative solutions α of α₁+…+α_k = l, α₁+2α₂+…+kα_k = k.
Both divide by λ − λ^k = λ(1 − λ^(k−1)) with the same precision, so their
outputs agree exactly.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from errors import PrecisionIndeterminate, ResonantMultiplier
from laurent_core import (INFINITY, ONE, ZERO, add, constant, inv, is_zero, mul, power,
                          sub, val, val_bound, vanishes)
from maps import as_series, compose, power_series, series_mul, series_scale, series_sub

logger = logging.getLogger(__name__)


class Method(Enum):
    COMPOSITION = "composition"
    PARTITION = "partition"


@dataclass(frozen=True)
class Conjugacy:
    series: object          # PowerSeries g, order K
    source: object          # the AnalyticMap f
    t_precision: int
    method: Method

    @property
    def K(self):
        return self.series.order

    def b(self, k):
        return self.series.coefficient(k)

    @property
    def coefficients(self):
        """b_1, ..., b_K"""
        return [self.b(k) for k in range(1, self.K + 1)]

    @property
    def certified_precision(self):
        """T-precision each b_k is known to, keyed by k"""
        return {k: self.b(k).precision for k in range(1, self.K + 1)}


@dataclass(frozen=True)
class IndexSolution:
    k: int
    l: int
    alphas: tuple

    @property
    def factorial_product(self):
        """α₁!⋯α_k!"""
        return math.prod(math.factorial(a) for a in self.alphas)

    @property
    def multinomial(self):
        """l!/(α₁!⋯α_k!)"""
        return math.factorial(self.l) // self.factorial_product


@dataclass(frozen=True)
class BoundCheck:
    k: int
    valuation: object       # val(b_k), or its certified lower bound
    exact_valuation: bool
    bound: object
    slack: object
    holds: bool


@dataclass(frozen=True)
class ResidualReport:
    K: int
    coefficients: tuple     # (degree, residual coefficient) for degrees 1..K
    nonzero_degrees: tuple

    @property
    def vanishes(self):
        return not self.nonzero_degrees


def _divisor(lam, k):
    """λ − λ^k, which must not vanish for the degree-k step"""
    d = sub(lam, power(lam, k))
    if is_zero(d):
        raise ResonantMultiplier(f"λ^{k - 1} = 1: the Schröder equation has no solution at degree {k}",
                                 order=k - 1)
    return d


def _check_solvable(f, K):
    if f.certified_to < K - 1:
        logger.warning(f"⚠️ multiplier only certified up to n = {f.certified_to}, solving to K = {K}")


def solve_by_composition(f, K, t_precision):
    """b_k = [x^k](g_<k ∘ f) / (λ − λ^k) for k = 2..K"""
    _check_solvable(f, K)
    lam = f.multiplier
    fs = as_series(f)
    # powers f^l through degree K, all exact
    f_powers = [None, power_series(list(fs.coeffs), K)]
    for _ in range(2, K):
        f_powers.append(series_mul(f_powers[-1], fs, K))
    b = [ZERO, ONE]
    for k in range(2, K + 1):
        # [x^k] of Σ_{l<k} b_l f^l; the l = k term is λ^k b_k
        c_k = ZERO
        for l in range(1, k):
            if not is_zero(b[l]):
                c_k = add(c_k, mul(b[l], f_powers[l].coefficient(k)))
        b.append(mul(c_k, inv(_divisor(lam, k), t_precision)))
    logger.info(f"✅ Solved Schröder equation by composition through K = {K}")
    return Conjugacy(power_series(b, K), f, t_precision, Method.COMPOSITION)


def _compositions(k, l, max_part):
    """Multisets of l parts in 1..max_part summing to k, as part-count tuples"""
    if l == 0:
        if k == 0:
            yield ()
        return
    for part in range(min(k - (l - 1), max_part), 0, -1):
        for rest in _compositions(k - part, l - 1, part):
            yield (part,) + rest


@lru_cache(maxsize=None)
def _index_solutions(k, l):
    solutions = []
    for parts in _compositions(k, l, k):
        # α_j counts the parts equal to j
        alphas = [0] * k
        for part in parts:
            alphas[part - 1] += 1
        solutions.append(IndexSolution(k, l, tuple(alphas)))
    return tuple(solutions)


def enumerate_index_solutions(k, l):
    """All α with Σα_j = l and Σ jα_j = k, for 1 <= l <= k−1"""
    if not 1 <= l <= k - 1:
        raise ValueError(f"need 1 <= l <= k-1, got k={k}, l={l}")
    return list(_index_solutions(k, l))


def _partition_sum(f, k, l):
    """Σ_α l!/∏α_j! ∏ a_j^α_j with a₁ = λ"""
    total = ZERO
    for solution in _index_solutions(k, l):
        term = constant(solution.multinomial)
        for j, alpha in enumerate(solution.alphas, start=1):
            if alpha == 0:
                continue
            a_j = f.coefficient(j)
            # a missing coefficient kills the whole product
            if is_zero(a_j):
                term = ZERO
                break
            term = mul(term, power(a_j, alpha))
        if not is_zero(term):
            total = add(total, term)
    return total


def solve_by_partition(f, K, t_precision):
    """The explicit index-sum recurrence for b_2..b_K"""
    _check_solvable(f, K)
    lam = f.multiplier
    b = [ZERO, ONE]
    for k in range(2, K + 1):
        c_k = ZERO
        for l in range(1, k):
            if not is_zero(b[l]):
                c_k = add(c_k, mul(b[l], _partition_sum(f, k, l)))
        divisor = mul(lam, sub(ONE, power(lam, k - 1)))
        if is_zero(divisor):
            raise ResonantMultiplier(f"λ^{k - 1} = 1: the Schröder equation has no solution at degree {k}",
                                     order=k - 1)
        b.append(mul(c_k, inv(divisor, t_precision)))
    logger.info(f"✅ Solved Schröder equation by index partitions through K = {K}")
    return Conjugacy(power_series(b, K), f, t_precision, Method.PARTITION)


def solve(f, K, t_precision, method=Method.COMPOSITION):
    if method is Method.PARTITION:
        return solve_by_partition(f, K, t_precision)
    return solve_by_composition(f, K, t_precision)


def cross_check(c1, c2):
    """Degrees k at which two solutions differ"""
    K = min(c1.K, c2.K)
    return [k for k in range(1, K + 1) if c1.b(k) != c2.b(k)]


def residual(f, c, K=None):
    """Coefficients of g∘f − λg through x-degree K"""
    K = c.K if K is None else min(K, c.K)
    lhs = compose(c.series, f, K)
    rhs = series_scale(c.series, f.multiplier)
    diff = series_sub(lhs, power_series(list(rhs.coeffs), K))
    coefficients = tuple((k, diff.coefficient(k)) for k in range(1, K + 1))
    nonzero = tuple(k for k, r in coefficients if not vanishes(r))
    if nonzero:
        logger.error(f"❌ Schröder residual is nonzero at degrees {list(nonzero)}")
    return ResidualReport(K, coefficients, nonzero)


def bk_bound(k, profile, w):
    """(k−1)w − Σ_{n<k} v(1−λⁿ), the valuation form of the coefficient bound"""
    return (k - 1) * Fraction(w) - sum(profile.vals[:k - 1])


def check_bk_bound(c, profile, w):
    """Verify val(b_k) >= bound for every computed k >= 2"""
    if profile.N < c.K - 1:
        raise ValueError(f"profile covers n <= {profile.N}, need {c.K - 1}")
    report = []
    for k in range(2, c.K + 1):
        b_k = c.b(k)
        bound = INFINITY if w == INFINITY else bk_bound(k, profile, w)
        if b_k.coeffs or b_k.is_exact:
            v, exact = val(b_k), True
        else:
            v, exact = val_bound(b_k), False
            if v < bound:
                raise PrecisionIndeterminate(
                    f"b_{k} is zero modulo T^{v}, which does not certify the bound {bound}")
        holds = v >= bound
        slack = None if INFINITY in (v, bound) else v - bound
        report.append(BoundCheck(k, v, exact, bound, slack, holds))
        if not holds:
            logger.error(f"❌ coefficient bound fails at k = {k}: val(b_k) = {v} < {bound}")
    return report


def multinomial_integrality(k):
    """Whether every factor l!/∏α_j! for degree k is an integer"""
    for l in range(1, k):
        for solution in _index_solutions(k, l):
            if math.factorial(l) % solution.factorial_product:
                return False
    return True
