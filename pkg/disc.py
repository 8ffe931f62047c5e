"""Linearization discs: distance profiles, the residue case split, disc estimates and witnesses.

Every radius is a ``DiscRadius`` exponent (radius eps^s). The lower bound in
the residue-root-of-unity case has exponent v_m/m − w, which is rational but
usually not an integer, i.e. an irrational disc of K.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import config
import newton
from errors import (DegenerateInput, DegenerateMultiplier, LemmaViolation, OutsideDisc, RootOfUnity,
                    WitnessNotFound)
from laurent_core import (INFINITY, ONE, div, is_zero, lift, monomial, mul, nth_root, power,
                          residue, sub, truncate, val, val_bound, vanishes)
from maps import (Boundary, DiscRadius, SupremumKind, WHOLE_FIELD, as_series, bijection_disc,
                  boundary_collision, divide_by_x, evaluate, evaluate_series, growth_exponent,
                  injectivity_check, iterate, make_map, power_series, series_sub, supremum_kind)

logger = logging.getLogger(__name__)

# Roots of unity in the residue field Q are ±1, of orders 1 and 2
RESIDUE_ROOT_ORDERS = (1, 2)


class Case(Enum):
    CASE1 = "case1"     # residue of λ is not a root of unity
    CASE2 = "case2"     # residue of λ is a root of unity


@dataclass(frozen=True)
class DistanceProfile:
    lam: object
    N: int
    vals: tuple         # v(1 − λⁿ) for n = 1..N
    m: object           # smallest n with v(1 − λⁿ) > 0, or None

    @property
    def v_m(self):
        return None if self.m is None else self.vals[self.m - 1]


@dataclass(frozen=True)
class DiscEstimate:
    case: Case
    w: object
    m: object
    v_m: object
    lower: DiscRadius
    upper: DiscRadius
    exact: bool
    kind: SupremumKind = SupremumKind.ATTAINED

    @property
    def rho_exponent(self):
        return self.lower.exponent


@dataclass(frozen=True)
class Witness:
    kind: str               # fixed_point, periodic_point or boundary_collision
    description: str
    valuation: Fraction
    sphere_exponent: Fraction
    period: int
    multiplicity: int
    point: object = None    # a LaurentSeries when the point lives in K
    verified: bool = False  # point evaluated back through f


@dataclass(frozen=True)
class ConjugacyCheck:
    x: object
    g_x: object
    residual: object
    conjugacy_holds: bool
    isometric: bool


def _check_profile_pattern(vals, m):
    if m is None:
        return
    for n, v in enumerate(vals, start=1):
        expected = vals[m - 1] if n % m == 0 else 0
        if v != expected:
            raise LemmaViolation(f"v(1-λ^{n}) = {v}, expected {expected} for m = {m}")


def distance_profile(lam, N, working_precision=None):
    """v(1 − λⁿ) for n = 1..N, exact.

    Powers are first taken modulo T^working_precision; whenever 1 − λⁿ
    vanishes there the exact power decides.
    """
    lam = lift(lam)
    if val(lam) != 0:
        raise DegenerateMultiplier(f"multiplier must have valuation 0, got {val(lam)}")
    working_precision = working_precision or config.PROFILE_WORKING_PRECISION
    approx = truncate(lam, working_precision)
    p = approx
    vals = []
    for n in range(1, N + 1):
        d = sub(ONE, p)
        if not vanishes(d):
            vals.append(val(d))
        else:
            exact = sub(ONE, power(lam, n))
            if is_zero(exact):
                raise RootOfUnity(f"λ^{n} = 1", order=n)
            vals.append(val(exact))
        p = mul(p, approx)
    m = next((n for n, v in enumerate(vals, start=1) if v > 0), None)
    _check_profile_pattern(vals, m)
    logger.info(f"✅ Distance profile for λ = {lam} through N = {N}: m = {m}")
    return DistanceProfile(lam, N, tuple(vals), m)


def classify_case(lam):
    """(CASE2, order of the residue) when the residue of λ is ±1, else (CASE1, None)"""
    lam = lift(lam)
    if val(lam) != 0:
        raise DegenerateMultiplier(f"multiplier must have valuation 0, got {val(lam)}")
    r = residue(lam)
    for order in RESIDUE_ROOT_ORDERS:
        if r ** order == 1:
            return Case.CASE2, order
    return Case.CASE1, None


def estimate_from_data(case, w, m, v_m, kind):
    """Disc bounds from (case, w, m, v(1−λᵐ)) and the behaviour of the supremum"""
    upper = bijection_disc(w, kind)
    if w == INFINITY:
        return DiscEstimate(case, w, m, v_m, WHOLE_FIELD, WHOLE_FIELD, True, kind)
    if case is Case.CASE1:
        lower = DiscRadius(-w, Boundary.OPEN)
        return DiscEstimate(case, w, m, v_m, lower, upper, upper.boundary is Boundary.OPEN, kind)
    lower = DiscRadius(Fraction(v_m, m) - w, Boundary.OPEN)
    return DiscEstimate(case, w, m, v_m, lower, upper, False, kind)


def estimate_disc(f, N):
    """Lower and upper bounds for the linearization disc of f"""
    w, _ = growth_exponent(f)
    case, order = classify_case(f.multiplier)
    profile = distance_profile(f.multiplier, N)
    if case is Case.CASE1 and profile.m is not None:
        raise LemmaViolation(f"residue is not a root of unity but v(1-λ^{profile.m}) > 0")
    if case is Case.CASE2 and N >= order and profile.m != order:
        raise LemmaViolation(f"residue has order {order} but the profile gives m = {profile.m}")
    m = profile.m if case is Case.CASE2 else None
    v_m = profile.v_m if case is Case.CASE2 else None
    if case is Case.CASE2 and m is None:
        # N is shorter than the residue order
        m, v_m = order, val(sub(ONE, power(f.multiplier, order)))
    estimate = estimate_from_data(case, w, m, v_m, supremum_kind(f))
    logger.info(f"✅ {case.value}: lower exponent {estimate.lower.exponent}, "
                f"upper exponent {estimate.upper.exponent}")
    return estimate


def _fixed_point_count(f, valuation):
    """Roots of f(x) − x, x ≠ 0, with the given valuation"""
    poly = divide_by_x(series_sub(as_series(f), power_series([0, 1])))
    if len(poly.terms()) < 2:
        return 0
    for v, count in newton.root_valuations(newton.build_polygon(poly.terms())):
        if v == valuation:
            return count
    return 0


def fixed_point_witness(lam, a_n, n, t_precision=None):
    """The fixed point x̂ = [(1−λ)/aₙ]^(1/(n−1)) of λx + aₙxⁿ, built in K when it lives there"""
    lam, a_n = lift(lam), lift(a_n)
    if is_zero(a_n):
        raise DegenerateInput(f"a_{n} vanishes, so λx + a_{n}x^{n} has no nonzero fixed point")
    t_precision = t_precision or config.default_t_precision()
    f = make_map(lam, {n: a_n}, not_root_of_unity=False)
    one_minus = sub(ONE, lam)
    valuation = Fraction(val(one_minus) - val(a_n), n - 1)
    multiplicity = _fixed_point_count(f, valuation)
    point = None
    if valuation.denominator == 1:
        point = nth_root(div(one_minus, a_n, t_precision), n - 1, t_precision)
    if point is None:
        return Witness("fixed_point", f"fixed point of valuation {valuation} (Newton polygon certificate)",
                       valuation, valuation, 1, multiplicity)
    image = evaluate(f, point, check_disc=False)
    if not vanishes(sub(image, point)):
        raise LemmaViolation(f"constructed fixed point {point} is not fixed")
    logger.info(f"✅ fixed point {point} verified on the sphere of exponent {valuation}")
    return Witness("fixed_point", "fixed point in K, verified by f(x) = x",
                   valuation, valuation, 1, multiplicity, point, True)


def _rho_exponent(f, m):
    w, _ = growth_exponent(f)
    return Fraction(val(sub(ONE, power(f.multiplier, m))), m) - w


def periodic_witness(f, m):
    """Period-m points on the sphere of exponent ρ, certified by the polygon of fᵐ(x) − x"""
    if f.is_linear:
        return None
    rho = _rho_exponent(f, m)
    if m == 1 and len(f.higher) == 1:
        degree, a_n = f.higher[0]
        # the fixed points of λx + aₙxⁿ sit on the ρ-sphere only for n = 2
        witness = fixed_point_witness(f.multiplier, a_n, degree)
        if witness.valuation == rho:
            return witness
    poly = divide_by_x(series_sub(iterate(f, m), power_series([0, 1])))
    polygon = newton.build_polygon(poly.terms())
    for valuation, length in newton.root_valuations(polygon):
        if valuation != rho:
            continue
        count = length - (_fixed_point_count(f, rho) if m > 1 else 0)
        if count > 0:
            logger.info(f"✅ {count} points of period {m} on the sphere of exponent {rho}")
            return Witness("periodic_point", f"period-{m} points (Newton polygon certificate)",
                           rho, rho, m, count)
    raise WitnessNotFound(f"no root of f^{m}(x) - x of valuation {rho}")


def boundary_witness(f):
    """x ≠ 0 with f(x) = f(0) on the sphere of exponent −w"""
    found = boundary_collision(f)
    if found is None:
        return None
    valuation, count = found
    return Witness("boundary_collision", "f(x) = f(0) for x on the boundary sphere",
                   valuation, valuation, 1, count)


def witnesses(f, estimate, t_precision=None):
    """Points that show the reported bounds cannot be enlarged"""
    if f.is_linear:
        return []
    found = []
    if estimate.case is Case.CASE1:
        if len(f.higher) == 1:
            degree, a_n = f.higher[0]
            found.append(fixed_point_witness(f.multiplier, a_n, degree, t_precision))
    else:
        quadratic = [degree for degree, _ in f.higher] == [2]
        try:
            found.append(periodic_witness(f, estimate.m))
        except WitnessNotFound:
            if quadratic:
                raise
            logger.warning("⚠️ no periodic point on the lower-bound sphere for this map")
    collision = boundary_witness(f)
    if collision is not None:
        found.append(collision)
    return found


def tail_precision(c, x_valuation, estimate):
    """T-precision to which the truncated conjugacy determines g(x)"""
    lower = estimate.lower
    if lower.is_whole_field:
        return INFINITY
    return math.ceil(x_valuation + c.K * (x_valuation - lower.exponent))


def conjugacy_at(c, x, estimate):
    """g(x) for x strictly inside the lower disc, truncated to what the coefficient bound certifies"""
    x = lift(x)
    v = val(x)
    if not estimate.lower.contains(v):
        raise OutsideDisc(f"val(x) = {v} is not inside the lower disc of exponent {estimate.lower.exponent}")
    return truncate(evaluate_series(c.series, x), tail_precision(c, v, estimate))


def check_conjugacy_at(f, c, x, estimate):
    """g(f(x)) = λ g(x) and val(g(x)) = val(x) at tracked precision"""
    x = lift(x)
    fx = evaluate(f, x)
    g_x = conjugacy_at(c, x, estimate)
    g_fx = conjugacy_at(c, fx, estimate)
    diff = sub(g_fx, mul(f.multiplier, g_x))
    holds = vanishes(diff)
    isometric = val(fx) == val(x) and not vanishes(g_x) and val(g_x) == val(x)
    if not holds:
        logger.error(f"❌ conjugacy fails at x = {x}: residual {diff}")
    return ConjugacyCheck(x, g_x, diff, holds, isometric)


def geometric_bound_check(c, estimate):
    """val(b_k) >= −(k−1)·ρ_exp for k = 2..K, i.e. |b_k|ρᵏ <= ρ"""
    lower = estimate.lower
    if lower.is_whole_field:
        return [(k, True) for k in range(2, c.K + 1)]
    return [(k, val_bound(c.b(k)) >= -(k - 1) * lower.exponent) for k in range(2, c.K + 1)]


def conjugacy_injective(c, estimate):
    """One-to-one condition for the truncated g on the lower disc"""
    if estimate.lower.is_whole_field:
        return True
    return injectivity_check(c.series, estimate.lower.exponent)


def sample_points(disc, count):
    """Deterministic points strictly inside an open disc of integer or fractional exponent"""
    start = 0 if disc.is_whole_field else math.floor(disc.exponent) + 1
    points = []
    for i in range(count):
        v = start + i // 2
        points.append(monomial(i + 1, v) if i % 2 == 0 else sub(monomial(i + 1, v), monomial(Fraction(1, i + 1), v + 2)))
    return points
