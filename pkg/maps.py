"""Analytic self-maps f(x) = λx + Σ aᵢxⁱ over K and their mapping data on discs.

Power series in x are ``PowerSeries`` values: coefficients indexed by
degree, known through x-degree ``order`` (INFINITY for polynomials).
Radii are handled through exponents only: a disc of exponent s has radius
eps^s, so a smaller exponent is a larger disc.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import config
import newton
from errors import (DegenerateInput, DegenerateMultiplier, EmptyMap, InexactInput,
                    OutsideDisc, RootOfUnity, UsageError)
from laurent_core import (INFINITY, ONE, ZERO, LaurentSeries, add, is_zero, lift, mul,
                          sub, val, val_bound)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple
    order: object = INFINITY

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coefficient(self, i):
        if i > self.order:
            raise ValueError(f"degree {i} is past the truncation order {self.order}")
        return self.coeffs[i] if i < len(self.coeffs) else ZERO

    def terms(self):
        """(degree, coefficient) for every coefficient that is not exactly zero"""
        return [(i, c) for i, c in enumerate(self.coeffs) if not is_zero(c)]


def power_series(coeffs, order=INFINITY):
    coeffs = [lift(c) for c in coeffs]
    if order != INFINITY:
        coeffs = coeffs[:order + 1]
    while coeffs and is_zero(coeffs[-1]):
        coeffs.pop()
    return PowerSeries(tuple(coeffs), order)


def _lowest_degree(p):
    for i, c in enumerate(p.coeffs):
        if not is_zero(c):
            return i
    return INFINITY


def series_add(p, q):
    order = min(p.order, q.order)
    size = max(len(p.coeffs), len(q.coeffs))
    coeffs = []
    for i in range(size):
        a = p.coeffs[i] if i < len(p.coeffs) else ZERO
        b = q.coeffs[i] if i < len(q.coeffs) else ZERO
        coeffs.append(add(a, b))
    return power_series(coeffs, order)


def series_sub(p, q):
    return series_add(p, series_scale(q, lift(-1)))


def series_scale(p, c):
    return power_series([mul(c, a) for a in p.coeffs], p.order)


def series_mul(p, q, order=INFINITY):
    """Product truncated at x-degree ``order``"""
    order = min(order, p.order + _lowest_degree(q), q.order + _lowest_degree(p))
    if not p.coeffs or not q.coeffs:
        return power_series([], order)
    size = len(p.coeffs) + len(q.coeffs) - 1
    if order != INFINITY:
        size = min(size, order + 1)
    out = [ZERO] * size
    for i, a in enumerate(p.coeffs):
        if i >= size or is_zero(a):
            continue
        for j in range(min(len(q.coeffs), size - i)):
            b = q.coeffs[j]
            if not is_zero(b):
                out[i + j] = add(out[i + j], mul(a, b))
    return power_series(out, order)


def divide_by_x(p):
    """p(x)/x for a series with p(0) = 0"""
    if p.coeffs and not is_zero(p.coeffs[0]):
        raise ValueError("series does not vanish at 0")
    return power_series(list(p.coeffs[1:]), p.order - 1)


@dataclass(frozen=True)
class AnalyticMap:
    multiplier: LaurentSeries
    higher: tuple
    not_root_of_unity: bool = True
    certified_to: int = 0

    @property
    def degree(self):
        return self.higher[-1][0] if self.higher else 1

    @property
    def is_linear(self):
        return not self.higher

    def coefficient(self, i):
        if i == 1:
            return self.multiplier
        for degree, c in self.higher:
            if degree == i:
                return c
        return ZERO


def certify_not_root_of_unity(lam, bound):
    """Check λⁿ ≠ 1 exactly for n = 1..bound"""
    p = lam
    for n in range(1, bound + 1):
        if is_zero(sub(p, ONE)):
            raise RootOfUnity(f"multiplier is a root of unity of order {n}", order=n)
        p = mul(p, lam)
    return bound


def make_map(multiplier, higher=None, not_root_of_unity=True, n_check=None):
    """Build λx + Σ aᵢxⁱ, validating |λ| = 1 and certifying λ up to n_check"""
    lam = lift(multiplier)
    if val(lam) != 0:
        raise DegenerateMultiplier(f"multiplier must have valuation 0, got {val(lam)}")
    terms = []
    for degree, c in sorted((higher or {}).items()):
        degree = int(degree)
        if degree < 2:
            raise UsageError(f"higher coefficients need degree >= 2, got a{degree}")
        c = lift(c)
        if not is_zero(c):
            terms.append((degree, c))
    certified_to = 0
    if not_root_of_unity:
        bound = config.N_CHECK if n_check is None else n_check
        certified_to = certify_not_root_of_unity(lam, bound)
        logger.debug(f"🔍 multiplier {lam} certified not a root of unity up to n = {certified_to}")
    return AnalyticMap(lam, tuple(terms), not_root_of_unity, certified_to)


def as_series(f):
    if isinstance(f, PowerSeries):
        return f
    coeffs = [ZERO] * (f.degree + 1)
    coeffs[1] = f.multiplier
    for degree, c in f.higher:
        coeffs[degree] = c
    return power_series(coeffs)


def evaluate_series(h, x):
    """Σ cᵢxⁱ over the stored coefficients (Horner)"""
    acc = ZERO
    for c in reversed(h.coeffs):
        acc = add(mul(acc, x), c)
    return acc


def evaluate(f, x, check_disc=True):
    """f(x), exact for exact x; x must lie strictly inside the bijection disc unless check_disc is off"""
    x = lift(x)
    if check_disc and not is_zero(x):
        disc = maximal_bijection_disc(f)
        if not disc.contains(val(x)):
            raise OutsideDisc(f"val(x) = {val(x)} is not inside the disc of exponent {disc.exponent}")
    return evaluate_series(as_series(f), x)


def compose(f, g, order=INFINITY):
    """Coefficients of f∘g through x-degree ``order``"""
    f, g = as_series(f), as_series(g)
    if g.coeffs and not is_zero(g.coeffs[0]):
        raise ValueError("inner series must vanish at 0")
    order = min(order, f.order, g.order)
    result = power_series([], order)
    g_power = power_series([ONE], order)
    for i, c in enumerate(f.coeffs):
        if i > order:
            break
        # g_power is g^i through degree order
        if i > 0:
            g_power = series_mul(g_power, g, order)
        if not is_zero(c):
            result = series_add(result, series_scale(g_power, c))
    return power_series(list(result.coeffs), order)


def iterate(f, n, order=INFINITY):
    """n-fold self-composition of f"""
    if n < 1:
        raise ValueError(f"iteration count must be >= 1, got {n}")
    base = as_series(f)
    result = power_series(list(base.coeffs), order)
    for _ in range(n - 1):
        result = compose(base, result, order)
    return result


class Boundary(Enum):
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class DiscRadius:
    exponent: object
    boundary: Boundary = Boundary.OPEN

    @property
    def is_whole_field(self):
        return self.exponent == -INFINITY

    @property
    def is_rational(self):
        """Whether the radius is an absolute value of K (integer exponent)"""
        return not self.is_whole_field and Fraction(self.exponent).denominator == 1

    def contains(self, v):
        """Whether a point of valuation v lies in the disc"""
        if self.is_whole_field:
            return True
        if self.boundary is Boundary.OPEN:
            return v > self.exponent
        return v >= self.exponent

    def radius(self, epsilon):
        if self.is_whole_field:
            return float("inf")
        return float(epsilon) ** float(self.exponent)


WHOLE_FIELD = DiscRadius(-INFINITY, Boundary.OPEN)


@dataclass(frozen=True)
class WeierstrassData:
    s_exponent: object
    d: int
    d_prime: int


class SupremumKind(Enum):
    """How sup |aᵢ|^(1/(i-1)) behaves; finitely supported maps are always ATTAINED"""
    ATTAINED = "attained"
    DIVERGES_ON_SPHERE = "diverges_on_sphere"
    NOT_ATTAINED = "not_attained"


def growth_exponent(f):
    """w = min val(aᵢ)/(i−1), so a = eps^w; INFINITY for a linear map"""
    if f.is_linear:
        return INFINITY, True
    w = min(Fraction(val(c), degree - 1) for degree, c in f.higher)
    return w, True


def supremum_kind(f):
    return SupremumKind.ATTAINED


def radius_of_convergence(f):
    """A finitely supported series converges on all of K"""
    return WHOLE_FIELD


def bijection_disc(w, kind):
    if w == INFINITY:
        return WHOLE_FIELD
    if kind is SupremumKind.NOT_ATTAINED:
        return DiscRadius(-w, Boundary.CLOSED)
    return DiscRadius(-w, Boundary.OPEN)


def maximal_bijection_disc(f):
    """Largest disc M about 0 on which f is a bijective isometry"""
    w, _ = growth_exponent(f)
    return bijection_disc(w, supremum_kind(f))


def weierstrass_data(h, q):
    """(s, d, d') of h on the disc of radius exponent q"""
    h = as_series(h)
    if h.order != INFINITY:
        raise InexactInput("weierstrass_data needs a finitely supported series")
    values = [(val(c) + i * Fraction(q), i) for i, c in h.terms()]
    if not values:
        raise EmptyMap("series is identically zero")
    s = min(v for v, _ in values)
    attaining = [i for v, i in values if v == s]
    return WeierstrassData(s, max(attaining), min(attaining))


def _linear_term_valuation(h):
    c1 = h.coefficient(1)
    if is_zero(c1):
        raise DegenerateInput("linear coefficient vanishes")
    return val(c1)


def injectivity_check(h, q):
    """|cᵢ|rⁱ <= |c₁|r for all stored i >= 2, with r = eps^q"""
    h = as_series(h)
    q = Fraction(q)
    target = _linear_term_valuation(h) + q
    return all(val_bound(c) + i * q >= target for i, c in h.terms() if i >= 2)


def closed_disc_degree(h, q):
    """Degree of h on the closed disc of exponent q, when h is one-to-one on the open one"""
    h = as_series(h)
    if not injectivity_check(h, q):
        return None
    q = Fraction(q)
    target = _linear_term_valuation(h) + q
    return max(i for i, c in h.terms() if i >= 1 and c.coeffs and val(c) + i * q == target)


def boundary_collision(f):
    """Roots of f(x)/x on the sphere of exponent −w, as (valuation, count)"""
    if f.is_linear:
        return None
    w, _ = growth_exponent(f)
    polygon = newton.build_polygon(divide_by_x(as_series(f)).terms())
    for valuation, multiplicity in newton.root_valuations(polygon):
        if valuation == -w:
            return valuation, multiplicity
    return None
