"""Exact arithmetic in K = Q((T)).

An element is stored as a block of rational coefficients starting at
``offset`` (the exponent of the first stored term) together with the
absolute precision it is known to: the value is known modulo T^precision.
Laurent polynomials are exact and carry ``precision = INFINITY``.

Valuations are integers, ``Fraction`` for Newton-polygon slopes, or
``INFINITY`` (``math.inf``), which compares above every finite value and
absorbs addition. The absolute value |x| = eps^val(x) is never evaluated;
larger valuation means smaller absolute value.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from errors import DivisionByZero, NotIntegral, PrecisionIndeterminate

logger = logging.getLogger(__name__)

INFINITY = math.inf


@dataclass(frozen=True)
class LaurentSeries:
    offset: int
    coeffs: tuple
    precision: object = INFINITY

    @property
    def is_exact(self):
        return self.precision == INFINITY

    @property
    def end(self):
        """Exponent one past the last stored term"""
        return self.offset + len(self.coeffs)

    def __add__(self, other):
        return add(self, lift(other))

    __radd__ = __add__

    def __neg__(self):
        return neg(self)

    def __sub__(self, other):
        return add(self, neg(lift(other)))

    def __rsub__(self, other):
        return add(lift(other), neg(self))

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, n):
        return power(self, n)

    def __str__(self):
        return format_series(self)


def _make(offset, coeffs, precision):
    """Normalize: drop terms at or past the precision, strip zero ends"""
    if precision != INFINITY:
        precision = int(precision)
        coeffs = coeffs[:max(0, precision - offset)]
    start, stop = 0, len(coeffs)
    while start < stop and coeffs[start] == 0:
        start += 1
    while stop > start and coeffs[stop - 1] == 0:
        stop -= 1
    if start == stop:
        return LaurentSeries(0 if precision == INFINITY else precision, (), precision)
    return LaurentSeries(offset + start, tuple(coeffs[start:stop]), precision)


def series(coeffs, offset=0, precision=INFINITY):
    """Build an element from coefficients of T^offset, T^(offset+1), ..."""
    return _make(offset, [Fraction(c) for c in coeffs], precision)


def from_terms(terms, precision=INFINITY):
    """Build an element from a mapping exponent -> coefficient"""
    terms = {k: Fraction(c) for k, c in terms.items() if c != 0}
    if not terms:
        return _make(0, [], precision)
    lo, hi = min(terms), max(terms)
    return _make(lo, [terms.get(k, Fraction(0)) for k in range(lo, hi + 1)], precision)


def constant(c):
    return _make(0, [Fraction(c)], INFINITY)


def monomial(c, k):
    return _make(k, [Fraction(c)], INFINITY)


ZERO = _make(0, [], INFINITY)
ONE = constant(1)
T = monomial(1, 1)


def lift(value):
    if isinstance(value, LaurentSeries):
        return value
    return constant(value)


def val(x):
    """Valuation: exponent of the lowest nonzero term, INFINITY for exact zero"""
    if x.coeffs:
        return x.offset
    if x.is_exact:
        return INFINITY
    raise PrecisionIndeterminate(f"value is zero modulo T^{x.precision}, valuation unknown")


def val_bound(x):
    """Certified lower bound for val(x): the valuation, or the precision of a vanishing value"""
    if x.coeffs:
        return x.offset
    return x.precision


def is_zero(x):
    """True only for the exact zero"""
    return not x.coeffs and x.is_exact


def vanishes(x):
    """True when x is zero through its tracked precision"""
    return not x.coeffs


def coefficient(x, k):
    """Coefficient of T^k"""
    if k >= x.precision:
        raise PrecisionIndeterminate(f"coefficient of T^{k} is beyond precision {x.precision}")
    if x.offset <= k < x.end:
        return x.coeffs[k - x.offset]
    return Fraction(0)


def truncate(x, precision):
    return _make(x.offset, list(x.coeffs), min(x.precision, precision))


def neg(x):
    return LaurentSeries(x.offset, tuple(-c for c in x.coeffs), x.precision)


def scale(x, c):
    c = Fraction(c)
    if c == 0:
        return ZERO
    return LaurentSeries(x.offset, tuple(c * a for a in x.coeffs), x.precision)


def add(x, y):
    """Sum; known to the smaller of the two precisions"""
    precision = min(x.precision, y.precision)
    if not x.coeffs:
        return truncate(y, precision)
    if not y.coeffs:
        return truncate(x, precision)
    lo = min(x.offset, y.offset)
    hi = max(x.end, y.end)
    if precision != INFINITY:
        hi = min(hi, precision)
    if hi <= lo:
        return _make(lo, [], precision)
    out = [Fraction(0)] * (hi - lo)
    for source in (x, y):
        shift = source.offset - lo
        for j, c in enumerate(source.coeffs):
            if shift + j >= len(out):
                break
            out[shift + j] += c
    return _make(lo, out, precision)


def sub(x, y):
    return add(x, neg(y))


def mul(x, y):
    """Cauchy product; precision min(prec(x) + val(y), prec(y) + val(x))"""
    precision = min(x.precision + val_bound(y), y.precision + val_bound(x))
    if not x.coeffs or not y.coeffs:
        return _make(0, [], precision)
    lo = x.offset + y.offset
    # stored terms stop at the product precision
    limit = len(x.coeffs) + len(y.coeffs) - 1
    if precision != INFINITY:
        limit = min(limit, precision - lo)
    if limit <= 0:
        return _make(lo, [], precision)
    out = [Fraction(0)] * limit
    ycoeffs = y.coeffs
    for i, a in enumerate(x.coeffs):
        if i >= limit:
            break
        if a == 0:
            continue
        for j in range(min(len(ycoeffs), limit - i)):
            out[i + j] += a * ycoeffs[j]
    return _make(lo, out, precision)


def power(x, n):
    if n < 0:
        raise ValueError("negative powers need inv with an explicit precision")
    result = ONE
    base = x
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def inv(x, target_precision):
    """Inverse known to target_precision terms past its leading term.

    A monomial has an exact inverse; an inexact input also limits the
    result to its own relative precision.
    """
    if not x.coeffs:
        if x.is_exact:
            raise DivisionByZero("inverse of zero")
        raise PrecisionIndeterminate(f"cannot invert a value that is zero modulo T^{x.precision}")
    v = x.offset
    unit = x.coeffs
    if x.is_exact and len(unit) == 1:
        return monomial(1 / Fraction(unit[0]), -v)
    relative = target_precision if x.is_exact else min(target_precision, x.precision - v)
    if relative < 1:
        raise ValueError(f"target precision must be positive, got {target_precision}")
    lead = Fraction(unit[0])
    out = [1 / lead]
    for k in range(1, relative):
        s = Fraction(0)
        for j in range(1, min(k, len(unit) - 1) + 1):
            s += unit[j] * out[k - j]
        out.append(-s / lead)
    return _make(-v, out, -v + relative)


def div(x, y, target_precision):
    return mul(x, inv(y, target_precision))


def residue(x):
    """Reduction of an integral element to the residue field Q"""
    if x.coeffs:
        if x.offset < 0:
            raise NotIntegral(f"valuation {x.offset} < 0, no residue")
        return Fraction(x.coeffs[0]) if x.offset == 0 else Fraction(0)
    if x.precision <= 0:
        raise PrecisionIndeterminate("residue is beyond the tracked precision")
    return Fraction(0)


def _integer_root(n, e):
    """Exact integer e-th root of n >= 0, or None"""
    if n < 2:
        return n
    lo, hi = 1, 1 << (n.bit_length() // e + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid ** e
        if p == n:
            return mid
        if p < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def rational_root(c, e):
    """e-th root of a rational in Q, or None when it is not a rational"""
    c = Fraction(c)
    if c < 0 and e % 2 == 0:
        return None
    num = _integer_root(abs(c.numerator), e)
    den = _integer_root(c.denominator, e)
    if num is None or den is None:
        return None
    root = Fraction(num, den)
    return -root if c < 0 else root


def nth_root(x, e, precision):
    """An e-th root of x in Q((T)), or None when K has none.

    The unit part is expanded with the binomial series of (1 + z)^(1/e);
    the result carries ``precision`` terms past its leading term.
    """
    v = val(x)
    if e == 1:
        return x
    if v == INFINITY:
        return ZERO
    if v % e:
        return None
    lead = Fraction(x.coeffs[0])
    r = rational_root(lead, e)
    if r is None:
        return None
    if x.is_exact and len(x.coeffs) == 1:
        return monomial(r, v // e)
    relative = precision if x.is_exact else min(precision, x.precision - v)
    z = _make(0, [Fraction(0)] + [c / lead for c in x.coeffs[1:]], relative)
    exponent = Fraction(1, e)
    total = truncate(ONE, relative)
    term = truncate(ONE, relative)
    binom = Fraction(1)
    for j in range(1, relative):
        binom = binom * (exponent - (j - 1)) / j
        term = mul(term, z)
        if vanishes(term):
            break
        total = add(total, scale(term, binom))
    return mul(monomial(r, v // e), total)


def _format_term(c, k):
    if k == 0:
        return str(c)
    mono = "T" if k == 1 else f"T^{k}"
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{c}*{mono}"


def format_series(x):
    """Canonical text, readable back by cli_io.parse_series when exact"""
    parts = [_format_term(c, x.offset + j) for j, c in enumerate(x.coeffs) if c != 0]
    if not x.is_exact:
        parts.append(f"O(T^{x.precision})" if x.precision != 1 else "O(T)")
    if not parts:
        return "0"
    text = parts[0]
    for part in parts[1:]:
        text += part if part.startswith("-") else "+" + part
    return text


def format_valuation(v):
    """Exact string for a valuation or radius exponent"""
    if v == INFINITY:
        return "inf"
    if v == -INFINITY:
        return "-inf"
    return str(Fraction(v))
