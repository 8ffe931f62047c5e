"""Newton polygons of polynomials over K.

The polygon of Σ cᵢxⁱ is the lower convex hull of the points (i, val(cᵢ)).
A segment of slope −v and horizontal length ℓ accounts for exactly ℓ roots
of valuation v in the algebraic closure, so root valuations come out without
ever constructing the roots.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

from errors import DegenerateInput, InexactInput
from laurent_core import is_zero, val

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Segment:
    slope: Fraction
    length: int


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple
    vertices: tuple
    segments: tuple


def _lower_hull(points):
    """Andrew's monotone chain, lower half; collinear points are dropped"""
    hull = []
    for point in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep hull[-1] only if it turns strictly upward
            if (y2 - y1) * (point[0] - x2) < (point[1] - y2) * (x2 - x1):
                break
            hull.pop()
        hull.append(point)
    return hull


def build_polygon(coeffs):
    """Newton polygon of Σ cᵢxⁱ from (index, coefficient) pairs"""
    points = []
    for index, c in coeffs:
        if not c.is_exact:
            raise InexactInput(f"coefficient of x^{index} is only known modulo T^{c.precision}")
        if is_zero(c):
            continue
        points.append((int(index), val(c)))
    points.sort()
    if len({i for i, _ in points}) != len(points):
        raise DegenerateInput("repeated index in polynomial coefficients")
    if len(points) < 2:
        raise DegenerateInput("a Newton polygon needs at least two nonzero coefficients")
    vertices = _lower_hull(points)
    segments = tuple(
        Segment(Fraction(y2 - y1, x2 - x1), x2 - x1)
        for (x1, y1), (x2, y2) in zip(vertices, vertices[1:])
    )
    logger.debug(f"🔍 Newton polygon vertices {vertices}")
    return NewtonPolygon(tuple(points), tuple(vertices), segments)


def root_valuations(polygon):
    """[(valuation, multiplicity)], one entry per segment, largest valuation first"""
    return [(-segment.slope, segment.length) for segment in polygon.segments]


def root_valuation_multiset(polygon):
    """Root valuations with repetition, sorted ascending"""
    return sorted(v for v, count in root_valuations(polygon) for _ in range(count))
