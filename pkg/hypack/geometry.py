"""
Upper half-plane primitives: points, distance, balls and hyperbolic measure.

Points are (x, y) with y > 0, the area element is dx dy / y**2 and the
maps z -> lam*z + t (lam > 0, t real) are isometries.
"""

import logging
import math

from fractions import Fraction

from hypack.errors import DomainError
from hypack.rational import is_exact, to_fraction


LOG = logging.getLogger(__name__)


class HPoint:
    """A point of the upper half-plane.

    Attributes:
        x (float, Fraction): Horizontal coordinate.
        y (float, Fraction): Vertical coordinate, strictly positive.
    """

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        if not y > 0:
            raise DomainError(f"Half-plane points need y > 0, got y={y}")
        self.x = x
        self.y = y

    def __repr__(self):
        return f"HPoint({self.x}, {self.y})"

    def __eq__(self, other):
        if not isinstance(other, HPoint):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __iter__(self):
        yield self.x
        yield self.y

    def apply(self, placement):
        """Image of this point under an affine placement."""
        return HPoint(*placement.apply_point(self.x, self.y))

    def exact(self):
        return HPoint(to_fraction(self.x), to_fraction(self.y))

    @classmethod
    def parse(cls, text):
        """Parse "x,y" (components may be "p/q")."""
        x, y = text.split(",")
        return cls(Fraction(x), Fraction(y))


ORIGIN = HPoint(0, 1)


def hyp_distance(p, q):
    """Hyperbolic distance between two half-plane points.

    acosh(1 + ((px - qx)**2 + (py - qy)**2) / (2 py qy))
    """
    for point in (p, q):
        if not point.y > 0:
            raise DomainError(f"Half-plane points need y > 0, got {point!r}")
    dx = float(p.x) - float(q.x)
    dy = float(p.y) - float(q.y)
    argument = 1.0 + (dx * dx + dy * dy) / (2.0 * float(p.y) * float(q.y))
    return math.acosh(max(argument, 1.0))


def rect_hyp_area(a, b, c, d):
    """Hyperbolic area of the rectangle [a, b] x [c, d].

    The double integral of y**-2 is (b - a)(1/c - 1/d). The result is an exact
    Fraction when all four bounds are exact, a float otherwise.

    Raises:
        DomainError: if c <= 0 or the rectangle is degenerate.
    """
    if not c > 0:
        raise DomainError(f"Rectangle touches or crosses y = 0 (c={c})")
    if not (a < b and c < d):
        raise DomainError(f"Degenerate rectangle [{a}, {b}] x [{c}, {d}]")
    if all(is_exact(v) for v in (a, b, c, d)):
        a, b, c, d = (Fraction(v) for v in (a, b, c, d))
        return (b - a) * (d - c) / (c * d)
    return (float(b) - float(a)) * (1.0 / float(c) - 1.0 / float(d))


def ball_area(r):
    """Hyperbolic area of a ball of radius r: 2 pi (cosh r - 1)."""
    if r < 0:
        raise DomainError(f"Negative radius {r}")
    return 2.0 * math.pi * (math.cosh(r) - 1.0)


class HBall:
    """Closed hyperbolic ball with its Euclidean realisation.

    A hyperbolic ball of radius r about (x, y) is the Euclidean disk centred
    at (x, y cosh r) with radius y sinh r.
    """

    metric = "hyperbolic"

    def __init__(self, center, radius):
        if radius < 0:
            raise DomainError(f"Negative radius {radius}")
        self.center = center
        self.hyperbolic_radius = float(radius)

    def __repr__(self):
        return f"HBall({self.center!r}, {self.hyperbolic_radius})"

    @property
    def euclidean_center(self):
        return (
            float(self.center.x),
            float(self.center.y) * math.cosh(self.hyperbolic_radius),
        )

    @property
    def euclidean_radius(self):
        return float(self.center.y) * math.sinh(self.hyperbolic_radius)

    @property
    def area(self):
        return ball_area(self.hyperbolic_radius)

    def contains(self, point, tol=1e-12):
        """Euclidean disk test; agrees with hyp_distance <= r up to tol."""
        cx, cy = self.euclidean_center
        rho = self.euclidean_radius
        dx, dy = float(point.x) - cx, float(point.y) - cy
        return math.hypot(dx, dy) <= rho + tol * max(1.0, rho)

    def bounds(self):
        cx, cy = self.euclidean_center
        rho = self.euclidean_radius
        return cx - rho, cx + rho, cy - rho, cy + rho


class EuclideanDisk:
    """Closed Euclidean disk, the Euclidean-mode counterpart of HBall."""

    metric = "euclidean"

    def __init__(self, center, radius):
        if radius < 0:
            raise DomainError(f"Negative radius {radius}")
        self.center = center
        self.radius = float(radius)

    def __repr__(self):
        return f"EuclideanDisk({self.center}, {self.radius})"

    @property
    def euclidean_center(self):
        return float(self.center[0]), float(self.center[1])

    @property
    def euclidean_radius(self):
        return self.radius

    @property
    def area(self):
        return math.pi * self.radius ** 2

    def contains(self, point, tol=1e-12):
        cx, cy = self.euclidean_center
        x, y = point
        return math.hypot(float(x) - cx, float(y) - cy) <= self.radius + tol * max(1.0, self.radius)

    def bounds(self):
        cx, cy = self.euclidean_center
        return cx - self.radius, cx + self.radius, cy - self.radius, cy + self.radius


def hyp_ball(center, r):
    return HBall(center, r)


def euclidean_disk(center, r):
    return EuclideanDisk(tuple(center), r)
