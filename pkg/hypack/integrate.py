"""
Area of (rectilinear region) intersected with a disk, in either measure.

Each rectangle is cut into vertical slabs by the disk. Over a slab the inner
y-integral is closed form (1/lo - 1/hi for dy/y**2, hi - lo for dy), and the
outer x-integral is done with composite Gauss-Legendre in the angle variable
x = cx + rho sin(theta), which removes the square-root endpoint behaviour of
the chord. The theta range is split wherever the chord ends cross a
horizontal rectangle edge, so every piece has a smooth integrand.
"""

import logging
import math

import numpy as np

from hypack.errors import DomainError
from hypack.regions import RectRegion


LOG = logging.getLogger(__name__)

GAUSS_NODES = 16
MAX_PANELS = 4096


def _rect_list(region):
    if isinstance(region, RectRegion):
        return [tuple(float(v) for v in r) for r in region.normalize().rects]
    return [tuple(float(v) for v in r) for r in region]


def _disk(ball):
    cx, cy = ball.euclidean_center
    return cx, cy, ball.euclidean_radius


def _closed_form(rect, metric):
    a, b, c, d = rect
    if metric == "hyperbolic":
        return (b - a) * (1.0 / c - 1.0 / d)
    return (b - a) * (d - c)


def _inside_disk(rect, cx, cy, rho):
    a, b, c, d = rect
    return all(
        math.hypot(x - cx, y - cy) <= rho
        for x in (a, b)
        for y in (c, d)
    )


def _integrand(theta, rect, cx, cy, rho, metric):
    a, b, c, d = rect
    half = rho * np.cos(theta)
    lo = np.maximum(c, cy - half)
    hi = np.minimum(d, cy + half)
    valid = hi > lo
    if metric == "hyperbolic":
        inner = np.where(valid, 1.0 / lo - 1.0 / hi, 0.0)
    else:
        inner = np.where(valid, hi - lo, 0.0)
    return inner * half


def _gauss(f, lo, hi, panels, nodes, weights):
    edges = np.linspace(lo, hi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    theta = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    values = f(theta).reshape(panels, -1)
    return float(np.sum(values * weights[None, :] * half[:, None]))


def _adaptive(f, lo, hi, tol):
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_NODES)
    panels = 1
    previous = _gauss(f, lo, hi, panels, nodes, weights)
    while panels < MAX_PANELS:
        panels *= 2
        current = _gauss(f, lo, hi, panels, nodes, weights)
        if abs(current - previous) <= tol * max(1.0, abs(current)):
            return current
        previous = current
    LOG.warning("Quadrature did not reach tolerance %g on [%g, %g]", tol, lo, hi)
    return previous


def _theta_breaks(rect, cx, cy, rho):
    a, b, c, d = rect
    t0 = math.asin(max(-1.0, min(1.0, (max(a, cx - rho) - cx) / rho)))
    t1 = math.asin(max(-1.0, min(1.0, (min(b, cx + rho) - cx) / rho)))
    breaks = {t0, t1}
    for level in (c, d):
        for u in ((cy - level) / rho, (level - cy) / rho):
            if 0.0 <= u <= 1.0:
                angle = math.acos(u)
                for theta in (-angle, angle):
                    if t0 < theta < t1:
                        breaks.add(theta)
    return sorted(breaks)


def rect_ball_area(rect, ball, tol=1e-9):
    """Measure of one rectangle intersected with the ball's Euclidean disk."""
    metric = ball.metric
    cx, cy, rho = _disk(ball)
    a, b, c, d = rect
    if metric == "hyperbolic" and c <= 0:
        raise DomainError("Hyperbolic rectangle touches y = 0")
    if rho == 0 or b <= cx - rho or a >= cx + rho or d <= cy - rho or c >= cy + rho:
        return 0.0
    if _inside_disk(rect, cx, cy, rho):
        return _closed_form(rect, metric)

    def f(theta):
        return _integrand(theta, rect, cx, cy, rho, metric)

    breaks = _theta_breaks(rect, cx, cy, rho)
    return sum(
        _adaptive(f, lo, hi, tol) for lo, hi in zip(breaks, breaks[1:]) if hi > lo
    )


def region_ball_area(region, ball, tol=1e-9):
    """Measure of region intersected with a ball (HBall or EuclideanDisk).

    Arguments:
        region (RectRegion, list): Region, or interior-disjoint (a, b, c, d) tuples.
        ball: Object with metric, euclidean_center and euclidean_radius.
        tol (float): Relative tolerance of each quadrature piece.
    Returns:
        float: Hyperbolic area for HBall, Euclidean area for EuclideanDisk.
    """
    rects = _rect_list(region)
    xmin, xmax, ymin, ymax = ball.bounds()
    total = 0.0
    for rect in rects:
        if rect[1] <= xmin or rect[0] >= xmax or rect[3] <= ymin or rect[2] >= ymax:
            continue
        total += rect_ball_area(rect, ball, tol)
    return total


def monte_carlo_area(region, ball, samples=200000, seed=0):
    """Monte Carlo estimate of region_ball_area with its standard error.

    Points are uniform in the disk's bounding box and weighted by y**-2 in
    hyperbolic mode.

    Returns:
        tuple: (estimate, standard error)
    """
    rects = _rect_list(region)
    xmin, xmax, ymin, ymax = ball.bounds()
    cx, cy, rho = _disk(ball)
    rng = np.random.default_rng(seed)
    xs = rng.uniform(xmin, xmax, samples)
    ys = rng.uniform(ymin, ymax, samples)
    hit = np.hypot(xs - cx, ys - cy) <= rho
    inside = np.zeros(samples, dtype=bool)
    for a, b, c, d in rects:
        if b <= xmin or a >= xmax or d <= ymin or c >= ymax:
            continue
        inside |= (xs >= a) & (xs <= b) & (ys >= c) & (ys <= d)
    weights = 1.0 / ys ** 2 if ball.metric == "hyperbolic" else np.ones(samples)
    values = np.where(hit & inside, weights, 0.0) * (xmax - xmin) * (ymax - ymin)
    estimate = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(samples))
    LOG.debug("Monte Carlo area %g +/- %g (%d samples)", estimate, stderr, samples)
    return estimate, stderr
