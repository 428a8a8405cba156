"""
Packings as data: the tiling patch generator, exact packing and covering
checks, and the distances d_n and d_K between packing windows.
"""

import logging
import math

from fractions import Fraction
from typing import NamedTuple

from hypack.errors import (
    ConfigurationError,
    ConstructionError,
    ModeMismatchError,
    OutOfWindowError,
    TruncationError,
)
from hypack.geometry import ORIGIN
from hypack.models import GroupNorm, PackingWindow, Placement
from hypack.regions import difference, interiors_disjoint
from hypack.serialise import jsonable


LOG = logging.getLogger(__name__)


class PackingCheck(NamedTuple):
    ok: bool
    violation: tuple = None

    def to_dict(self):
        return {"ok": self.ok, "violation": jsonable(self.violation)}


class Coverage(NamedTuple):
    ok: bool
    uncovered: object = None

    def to_dict(self):
        return {"ok": self.ok, "uncovered": jsonable(self.uncovered)}


class MetricEstimate(NamedTuple):
    """d_K value; exact when error is 0, otherwise within error above value."""

    value: float
    error: float
    n_star: int

    def to_dict(self):
        return jsonable(self._asdict())


def compose(g, h):
    """g o h. Raises ModeMismatchError for placements of different groups."""
    return g.compose(h)


def invert(g):
    return g.inverse()


def tiling_placement(i, j, m):
    """s**i o tau**j: z -> m**i z + m**(i + 1) j."""
    return Placement(i, j * Fraction(m) ** (i + 1), m)


def _closest_missing(lo, hi):
    """Integers outside [lo, hi] closest to zero."""
    if not lo <= 0 <= hi:
        return [0]
    return [lo - 1, hi + 1]


def patch_radius(m, i_range, j_range, norm=None):
    """Norm radius below which every tiling placement is in the patch."""
    norm = norm or GroupNorm()
    missing = [tiling_placement(i, 0, m) for i in _closest_missing(*i_range)]
    for i in range(i_range[0], i_range[1] + 1):
        missing.extend(tiling_placement(i, j, m) for j in _closest_missing(*j_range))
    return min(norm.rho(g) for g in missing)


def generate_tiling_patch(body, i_range, j_range, norm=None, check=True):
    """Copies s**i tau**j K for i in i_range, j in j_range (inclusive).

    Raises:
        ConstructionError: if two copies overlap, carrying the pair.
    """
    if body.mode != "hyperbolic" or body.m is None:
        raise ConfigurationError("Tiling patches need a constructed hyperbolic body")
    if i_range[0] > i_range[1] or j_range[0] > j_range[1]:
        raise ConfigurationError(f"Empty index range {i_range} x {j_range}")
    placements = [
        tiling_placement(i, j, body.m)
        for i in range(i_range[0], i_range[1] + 1)
        for j in range(j_range[0], j_range[1] + 1)
    ]
    radius = patch_radius(body.m, i_range, j_range, norm)
    window = PackingWindow(body, placements, radius=radius)
    LOG.info(
        "Tiling patch i=%s, j=%s: %d copies, complete to radius %.4f",
        i_range, j_range, len(placements), radius,
    )
    if check:
        result = is_packing(window)
        if not result.ok:
            raise ConstructionError(
                f"Copies {result.violation[0]!r} and {result.violation[1]!r} overlap",
                pair=result.violation,
            )
    return window


def is_packing(w):
    """Exact pairwise interior-disjointness, with bounding-box pruning.

    Returns:
        PackingCheck: ok, and the first overlapping pair in placement order.
    """
    copies = w.copies()
    boxes = [copy.bounds() for copy in copies]
    for i, box in enumerate(boxes):
        if box is None:
            continue
        for j in range(i + 1, len(copies)):
            other = boxes[j]
            if other is None:
                continue
            if not (box[0] < other[1] and other[0] < box[1] and box[2] < other[3] and other[2] < box[3]):
                continue
            if not interiors_disjoint(copies[i], copies[j]):
                return PackingCheck(False, (w.placements[i], w.placements[j]))
    return PackingCheck(True)


def covers(w, target):
    """Whether the placed copies cover target; the uncovered part otherwise."""
    uncovered = difference(target, w.region())
    if uncovered.is_empty():
        return Coverage(True)
    return Coverage(False, uncovered)


def origin_in_bodies(w, p=ORIGIN):
    """Whether p lies in the closed union of copies.

    Raises:
        OutOfWindowError: if p lies outside a nonempty window.
    """
    if not w.placements:
        return False
    if not w.window.contains_point(p.x, p.y):
        raise OutOfWindowError(f"{p!r} lies outside the packing window")
    return any(copy.contains_point(p.x, p.y) for copy in w.copies())


def _check_pair(w1, w2):
    if w1.mode != w2.mode:
        raise ModeMismatchError(f"Cannot compare {w1.mode} and {w2.mode} windows")
    if w1.body != w2.body:
        raise ConfigurationError("Windows place different bodies")


def _one_sided(ball, others, norm):
    if not ball:
        return 0.0
    if not others:
        return math.inf
    return max(min(norm.distance(g, h) for h in others) for g in ball)


def metric_dn(w1, w2, n, norm=None):
    """d_n: smallest eps such that each side's copies within norm radius n lie
    within eps of the other side's copies.

    Raises:
        TruncationError: if a window is not known out to radius n + 1.
    """
    norm = norm or GroupNorm()
    _check_pair(w1, w2)
    if n <= 0:
        raise ValueError(f"n must be a positive integer, got {n}")
    for w in (w1, w2):
        if w.radius is not None and w.radius < n + 1:
            raise TruncationError(
                f"Window known to radius {w.radius:.4f}, need {n + 1}", required=n + 1
            )
    ball1 = [g for g in w1.placements if norm.rho(g) <= n]
    ball2 = [g for g in w2.placements if norm.rho(g) <= n]
    return max(
        _one_sided(ball1, w2.placements, norm),
        _one_sided(ball2, w1.placements, norm),
    )


def metric_dK(w1, w2, norm=None, n_max=10):
    """sup over n = 1..n_max of min(d_n / n, 1 / n).

    Terms beyond n_max are at most 1/(n_max + 1), so the value is exact when it
    reaches 1/n_max and carries error 1/n_max otherwise.
    """
    norm = norm or GroupNorm()
    value, n_star = 0.0, 1
    for n in range(1, n_max + 1):
        if 1.0 / n <= value:
            break
        term = min(metric_dn(w1, w2, n, norm) / n, 1.0 / n)
        if term > value:
            value, n_star = term, n
    error = 0.0 if value >= 1.0 / n_max else 1.0 / n_max
    return MetricEstimate(value, error, n_star)

