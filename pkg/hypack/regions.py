"""
Exact algebra of rectilinear regions.

A RectRegion is a finite union of closed axis-aligned rectangles with rational
corners. Set operations work at area level: boundaries are measure zero, so a
difference keeps the boundary of the minuend and results are closures of
their interiors.

All operations go through one vertical sweep. The x-breakpoints of the inputs
cut the plane into elementary slabs; inside a slab each region is a sorted
list of disjoint y-intervals, and boolean operations act on those lists.
Adjacent slabs with identical interval lists are merged, which gives every
region a canonical normal form (maximal vertical slabs).
"""

import logging
import operator

from fractions import Fraction
from itertools import chain

from hypack.errors import DomainError, ModeMismatchError, UnsupportedPlacementError
from hypack.geometry import rect_hyp_area
from hypack.rational import fraction_str, to_fraction
from hypack.serialise import Serialiser


LOG = logging.getLogger(__name__)

MODES = ("hyperbolic", "euclidean")


def _merge_intervals(intervals):
    """Merge overlapping or touching closed intervals."""
    merged = []
    for c, d in sorted(intervals):
        if merged and c <= merged[-1][1]:
            if d > merged[-1][1]:
                merged[-1] = (merged[-1][0], d)
        else:
            merged.append((c, d))
    return merged


def _interval_op(left, right, op):
    """Combine two merged interval lists with a boolean operator."""
    ys = sorted(set(chain.from_iterable(left)) | set(chain.from_iterable(right)))
    result = []
    i = j = 0
    for y0, y1 in zip(ys, ys[1:]):
        while i < len(left) and left[i][1] <= y0:
            i += 1
        while j < len(right) and right[j][1] <= y0:
            j += 1
        in_left = i < len(left) and left[i][0] <= y0
        in_right = j < len(right) and right[j][0] <= y0
        if op(in_left, in_right):
            if result and result[-1][1] == y0:
                result[-1] = (result[-1][0], y1)
            else:
                result.append((y0, y1))
    return result


def _slab_intervals(rects, xs):
    """Merged y-intervals of a rectangle list on each elementary slab of xs.

    xs must contain every x-endpoint of rects.
    """
    pending = sorted(rects, key=operator.itemgetter(0))
    active = []
    index = 0
    slabs = []
    for x0 in xs[:-1]:
        while index < len(pending) and pending[index][0] <= x0:
            active.append(pending[index])
            index += 1
        active = [r for r in active if r[1] > x0]
        slabs.append(_merge_intervals((r[2], r[3]) for r in active))
    return slabs


def _assemble(xs, slabs):
    """Turn per-slab interval lists into maximal rectangles."""
    rects = []
    start, current = None, None
    for x0, x1, intervals in zip(xs, xs[1:], slabs):
        if intervals == current:
            continue
        if current:
            rects.extend((start, x0, c, d) for c, d in current)
        start, current = x0, intervals
    if current:
        rects.extend((start, xs[-1], c, d) for c, d in current)
    return rects


def _breakpoints(*rect_lists):
    return sorted({x for rects in rect_lists for r in rects for x in (r[0], r[1])})


def _proper(rects):
    return [r for r in rects if r[0] < r[1] and r[2] < r[3]]


def _open_overlap(r, s):
    return max(r[0], s[0]) < min(r[1], s[1]) and max(r[2], s[2]) < min(r[3], s[3])


class RectRegion(Serialiser):
    """Finite union of closed axis-aligned rectangles with rational corners.

    Attributes:
        rects (tuple): Rectangles as (a, b, c, d) = [a, b] x [c, d], Fractions.
        mode (str): 'hyperbolic' (upper half-plane, y > 0) or 'euclidean'.
    """

    def __init__(self, rects=(), mode="hyperbolic", normalized=False):
        if mode not in MODES:
            raise ValueError(f"Expected mode 'hyperbolic' or 'euclidean', got {mode!r}")
        converted = []
        for rect in rects:
            a, b, c, d = (to_fraction(v) for v in rect)
            if a > b or c > d:
                raise DomainError(f"Malformed rectangle [{a}, {b}] x [{c}, {d}]")
            if mode == "hyperbolic" and c <= 0:
                raise DomainError(f"Hyperbolic rectangle touches y = 0: [{a}, {b}] x [{c}, {d}]")
            converted.append((a, b, c, d))
        self.rects = tuple(converted)
        self.mode = mode
        self._normalized = normalized

    @classmethod
    def rectangle(cls, a, b, c, d, mode="hyperbolic"):
        return cls([(a, b, c, d)], mode=mode)

    @classmethod
    def empty(cls, mode="hyperbolic"):
        return cls((), mode=mode, normalized=True)

    def __repr__(self):
        rects = ", ".join(
            "[{}, {}]x[{}, {}]".format(*(fraction_str(v) for v in r)) for r in self.rects
        )
        return f"RectRegion({self.mode}: {rects})"

    def __len__(self):
        return len(self.rects)

    def __iter__(self):
        return iter(self.rects)

    def __eq__(self, other):
        if not isinstance(other, RectRegion):
            return NotImplemented
        return self.mode == other.mode and normalize(self).rects == normalize(other).rects

    def __hash__(self):
        return hash((self.mode, normalize(self).rects))

    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def __sub__(self, other):
        return difference(self, other)

    @property
    def is_normalized(self):
        return self._normalized

    def is_empty(self):
        return not _proper(self.rects)

    def bounds(self):
        """Bounding box (xmin, xmax, ymin, ymax), or None when empty."""
        rects = _proper(self.rects)
        if not rects:
            return None
        return (
            min(r[0] for r in rects),
            max(r[1] for r in rects),
            min(r[2] for r in rects),
            max(r[3] for r in rects),
        )

    def area(self):
        return area(self)

    def normalize(self):
        return normalize(self)

    def transform(self, placement):
        return transform(self, placement)

    def contains_point(self, x, y):
        """Closed-set membership, exact for rational coordinates."""
        x, y = to_fraction(x), to_fraction(y)
        return any(a <= x <= b and c <= y <= d for a, b, c, d in _proper(self.rects))

    def components(self):
        return components(self)

    def is_connected(self):
        return len(components(self)) == 1

    def to_dict(self):
        return {
            "mode": self.mode,
            "rects": [[fraction_str(v) for v in rect] for rect in self.rects],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            [tuple(Fraction(v) for v in rect) for rect in d["rects"]],
            mode=d.get("mode", "hyperbolic"),
        )


def _check_modes(x, y):
    if not isinstance(x, RectRegion) or not isinstance(y, RectRegion):
        raise TypeError("Expected RectRegion objects")
    if x.mode != y.mode:
        raise ModeMismatchError(f"Cannot combine {x.mode} and {y.mode} regions")


def normalize(x):
    """Canonical interior-disjoint form of a region (maximal vertical slabs)."""
    if x.is_normalized:
        return x
    rects = _proper(x.rects)
    xs = _breakpoints(rects)
    if len(xs) < 2:
        return RectRegion.empty(x.mode)
    return RectRegion(_assemble(xs, _slab_intervals(rects, xs)), x.mode, normalized=True)


def _combine(x, y, op):
    _check_modes(x, y)
    left, right = _proper(x.rects), _proper(y.rects)
    xs = _breakpoints(left, right)
    if len(xs) < 2:
        return RectRegion.empty(x.mode)
    slabs = [
        _interval_op(l, r, op)
        for l, r in zip(_slab_intervals(left, xs), _slab_intervals(right, xs))
    ]
    return RectRegion(_assemble(xs, slabs), x.mode, normalized=True)


def union(x, y):
    return _combine(x, y, operator.or_)


def intersect(x, y):
    return _combine(x, y, operator.and_)


def difference(x, y):
    return _combine(x, y, lambda a, b: a and not b)


def union_all(regions, mode="hyperbolic"):
    """Union of many regions in a single sweep."""
    regions = list(regions)
    if not regions:
        return RectRegion.empty(mode)
    mode = regions[0].mode
    for region in regions:
        if region.mode != mode:
            raise ModeMismatchError(f"Cannot combine {mode} and {region.mode} regions")
    return normalize(RectRegion(
        chain.from_iterable(region.rects for region in regions), mode
    ))


def area(x):
    """Exact area: hyperbolic (dx dy / y**2) or Euclidean (dx dy)."""
    normal = normalize(x)
    if normal.mode == "euclidean":
        return sum(((b - a) * (d - c) for a, b, c, d in normal.rects), Fraction(0))
    total = Fraction(0)
    for a, b, c, d in normal.rects:
        if c <= 0:
            raise DomainError("Hyperbolic rectangle touches y = 0")
        total += rect_hyp_area(a, b, c, d)
    return total


def _boxes_overlap(p, q):
    return p[0] < q[1] and q[0] < p[1] and p[2] < q[3] and q[2] < p[3]


def interiors_disjoint(x, y):
    """True iff the open interiors of two regions do not meet (exact)."""
    _check_modes(x, y)
    bx, by = x.bounds(), y.bounds()
    if bx is None or by is None or not _boxes_overlap(bx, by):
        return True
    others = sorted(
        (r for r in _proper(y.rects) if _boxes_overlap(r, bx)),
        key=operator.itemgetter(0),
    )
    for r in _proper(x.rects):
        if not _boxes_overlap(r, by):
            continue
        for s in others:
            if s[0] >= r[1]:
                break
            if _open_overlap(r, s):
                return False
    return True


def contains(outer, inner):
    """True iff inner is contained in outer up to a null set."""
    return difference(inner, outer).is_empty()


def transform(x, placement):
    """Image of a region under a placement.

    Hyperbolic regions accept the affine maps z -> m**a z + t; Euclidean
    regions accept translations.

    Raises:
        UnsupportedPlacementError: if the placement is not an isometry of the
            region's geometry.
    """
    mode = getattr(placement, "mode", None)
    if mode is None or not hasattr(placement, "apply_rect"):
        raise UnsupportedPlacementError(f"Unsupported placement {placement!r}")
    if mode != x.mode:
        raise UnsupportedPlacementError(
            f"A {mode} placement is not an isometry of a {x.mode} region"
        )
    if placement.is_identity():
        return x
    return RectRegion(
        (placement.apply_rect(rect) for rect in x.rects),
        x.mode,
        normalized=x.is_normalized,
    )


def _adjacent(r, s):
    """Rectangles share a boundary segment of positive length, or overlap."""
    x_overlap = min(r[1], s[1]) - max(r[0], s[0])
    y_overlap = min(r[3], s[3]) - max(r[2], s[2])
    if x_overlap > 0 and y_overlap >= 0:
        return True
    return y_overlap > 0 and x_overlap >= 0


def components(x):
    """Edge-connected components of a region, each as a normalized region."""
    rects = normalize(x).rects
    parent = list(range(len(rects)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, r in enumerate(rects):
        for j in range(i + 1, len(rects)):
            s = rects[j]
            if s[0] > r[1]:
                break
            if _adjacent(r, s):
                parent[find(i)] = find(j)

    groups = {}
    for i, rect in enumerate(rects):
        groups.setdefault(find(i), []).append(rect)
    return [
        normalize(RectRegion(group, x.mode))
        for group in sorted(groups.values(), key=lambda g: g[0])
    ]


def _merge_segments(segments, axis):
    """Join touching collinear segments; axis 0 = horizontal, 1 = vertical."""
    lines = {}
    for level, lo, hi in segments:
        lines.setdefault(level, []).append((lo, hi))
    merged = []
    for level in sorted(lines):
        for lo, hi in _merge_intervals(lines[level]):
            if axis == 0:
                merged.append(((lo, level), (hi, level)))
            else:
                merged.append(((level, lo), (level, hi)))
    return merged


def boundary_segments(x):
    """Exact outline of a region as axis-parallel segments ((x0, y0), (x1, y1))."""
    rects = _proper(normalize(x).rects)
    xs = _breakpoints(rects)
    if len(xs) < 2:
        return []
    slabs = _slab_intervals(rects, xs)
    horizontal, vertical = [], []
    for x0, x1, intervals in zip(xs, xs[1:], slabs):
        for c, d in intervals:
            horizontal.append((c, x0, x1))
            horizontal.append((d, x0, x1))
    previous = []
    for x0, intervals in zip(xs, slabs + [[]]):
        for c, d in _interval_op(previous, intervals, operator.xor):
            vertical.append((x0, c, d))
        previous = intervals
    return _merge_segments(horizontal, 0) + _merge_segments(vertical, 1)
