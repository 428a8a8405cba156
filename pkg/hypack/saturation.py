"""
Fillings, the cell-wise saturating map and local saturation tests.

Every search here is relative to a finite CandidateFamily: a translation grid
(and, in hyperbolic mode, a range of scale exponents) inside a bounding window.
Verdicts carry the family they were decided against.

A copy of the body relates to a region F in one of three ways: it lies inside
F, it crosses the boundary of F (positive area on both sides), or it misses F
up to a null set. Crossing copies form the boundary configuration; fillings
are built from copies inside F.
"""

import logging
import math

from itertools import combinations
from typing import NamedTuple

from fractions import Fraction

from hypack import settings
from hypack.errors import (
    AlignmentError,
    ConfigurationError,
    HypothesisError,
    ModeMismatchError,
)
from hypack.models import PackingWindow, Placement, Translation
from hypack.packing import covers
from hypack.rational import fraction_str, to_fraction
from hypack.regions import RectRegion, contains, interiors_disjoint, union_all
from hypack.serialise import Serialiser, jsonable


LOG = logging.getLogger(__name__)


class CandidateFamily(Serialiser):
    """Finite family of placements whose copies fit inside a bounding window.

    Euclidean grids are anchored at the window's lower-left corner, so the
    family moves with the window under lattice translations. Hyperbolic
    grids are t in step * Z for each scale exponent in scales.

    Attributes:
        mode (str): 'euclidean' or 'hyperbolic'.
        step (Fraction): Grid spacing h.
        window (RectRegion): Copies must lie in its bounding box.
        scales (tuple): Inclusive range of scale exponents (hyperbolic only).
        base (int): Scale base m (hyperbolic only).
    """

    def __init__(self, mode, step, window, scales=(0, 0), base=2):
        step = to_fraction(step)
        if step <= 0:
            raise ConfigurationError(f"Grid step must be positive, got {step}")
        if window.mode != mode:
            raise ModeMismatchError(f"A {window.mode} window cannot bound a {mode} family")
        self.mode = mode
        self.step = step
        self.window = window
        self.scales = tuple(scales)
        self.base = base

    def __repr__(self):
        return (
            f"CandidateFamily({self.mode}, h={fraction_str(self.step)},"
            f" window={self.window.bounds()})"
        )

    @classmethod
    def for_body(cls, body, step, window, scales=(0, 0)):
        return cls(body.mode, step, window, scales=scales, base=body.m or 2)

    def _grid(self, lo, hi, anchor=0):
        """anchor + k * step inside [lo, hi]."""
        k = math.ceil((lo - anchor) / self.step)
        while anchor + k * self.step <= hi:
            yield anchor + k * self.step
            k += 1

    def placements(self, body):
        """All family placements, canonically ordered."""
        if body.mode != self.mode:
            raise ModeMismatchError(f"A {self.mode} family cannot place a {body.mode} body")
        bounds = self.window.bounds()
        if bounds is None or body.region.is_empty():
            return []
        wx0, wx1, wy0, wy1 = bounds
        bx0, bx1, by0, by1 = body.region.bounds()
        if self.mode == "euclidean":
            xs = list(self._grid(wx0 - bx0, wx1 - bx1, anchor=wx0 - bx0))
            ys = list(self._grid(wy0 - by0, wy1 - by1, anchor=wy0 - by0))
            return [Translation(tx, ty) for tx in xs for ty in ys]
        result = []
        for a in range(self.scales[0], self.scales[1] + 1):
            lam = Fraction(self.base) ** a
            if lam * by0 < wy0 or lam * by1 > wy1:
                continue
            result.extend(
                Placement(a, t, self.base)
                for t in self._grid(wx0 - lam * bx0, wx1 - lam * bx1)
            )
        return sorted(result)

    def to_dict(self):
        d = {
            "mode": self.mode,
            "step": fraction_str(self.step),
            "window": self.window.to_dict(),
        }
        if self.mode == "hyperbolic":
            d.update(scales=list(self.scales), m=self.base)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            d["mode"],
            Fraction(d["step"]),
            RectRegion.from_dict(d["window"]),
            scales=tuple(d.get("scales", (0, 0))),
            base=d.get("m", 2),
        )


def relation(copy, region):
    """'inside', 'crossing' or 'outside', up to null sets."""
    if (copy & region).is_empty():
        return "outside"
    if (copy - region).is_empty():
        return "inside"
    return "crossing"


class FillingProblem:
    """Fill region with copies, given the copies already fixed around it.

    Attributes:
        body (Body): Body being placed.
        region (RectRegion): The region F.
        boundary (list): Placements whose copies cross the boundary of F.
        family (CandidateFamily): Placements the filling may use.
        obstacles (list): Further fixed placements (e.g. copies inside F that
            are kept), unchecked.
    """

    def __init__(self, body, region, boundary=None, family=None, obstacles=None):
        if region.mode != body.mode:
            raise ModeMismatchError("Region and body modes differ")
        self.body = body
        self.region = region.normalize()
        self.boundary = list(boundary) if boundary else []
        self.obstacles = list(obstacles) if obstacles else []
        if family is None:
            family = CandidateFamily.for_body(body, settings.GRID_STEP, self.region)
        self.family = family
        for g in self.boundary:
            if relation(body.region.transform(g), self.region) != "crossing":
                raise ConfigurationError(f"Boundary copy {g!r} does not cross the region boundary")

    def fixed(self):
        return self.boundary + self.obstacles

    def fixed_copies(self):
        return [self.body.region.transform(g) for g in self.fixed()]

    def capacity(self):
        """floor((area(F) - area covered by fixed copies) / area(K))."""
        blocked = union_all(self.fixed_copies(), self.body.mode) & self.region
        free = self.region.area() - blocked.area()
        return math.floor(free / self.body.area)


class FillingResult(NamedTuple):
    placements: list
    count: int
    optimal: bool
    nodes: int
    bound: int

    def to_dict(self):
        return jsonable(self._asdict())


def enumerate_candidates(p):
    """Family placements whose copy meets the interior of F.

    Raises:
        ConfigurationError: if the family itself is empty.
    """
    family = p.family.placements(p.body)
    if not family:
        raise ConfigurationError(f"Empty candidate family {p.family!r}")
    seen = set()
    result = []
    for g in family:
        if g in seen:
            continue
        seen.add(g)
        if not (p.body.region.transform(g) & p.region).is_empty():
            result.append(g)
    return sorted(result)


def _boxes_overlap(p, q):
    return p[0] < q[1] and q[0] < p[1] and p[2] < q[3] and q[2] < p[3]


def _conflicts(copies):
    """Bitmask per copy of the copies it overlaps."""
    boxes = [copy.bounds() for copy in copies]
    masks = [0] * len(copies)
    for i in range(len(copies)):
        for j in range(i + 1, len(copies)):
            if _boxes_overlap(boxes[i], boxes[j]) and not interiors_disjoint(copies[i], copies[j]):
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks


def _popcount(mask):
    return bin(mask).count("1")


def _search(conflicts, capacity, budget, target=None):
    """Maximum independent set by include-first depth-first branch and bound.

    Only strictly larger sets replace the incumbent, so the result is the
    lexicographically least maximum set in candidate order.
    """
    best = ()
    nodes = 0
    complete = True
    stack = [((), (1 << len(conflicts)) - 1)]
    while stack:
        chosen, mask = stack.pop()
        nodes += 1
        if nodes > budget:
            complete = False
            break
        if len(chosen) > len(best):
            best = chosen
            if target is not None and len(best) >= target:
                break
        if not mask:
            continue
        bound = len(chosen) + min(_popcount(mask), capacity - len(chosen))
        if bound <= len(best):
            continue
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        stack.append((chosen, rest))
        stack.append((chosen + (i,), rest & ~conflicts[i]))
    return best, nodes, complete


def solve_filling(p, budget=settings.DEFAULT_BUDGET, target=None):
    """Largest set of family copies inside F avoiding the fixed copies.

    Arguments:
        p (FillingProblem): Problem to solve.
        budget (int): Maximum number of search nodes.
        target (int): Stop as soon as a filling of this size is found.
    Returns:
        FillingResult: optimal is False when the budget ran out (or the search
            stopped at target) before the tree was exhausted.
    """
    fixed = p.fixed_copies()
    pool, copies = [], []
    for g in enumerate_candidates(p):
        copy = p.body.region.transform(g)
        if not contains(p.region, copy):
            continue
        if all(interiors_disjoint(copy, other) for other in fixed):
            pool.append(g)
            copies.append(copy)
    capacity = p.capacity()
    if not pool or capacity <= 0:
        return FillingResult([], 0, True, 0, max(capacity, 0))
    best, nodes, complete = _search(_conflicts(copies), capacity, budget, target)
    optimal = complete and (target is None or len(best) < target)
    if not complete:
        LOG.warning("Filling search stopped after %d nodes; best size %d", budget, len(best))
    assert len(best) <= capacity
    return FillingResult([pool[i] for i in best], len(best), optimal, nodes, capacity)


def _aligned(value, j):
    return (value + Fraction(j, 2)) % j == 0


def lattice_cells(window, j):
    """Cells [-j/2 + j k, j/2 + j k] x [-j/2 + j l, j/2 + j l] tiling an aligned window.

    Raises:
        AlignmentError: if the window is not an aligned rectangle.
    """
    normal = window.normalize()
    if len(normal.rects) != 1:
        raise AlignmentError("Window must be a single rectangle of lattice cells")
    x0, x1, y0, y1 = normal.rects[0]
    if not all(_aligned(v, j) for v in (x0, x1, y0, y1)):
        raise AlignmentError(f"Window {normal.rects[0]} is not aligned with cells of side {j}")
    cells = []
    x = x0
    while x < x1:
        y = y0
        while y < y1:
            cells.append(RectRegion.rectangle(x, x + j, y, y + j, mode=window.mode))
            y += j
        x += j
    return cells


def saturate_map_euclid(w, j, step=settings.GRID_STEP, budget=settings.DEFAULT_BUDGET):
    """Saturate each lattice cell of the window while keeping crossing copies.

    Copies crossing a cell boundary are kept. Each cell's interior content is
    replaced by the canonical filling, unless the original content is larger.

    Raises:
        ModeMismatchError: for hyperbolic windows.
        AlignmentError: if the window is not a union of cells.
    """
    if w.mode != "euclidean":
        raise ModeMismatchError("The saturating map works on Euclidean windows")
    j = to_fraction(j)
    cells = lattice_cells(w.window, j)
    copies = w.copies()
    contents = []
    for cell in cells:
        inside, crossing = [], []
        for index, copy in enumerate(copies):
            kind = relation(copy, cell)
            if kind == "inside":
                inside.append(index)
            elif kind == "crossing":
                crossing.append(index)
        contents.append((cell, inside, crossing))

    claimed = set()
    output = []
    for cell, inside, crossing in contents:
        claimed.update(inside)
        problem = FillingProblem(
            w.body,
            cell,
            boundary=[w.placements[i] for i in crossing],
            family=CandidateFamily("euclidean", step, cell),
        )
        result = solve_filling(problem, budget)
        if result.count >= len(inside):
            output.extend(result.placements)
        else:
            LOG.debug("Keeping %d original copies in %s", len(inside), cell.bounds())
            output.extend(w.placements[i] for i in inside)
    untouched = set(range(len(copies))) - claimed
    output.extend(w.placements[i] for i in sorted(untouched))
    LOG.info("Saturated %d cells: %d -> %d copies", len(cells), len(w), len(output))
    return PackingWindow(w.body, sorted(output), window=w.window, kind="packing")


class Verdict(Serialiser):
    """Three-valued outcome of a local saturation or reduction search.

    Attributes:
        status (str): unsaturated, saturated, reducible, irreducible or unknown.
        removed (list): F1, the copies taken out.
        added (list): F2, the copies put in.
    """

    def __init__(self, status, k_max, removed=None, added=None, family=None, nodes=0, trace=None):
        self.status = status
        self.k_max = k_max
        self.removed = removed if removed else []
        self.added = added if added else []
        self.family = family
        self.nodes = nodes
        self.trace = trace if trace else []

    def __repr__(self):
        return f"Verdict({self.status}, F1={self.removed}, F2={self.added})"

    def __bool__(self):
        return self.status in ("unsaturated", "reducible")

    @property
    def known(self):
        return self.status != "unknown"

    def to_dict(self):
        return {
            "schema": settings.SCHEMA,
            "status": self.status,
            "k_max": self.k_max,
            "F1": [g.to_dict() for g in self.removed],
            "F2": [g.to_dict() for g in self.added],
            "family": None if self.family is None else self.family.to_dict(),
            "nodes": self.nodes,
            "trace": jsonable(self.trace),
        }


def default_family(body, region, step=settings.GRID_STEP, scales=(-1, 1), margin=False):
    """Grid family over region's bounding box, enlarged by the body's extent if margin."""
    x0, x1, y0, y1 = region.bounds()
    if margin:
        bx0, bx1, by0, by1 = body.region.bounds()
        width, height = bx1 - bx0, by1 - by0
        x0, x1 = x0 - width, x1 + width
        y0 = y0 - height if body.mode == "euclidean" else y0 / (body.m or 2)
        y1 = y1 + height
    window = RectRegion.rectangle(x0, x1, y0, y1, mode=body.mode)
    return CandidateFamily.for_body(body, step, window, scales=scales if body.mode == "hyperbolic" else (0, 0))


def check_unsaturated(
    w,
    region,
    k_max=settings.DEFAULT_KMAX,
    family=None,
    budget=settings.DEFAULT_BUDGET,
):
    """Look for F1 inside region and F2 (|F2| = |F1| + 1) inside region such
    that (w - F1) | F2 is still a packing.

    Removals run over k = 0..k_max in canonical order; the first witness wins.
    """
    family = family or default_family(w.body, region)
    region = region.normalize()
    inside, crossing = [], []
    for g, copy in zip(w.placements, w.copies()):
        kind = relation(copy, region)
        if kind == "inside":
            inside.append(g)
        elif kind == "crossing":
            crossing.append(g)
    inside.sort()
    nodes, trace, unknown = 0, [], False
    for k in range(0, min(k_max, len(inside)) + 1):
        tried = 0
        for chosen in combinations(range(len(inside)), k):
            removed = [inside[i] for i in chosen]
            kept = [g for i, g in enumerate(inside) if i not in chosen]
            problem = FillingProblem(w.body, region, crossing, family, obstacles=kept)
            if problem.capacity() < k + 1:
                continue
            tried += 1
            result = solve_filling(problem, budget, target=k + 1)
            nodes += result.nodes
            if result.count >= k + 1:
                LOG.info("Unsaturated: remove %d, add %d", k, k + 1)
                trace.append({"k": k, "fillings": tried})
                return Verdict(
                    "unsaturated", k_max, list(removed), result.placements[: k + 1],
                    family, nodes, trace,
                )
            if not result.optimal:
                unknown = True
        trace.append({"k": k, "fillings": tried})
    status = "unknown" if unknown else "saturated"
    return Verdict(status, k_max, family=family, nodes=nodes, trace=trace)


def _cover_search(pool, uncovered, size, budget):
    """First size-subset of pool covering uncovered, in canonical order."""
    nodes = 0
    for subset in combinations(pool, size):
        nodes += 1
        if nodes > budget:
            return None, nodes, False
        if contains(union_all((copy for _, copy in subset), uncovered.mode), uncovered):
            return [g for g, _ in subset], nodes, True
    return None, nodes, True


def check_reducible_covering(
    w,
    region,
    k_max=settings.DEFAULT_KMAX,
    family=None,
    budget=settings.DEFAULT_BUDGET,
):
    """Look for F1 (copies meeting region) and F2 (|F2| = |F1| - 1) such that
    (w - F1) | F2 still covers region.

    Raises:
        HypothesisError: if w does not cover region to begin with.
    """
    region = region.normalize()
    if not covers(w, region).ok:
        raise HypothesisError("Window does not cover the region")
    family = family or default_family(w.body, region, margin=True)
    indexed = list(enumerate(w.placements))
    copies = w.copies()
    meeting = [
        (index, g) for index, g in indexed if not (copies[index] & region).is_empty()
    ]
    meeting.sort(key=lambda item: (item[1], item[0]))
    candidates = [
        (g, w.body.region.transform(g)) for g in family.placements(w.body)
    ]
    nodes, trace, unknown = 0, [], False
    for k in range(1, min(k_max, len(meeting)) + 1):
        for removed in combinations(meeting, k):
            dropped = {index for index, _ in removed}
            rest = [copies[i] for i in range(len(copies)) if i not in dropped]
            uncovered = region - union_all(rest, region.mode)
            if uncovered.is_empty():
                added = []
            else:
                pool = [
                    (g, copy) for g, copy in candidates if not (copy & uncovered).is_empty()
                ]
                added, used, complete = _cover_search(pool, uncovered, k - 1, budget)
                nodes += used
                unknown = unknown or not complete
                if added is None:
                    continue
            LOG.info("Reducible: remove %d, add %d", k, k - 1)
            trace.append({"k": k})
            return Verdict(
                "reducible", k_max, [g for _, g in removed], added, family, nodes, trace
            )
        trace.append({"k": k})
    status = "unknown" if unknown else "irreducible"
    return Verdict(status, k_max, family=family, nodes=nodes, trace=trace)
