"""
Test suite for regions.py
"""

import random

from fractions import Fraction

import pytest

from hypack import regions
from hypack.errors import DomainError, ModeMismatchError, UnsupportedPlacementError
from hypack.models import Placement, Translation
from hypack.regions import RectRegion


def square(x, y, side=1, mode="euclidean"):
    return RectRegion.rectangle(x, x + side, y, y + side, mode=mode)


def test_rejects_half_plane_boundary():
    with pytest.raises(DomainError):
        RectRegion.rectangle(0, 1, 0, 1)
    with pytest.raises(DomainError):
        RectRegion.rectangle(1, 0, 1, 2)


def test_normalize_merges_touching_rectangles():
    region = square(0, 0) | square(1, 0)
    assert region.rects == ((0, 2, 0, 1),)
    stacked = RectRegion([(0, 2, 0, 1), (0, 2, 1, 2)], mode="euclidean").normalize()
    assert stacked.rects == ((0, 2, 0, 2),)


def test_equality_ignores_representation():
    a = RectRegion([(0, 2, 0, 2)], mode="euclidean")
    b = RectRegion([(0, 1, 0, 2), (1, 2, 0, 1), (1, 2, 1, 2), (0, 2, 0, 1)], mode="euclidean")
    assert a == b
    assert hash(a) == hash(b)


def test_set_operations_euclidean_area():
    a = RectRegion.rectangle(0, 2, 0, 2, mode="euclidean")
    b = RectRegion.rectangle(1, 3, 1, 3, mode="euclidean")
    assert (a | b).area() == 7
    assert (a & b).area() == 1
    assert (a - b).area() == 3
    assert (a - a).is_empty()


def test_inclusion_exclusion_hyperbolic():
    a = RectRegion.rectangle(0, 2, 1, 3)
    b = RectRegion.rectangle(Fraction(1, 2), 4, 2, 5)
    assert (a | b).area() == a.area() + b.area() - (a & b).area()
    assert (a - b).area() + (a & b).area() == a.area()


def test_hyperbolic_area_exact():
    assert RectRegion.rectangle(0, 2, 1, 2).area() == 1
    assert RectRegion.empty().area() == 0


def test_mode_mismatch():
    with pytest.raises(ModeMismatchError):
        RectRegion.rectangle(0, 1, 1, 2) | square(0, 0)
    with pytest.raises(ModeMismatchError):
        regions.union_all([RectRegion.rectangle(0, 1, 1, 2), square(0, 0)])


def test_union_all():
    squares = [square(x, 0) for x in range(4)]
    assert regions.union_all(squares, "euclidean").rects == ((0, 4, 0, 1),)
    assert regions.union_all([], "euclidean").is_empty()


def test_interiors_disjoint_touching():
    assert regions.interiors_disjoint(square(0, 0), square(1, 0))
    assert regions.interiors_disjoint(square(0, 0), square(1, 1))
    assert not regions.interiors_disjoint(square(0, 0), square(Fraction(1, 2), 0))


def test_contains():
    outer = RectRegion.rectangle(0, 3, 0, 3, mode="euclidean")
    assert regions.contains(outer, square(1, 1))
    assert regions.contains(outer, square(0, 0) | square(2, 2))
    assert not regions.contains(outer, square(Fraction(5, 2), 0))


def test_transform_hyperbolic():
    region = RectRegion.rectangle(0, 1, 1, 2)
    image = region.transform(Placement(1, 3, 2))
    assert image.rects == ((3, 5, 2, 4),)
    assert image.area() == region.area()


def test_transform_euclidean():
    image = square(0, 0).transform(Translation(Fraction(1, 2), -1))
    assert image.rects == ((Fraction(1, 2), Fraction(3, 2), -1, 0),)


def test_transform_rejects_foreign_placement():
    with pytest.raises(UnsupportedPlacementError):
        square(0, 0).transform(Placement(1, 0, 2))
    with pytest.raises(UnsupportedPlacementError):
        RectRegion.rectangle(0, 1, 1, 2).transform(Translation(1, 0))
    with pytest.raises(UnsupportedPlacementError):
        square(0, 0).transform("rotate")


def test_components():
    corner = square(0, 0) | square(1, 1)
    assert len(corner.components()) == 2
    assert not corner.is_connected()

    edge = square(0, 0) | square(1, 0) | square(1, 1)
    assert edge.is_connected()


def test_contains_point_closed():
    region = square(0, 0)
    assert region.contains_point(1, 1)
    assert region.contains_point(Fraction(1, 2), 0)
    assert not region.contains_point(Fraction(3, 2), 0)


def test_boundary_segments_square():
    segments = regions.boundary_segments(RectRegion.rectangle(0, 2, 0, 2, mode="euclidean"))
    assert sorted(segments) == sorted([
        ((0, 0), (2, 0)),
        ((0, 2), (2, 2)),
        ((0, 0), (0, 2)),
        ((2, 0), (2, 2)),
    ])


def test_boundary_segments_hide_internal_edges():
    region = square(0, 0) | square(1, 0)
    assert len(regions.boundary_segments(region)) == 4


def test_serialisation():
    region = RectRegion([(Fraction(1, 3), 1, Fraction(5, 4), 2)])
    d = region.to_dict()
    assert d == {"mode": "hyperbolic", "rects": [["1/3", "1", "5/4", "2"]]}
    assert RectRegion.from_dict(d) == region


def random_rectangle(rng, mode):
    x0 = Fraction(rng.randint(-20, 20), 4)
    y0 = Fraction(rng.randint(1, 20), 4)
    return RectRegion.rectangle(
        x0, x0 + Fraction(rng.randint(1, 16), 4), y0, y0 + Fraction(rng.randint(1, 16), 4), mode=mode
    )


def test_transform_preserves_hyperbolic_area():
    rng = random.Random(17)
    for _ in range(1000):
        region = random_rectangle(rng, "hyperbolic")
        g = Placement(rng.randint(-4, 4), Fraction(rng.randint(-50, 50), rng.randint(1, 12)), rng.randint(2, 5))
        assert region.transform(g).area() == region.area()


@pytest.mark.parametrize("mode", ["euclidean", "hyperbolic"])
def test_random_set_operations(mode):
    rng = random.Random(29)
    for _ in range(200):
        a = random_rectangle(rng, mode) | random_rectangle(rng, mode)
        b = random_rectangle(rng, mode) | random_rectangle(rng, mode)
        assert (a | b).area() == a.area() + b.area() - (a & b).area()
        assert (a - b).area() + (a & b).area() == a.area()
        normal = (a | b).normalize()
        assert normal.normalize().rects == normal.rects
