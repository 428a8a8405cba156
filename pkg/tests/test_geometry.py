"""
Test suite for geometry.py
"""

import math

from fractions import Fraction

import pytest

from hypack import geometry
from hypack.errors import DomainError
from hypack.models import Placement


def test_hpoint_rejects_boundary():
    with pytest.raises(DomainError):
        geometry.HPoint(0, 0)
    with pytest.raises(DomainError):
        geometry.HPoint(1, -2)


def test_hpoint_parse():
    point = geometry.HPoint.parse("1/2,3")
    assert point == geometry.HPoint(Fraction(1, 2), 3)
    assert list(point) == [Fraction(1, 2), 3]


def test_hpoint_apply():
    point = geometry.HPoint(1, 1).apply(Placement(1, 3, 2))
    assert point == geometry.HPoint(5, 2)


def test_hyp_distance_vertical():
    p, q = geometry.HPoint(0, 1), geometry.HPoint(0, math.e)
    assert geometry.hyp_distance(p, q) == pytest.approx(1.0)
    assert geometry.hyp_distance(p, p) == 0


def test_hyp_distance_is_invariant():
    p, q = geometry.HPoint(0, 1), geometry.HPoint(Fraction(3, 2), 2)
    g = Placement(2, Fraction(-7, 3), 3)
    assert geometry.hyp_distance(p.apply(g), q.apply(g)) == pytest.approx(
        geometry.hyp_distance(p, q), rel=1e-12
    )


def test_rect_hyp_area_exact():
    assert geometry.rect_hyp_area(0, 2, 1, 2) == 1
    area = geometry.rect_hyp_area(Fraction(1, 10), Fraction(9, 10), Fraction(11, 10), Fraction(19, 10))
    assert area == Fraction(64, 209)
    assert isinstance(area, Fraction)


def test_rect_hyp_area_float():
    assert geometry.rect_hyp_area(0.0, 1.0, 1.0, 2.0) == pytest.approx(0.5)


@pytest.mark.parametrize("rect", [(0, 1, 0, 1), (0, 1, -1, 1), (1, 1, 1, 2), (0, 1, 2, 1)])
def test_rect_hyp_area_domain(rect):
    with pytest.raises(DomainError):
        geometry.rect_hyp_area(*rect)


def test_ball_area():
    assert geometry.ball_area(0) == 0
    assert geometry.ball_area(1) == pytest.approx(2 * math.pi * (math.cosh(1) - 1))
    with pytest.raises(DomainError):
        geometry.ball_area(-1)


def test_hball_euclidean_realisation():
    ball = geometry.hyp_ball(geometry.ORIGIN, 1)
    cx, cy = ball.euclidean_center
    assert cx == 0
    assert cy == pytest.approx(math.cosh(1))
    assert ball.euclidean_radius == pytest.approx(math.sinh(1))

    top = geometry.HPoint(0, math.e)
    bottom = geometry.HPoint(0, 1 / math.e)
    assert ball.contains(top)
    assert ball.contains(bottom)
    assert not ball.contains(geometry.HPoint(0, 3))


def test_hball_contains_matches_distance():
    ball = geometry.hyp_ball(geometry.HPoint(1, 2), 0.7)
    for x, y in [(1.2, 2.5), (0.1, 1.9), (1.0, 1.0), (2.5, 2.0), (1.4, 3.3)]:
        point = geometry.HPoint(x, y)
        inside = geometry.hyp_distance(point, ball.center) <= 0.7
        assert ball.contains(point) == inside


def test_euclidean_disk():
    disk = geometry.euclidean_disk((1, 1), 2)
    assert disk.area == pytest.approx(4 * math.pi)
    assert disk.bounds() == (-1, 3, -1, 3)
    assert disk.contains((1, 3))
    assert not disk.contains((3, 3))
