"""
Test suite for body.py
"""

import random

from fractions import Fraction

import pytest

from hypack import body as builder
from hypack.errors import ConfigurationError, DomainError
from hypack.models import Body, Placement
from hypack.regions import RectRegion


DELTA = Fraction(1, 10)
DELTA_PRIME = Fraction(1, 50)


@pytest.fixture
def body():
    return builder.build_body(2, DELTA, DELTA_PRIME, Fraction(7, 10))


@pytest.mark.parametrize(
    "m, delta, delta_prime",
    [
        (1, DELTA, DELTA_PRIME),
        (2, DELTA, Fraction(1, 20)),
        (2, Fraction(1, 3), Fraction(1, 50)),
        (2, DELTA, 0),
        (Fraction(5, 2), DELTA, DELTA_PRIME),
    ],
)
def test_check_parameters_rejects(m, delta, delta_prime):
    with pytest.raises(DomainError):
        builder.check_parameters(m, delta, delta_prime)


def test_pieces(body):
    pieces = body.pieces
    assert pieces["R"] == RectRegion.rectangle(0, 2, 1, 2)
    assert pieces["Q0"] == RectRegion.rectangle(DELTA, 1 - DELTA, 1 + DELTA, 2 - DELTA)
    assert pieces["Q1"] == pieces["Q0"].transform(Placement(0, 1, 2))
    assert pieces["P"] == RectRegion.rectangle(2 * DELTA, 2 - 2 * DELTA, 2 + 2 * DELTA, 4 - 2 * DELTA)
    assert pieces["P'"] == RectRegion.rectangle(
        1 - 2 * DELTA_PRIME, 1 + 2 * DELTA_PRIME, 2, 2 + 2 * DELTA
    )
    assert "K" not in pieces


def test_piece_areas(body):
    pieces = body.pieces
    assert pieces["Q0"].area() == Fraction(64, 209)
    assert pieces["Q'0"].area() == Fraction(1, 275)
    assert pieces["P"].area() == pieces["Q0"].area()
    assert pieces["P'"].area() == pieces["Q'0"].area()
    assert pieces["R'"].area() == Fraction(274, 275)


def test_body_area(body):
    assert body.area == Fraction(274, 275) - Fraction(64, 209)
    assert body.region.is_connected()
    assert body.epsilon == Fraction(7, 10)


@pytest.mark.parametrize("m", [2, 3, 5])
def test_body_is_connected(m):
    body = builder.build_body(m, Fraction(1, 20), Fraction(1, 100))
    assert body.region.is_connected()
    assert body.area == body.pieces["R'"].area() - (m - 1) * body.pieces["Q0"].area()


def test_epsilon_bound(body):
    result = builder.verify_epsilon_bound(body, Fraction(7, 10))
    expected = 1 - Fraction(64, 209) / Fraction(274, 275)
    assert result["holds"]
    assert result["bound"] == expected
    assert float(expected) == pytest.approx(0.692662, abs=1e-6)
    assert result["area_Q0"] == Fraction(64, 209)
    assert result["area_R'"] == Fraction(274, 275)
    assert builder.epsilon_bound(body) == expected


def test_epsilon_bound_fails_below(body):
    assert not builder.verify_epsilon_bound(body, Fraction(69, 100))["holds"]


def test_choose_parameters():
    assert builder.choose_parameters(Fraction(7, 10)) == (2, DELTA, DELTA_PRIME)
    assert builder.choose_parameters(Fraction(1, 2)) == (3, Fraction(1, 20), Fraction(1, 100))


@pytest.mark.parametrize("epsilon", [Fraction(1, 5), Fraction(1, 3), Fraction(9, 10)])
def test_choose_parameters_meets_bound(epsilon):
    m, delta, delta_prime = builder.choose_parameters(epsilon)
    assert Fraction(1, m) < epsilon
    body = builder.build_body(m, delta, delta_prime)
    assert builder.epsilon_bound(body) < epsilon


@pytest.mark.parametrize("epsilon, m", [(0, None), (1, None), (Fraction(3, 2), None), (Fraction(1, 2), 2)])
def test_choose_parameters_domain(epsilon, m):
    with pytest.raises(DomainError):
        builder.choose_parameters(epsilon, m)


def test_choose_parameters_forced_m():
    m, delta, _ = builder.choose_parameters(Fraction(7, 10), m=4)
    assert m == 4
    assert builder.epsilon_bound(builder.build_body(m, delta, delta / 5)) < Fraction(7, 10)


def test_fit_candidates_skip_identity(body):
    candidates = builder.fit_candidates(body, scales=(-1, 0), step=Fraction(1, 10))
    assert Placement(0, 0, 2) not in candidates
    assert Placement(-1, 0, 2) in candidates
    assert all(g.a in (-1, 0) for g in candidates)


def test_fit_condition_holds(body):
    result = builder.verify_fit_condition(body, step=Fraction(1, 20))
    assert result["holds"]
    assert result["witnesses"] == []
    assert result["fitting"] == [Placement(-1, 0, 2)]
    assert result["candidates"] > 0


def test_fit_condition_threads(body):
    single = builder.verify_fit_condition(body, step=Fraction(1, 10))
    threaded = builder.verify_fit_condition(body, step=Fraction(1, 10), threads=4)
    assert single == threaded


def test_fit_condition_finds_violation(body):
    # recorded protrusion is off by 1/2, so the copy reaching into Q0 does not fill it
    pieces = dict(body.pieces)
    pieces["P"] = pieces["P"].transform(Placement(0, Fraction(1, 2), 2))
    fake = Body(body.region, m=2, delta=DELTA, delta_prime=DELTA_PRIME, pieces=pieces)
    result = builder.verify_fit_condition(fake, scales=(-1, 0), step=Fraction(1, 20))
    assert not result["holds"]
    assert result["witnesses"] == [Placement(-1, 0, 2)]
    assert result["fitting"] == []


def test_fit_condition_empty_family(body):
    with pytest.raises(ConfigurationError):
        builder.verify_fit_condition(body, scales=(5, 6))


def test_fit_condition_needs_hyperbolic_body():
    with pytest.raises(ConfigurationError):
        builder.verify_fit_condition(Body.unit_square())


@pytest.mark.parametrize("m", [2, 3, 5])
def test_pocket_ratio_tends_to_one_over_m(m):
    ratios = []
    for exponent in range(1, 5):
        delta = Fraction(1, 10 ** exponent)
        pieces = builder.build_pieces(m, delta, delta / 5)
        ratio = pieces["Q0"].area() / pieces["R'"].area()
        assert abs(ratio - Fraction(1, m)) < 10 * delta
        ratios.append(ratio)
    assert all(a < b for a, b in zip(ratios, ratios[1:]))


def test_protrusion_areas_match_pockets():
    rng = random.Random(3)
    for _ in range(20):
        m = rng.randint(2, 6)
        delta = Fraction(rng.randint(1, 33), 100)
        delta_prime = delta * Fraction(rng.randint(1, 49), 100)
        pieces = builder.build_pieces(m, delta, delta_prime)
        assert pieces["P"].area() == pieces["Q0"].area()
        assert pieces["P'"].area() == pieces["Q'0"].area()
        assert pieces["R"].area() == m - 1
