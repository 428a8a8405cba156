"""
Test suite for density.py
"""

import math
import random

from fractions import Fraction

import pytest

from hypack import body as builder
from hypack import density, integrate, packing
from hypack.errors import (
    DomainError,
    HypothesisError,
    InvalidPackingError,
    ModeMismatchError,
    TruncationError,
)
from hypack.geometry import HPoint, hyp_ball
from hypack.models import Body, PackingWindow, Placement, Translation
from hypack.regions import RectRegion


@pytest.fixture
def square():
    return Body.unit_square()


@pytest.fixture(scope="module")
def body():
    return builder.build_body(2, Fraction(1, 10), Fraction(1, 50), Fraction(7, 10))


@pytest.mark.parametrize(
    "spacing, expected",
    [(1, Fraction(1)), (2, Fraction(1, 4)), (Fraction(3, 2), Fraction(4, 9))],
)
def test_periodic_density(square, spacing, expected):
    report = density.periodic_density(density.PeriodicPacking.lattice(square, spacing))
    assert report.value == expected
    assert report.method == "exact-cell"
    assert report.numeric == "exact"


def test_periodic_density_with_motif(square):
    pp = density.PeriodicPacking(
        square, (2, 2), motif=[Translation(0, 0), Translation(1, 1)], origin=(0, 0)
    )
    assert density.periodic_density(pp).value == Fraction(1, 2)


def test_periodic_density_offset_origin(square):
    pp = density.PeriodicPacking(square, (2, 3), origin=(Fraction(1, 2), Fraction(-1, 3)))
    assert density.periodic_density(pp).value == Fraction(1, 6)


def test_periodic_packing_rejects_overlap(square):
    with pytest.raises(InvalidPackingError):
        density.PeriodicPacking.lattice(square, Fraction(1, 2))
    with pytest.raises(InvalidPackingError):
        density.PeriodicPacking(square, (2, 2), motif=[Translation(0, 0), Translation(Fraction(1, 2), 0)])


def test_periodic_packing_validation(square, body):
    with pytest.raises(ModeMismatchError):
        density.PeriodicPacking(body, (1, 1))
    with pytest.raises(DomainError):
        density.PeriodicPacking(square, (0, 1))


def test_periodic_packing_serialisation(square):
    pp = density.PeriodicPacking(square, (Fraction(3, 2), 2), motif=[Translation(0, 0)])
    restored = density.PeriodicPacking.from_json(pp.to_json())
    assert restored.periods == pp.periods
    assert restored.motif == pp.motif
    assert density.periodic_density(restored).value == Fraction(1, 3)


def test_placements_near(square):
    pp = density.PeriodicPacking.lattice(square, 2)
    near = pp.placements_near((0, 3, 0, 1))
    assert near == [Translation(0, 0), Translation(2, 0)]


def test_ball_density_full_lattice(square):
    pp = density.PeriodicPacking.lattice(square, 1)
    w = pp.window(RectRegion.rectangle(-5, 5, -5, 5, mode="euclidean"))
    report = density.ball_density(w, (0, 0), [1, 2.5])
    assert report.method == "ball-limit"
    assert report.radii == [1, 2.5]
    for value in report.partials:
        assert value == pytest.approx(1.0, abs=1e-6)


def test_ball_density_sparse_lattice(square):
    pp = density.PeriodicPacking.lattice(square, 2)
    w = pp.window(RectRegion.rectangle(-30, 30, -30, 30, mode="euclidean"))
    report = density.ball_density(w, (Fraction(1, 3), Fraction(1, 7)), 20)
    assert report.value == pytest.approx(0.25, abs=0.05)


def test_ball_density_tiling_is_full(body):
    patch = packing.generate_tiling_patch(body, (-2, 2), (-4, 4))
    report = density.ball_density(patch, HPoint(0, 1), 0.5)
    assert report.value == pytest.approx(1.0, abs=1e-6)
    assert report.provenance["metric"] == "hyperbolic"


def test_ball_density_single_body(body):
    w = PackingWindow(body, [Placement(0, 0, 2)], window=RectRegion.rectangle(-4, 4, Fraction(1, 4), 8))
    value = density.ball_fraction(w, HPoint(1, Fraction(3, 2)), 0.3)
    assert 0 < value < 1


def test_ball_density_empty_window(body):
    window = RectRegion.rectangle(-4, 4, Fraction(1, 4), 8)
    w = PackingWindow(body, [], window=window)
    assert density.ball_fraction(w, HPoint(0, 1), 0.5) == 0


def test_ball_density_truncation(square):
    w = PackingWindow(square, [Translation(0, 0)])
    with pytest.raises(TruncationError) as error:
        density.ball_fraction(w, (Fraction(1, 2), Fraction(1, 2)), 2)
    assert error.value.required is not None
    with pytest.raises(DomainError):
        density.ball_fraction(w, (0, 0), 0)


def test_bound_chain(body):
    report = density.bound_chain(body)
    assert report.method == "bound-chain"
    assert report.value == builder.epsilon_bound(body)
    assert report.value < body.epsilon
    assert report.details["ratio"] == Fraction(64, 209) / Fraction(274, 275)
    assert [step["step"] for step in report.details["steps"]] == [
        "split off the protrusion",
        "trade protrusion for a pocket",
        "decompose R'",
        "collapse",
        "area-ratio law",
        "cap",
    ]
    for step in report.details["steps"]:
        if "area_check" in step:
            assert step["area_check"], step["step"]


def test_bound_chain_mu_upper(body):
    full = density.bound_chain(body).value
    assert density.bound_chain(body, Fraction(1, 2)).value == full / 2


@pytest.mark.parametrize("m", [3, 4])
def test_bound_chain_other_bodies(m):
    delta = Fraction(1, 20)
    body = builder.build_body(m, delta, delta / 5)
    report = density.bound_chain(body)
    assert all(step.get("area_check", True) for step in report.details["steps"])
    assert report.value == builder.epsilon_bound(body)


def test_ratio_check(square):
    pp = density.PeriodicPacking.lattice(square, 2)
    L = RectRegion.rectangle(0, Fraction(1, 2), 0, 1, mode="euclidean")
    report = density.ratio_check(pp, L, radii=[5, 10], center=(Fraction(1, 3), Fraction(1, 5)))
    assert report.value == Fraction(1, 2)
    assert report.details["expected"] == Fraction(1, 2)
    assert report.details["matches"]
    assert report.details["freq_K"] == Fraction(1, 4)
    for partial in report.partials:
        assert partial == pytest.approx(0.5, abs=0.1)


def test_ratio_check_needs_subset(square):
    pp = density.PeriodicPacking.lattice(square, 2)
    with pytest.raises(HypothesisError):
        density.ratio_check(pp, RectRegion.rectangle(0, 2, 0, 1, mode="euclidean"))


def test_birkhoff_sweep(square):
    pp = density.PeriodicPacking.lattice(square, 2)
    report = density.birkhoff_sweep(pp, [(0, 0), (Fraction(1, 2), Fraction(1, 3))], [5, 10])
    assert report.details["density"] == Fraction(1, 4)
    assert len(report.details["table"]) == 4
    assert report.value == pytest.approx(0.25, abs=0.05)
    for row in report.details["table"]:
        assert abs(row["deviation"]) <= report.details["C"] / row["r"] + 1e-12


def test_birkhoff_sweep_threads(square):
    pp = density.PeriodicPacking.lattice(square, Fraction(3, 2))
    single = density.birkhoff_sweep(pp, [(0, 0)], [3, 6])
    threaded = density.birkhoff_sweep(pp, [(0, 0)], [3, 6], threads=2)
    assert single.partials == threaded.partials
    assert math.isclose(single.value, threaded.value)


def test_ball_density_empty_default_window(body):
    w = PackingWindow(body, [])
    assert w.window.is_empty()
    assert density.ball_density(w, HPoint(0, 1), 0.5).value == 0


def test_large_ball_averages_match_lattice_density(square):
    pp = density.PeriodicPacking.lattice(square, 2)
    report = density.birkhoff_sweep(pp, [(0, 0), (Fraction(1, 3), Fraction(1, 7))], [40])
    assert len(report.details["table"]) == 2
    for row in report.details["table"]:
        assert row["average"] == pytest.approx(0.25, abs=0.05)


def test_tiling_ball_integral_matches_sampling(body):
    patch = packing.generate_tiling_patch(body, (-2, 2), (-4, 4))
    ball = hyp_ball(HPoint(0, 1), 0.5)
    region = patch.region()
    exact = integrate.region_ball_area(region, ball)
    estimate, stderr = integrate.monte_carlo_area(region, ball, samples=100000, seed=3)
    assert stderr > 0
    assert abs(estimate - exact) <= 3 * stderr
    assert density.ball_fraction(patch, HPoint(0, 1), 0.5) == pytest.approx(exact / ball.area)


@pytest.mark.parametrize(
    "periods, motif",
    [
        ((1, 1), None),
        ((Fraction(3, 2), Fraction(3, 2)), None),
        ((2, 2), [Translation(0, 0), Translation(1, 1)]),
    ],
)
def test_ratio_check_random_subrectangles(square, periods, motif):
    pp = density.PeriodicPacking(square, periods, motif=motif)
    rng = random.Random(5)
    for _ in range(10):
        x0, y0 = rng.randint(0, 9), rng.randint(0, 9)
        x1, y1 = rng.randint(x0 + 1, 10), rng.randint(y0 + 1, 10)
        L = RectRegion.rectangle(
            Fraction(x0, 10), Fraction(x1, 10), Fraction(y0, 10), Fraction(y1, 10), mode="euclidean"
        )
        report = density.ratio_check(pp, L)
        assert report.value == L.area() / square.area
        assert report.details["matches"]


def test_bound_chain_many_pockets():
    # m = 101 with delta = 1/10**4 still misses 1/100; 1/10**5 is small enough
    delta = Fraction(1, 10 ** 4)
    coarse = builder.build_body(101, delta, delta / 5)
    assert builder.epsilon_bound(coarse) > Fraction(1, 100)
    assert float(builder.epsilon_bound(coarse)) == pytest.approx(0.0101990, abs=1e-6)

    delta = Fraction(1, 10 ** 5)
    fine = builder.build_body(101, delta, delta / 5)
    report = density.bound_chain(fine)
    assert report.value < Fraction(1, 100)
    assert float(report.value) == pytest.approx(0.0099308, abs=1e-6)
