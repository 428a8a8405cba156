"""
Test suite for parsers.py
"""

from fractions import Fraction

import pytest

from hypack import parsers, settings


def test_build_body_arguments():
    args = parsers.parse_args(["build-body", "--epsilon", "7/10", "--m", "3", "--svg", "k.svg"])
    assert args.command == "build-body"
    assert args.epsilon == Fraction(7, 10)
    assert args.m == 3
    assert args.delta is None
    assert args.svg == "k.svg"
    assert args.seed is None


def test_tile_ranges():
    args = parsers.parse_args(["tile", "--body", "body.json", "--i=-1:1", "--j=-3:3"])
    assert args.i == (-1, 1)
    assert args.j == (-3, 3)
    args = parsers.parse_args(["tile", "--body", "body.json"])
    assert args.i == settings.PATCH_I


def test_bad_range():
    with pytest.raises(SystemExit):
        parsers.parse_args(["tile", "--body", "body.json", "--i=2:1"])


def test_bad_fraction():
    with pytest.raises(SystemExit):
        parsers.parse_args(["build-body", "--epsilon", "seven"])


def test_density_arguments():
    args = parsers.parse_args(
        ["density", "--packing", "p.json", "--center", "1/2,3", "--r", "1,2.5", "--monte-carlo"]
    )
    assert args.center == (Fraction(1, 2), Fraction(3))
    assert args.r == [1.0, 2.5]
    assert args.monte_carlo


def test_density_needs_radii():
    with pytest.raises(ValueError):
        parsers.parse_args(["density", "--packing", "p.json"])
    args = parsers.parse_args(["density", "--periodic", "pp.json"])
    assert args.r is None


def test_density_sources_exclusive():
    with pytest.raises(SystemExit):
        parsers.parse_args(["density", "--packing", "p.json", "--periodic", "pp.json", "--r", "1"])


def test_saturate_map_needs_cell():
    with pytest.raises(ValueError):
        parsers.parse_args(["saturate", "--packing", "p.json", "--check", "map"])
    args = parsers.parse_args(
        ["saturate", "--packing", "p.json", "--check", "map", "--cell", "2", "--grid", "1/2"]
    )
    assert args.cell == 2
    assert args.grid == Fraction(1, 2)
    assert args.kmax == settings.DEFAULT_KMAX


def test_reproduce_needs_out():
    with pytest.raises(ValueError):
        parsers.parse_args(["reproduce", "--epsilon", "7/10"])
    args = parsers.parse_args(["reproduce", "--epsilon", "7/10", "--out", "run"])
    assert args.out == "run"


def test_metric_arguments():
    args = parsers.parse_args(["metric", "a.json", "b.json", "--norm", "orbit", "--n-max", "4"])
    assert (args.first, args.second) == ("a.json", "b.json")
    assert args.norm == "orbit"
    assert args.n_max == 4


def test_no_command():
    with pytest.raises(SystemExit):
        parsers.parse_args([])
