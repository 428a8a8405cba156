"""
Densities: exact cell densities of periodic packings, ball averages of
windows, the density bound for K and the area-ratio law.

A periodic packing here is a Euclidean motif repeated over a rectangular
lattice p Z x q Z. Its fundamental cell is an axis-aligned rectangle, so the
covered fraction of the cell, the packing's density under its canonical
invariant measure, is an exact rational.
"""

import logging
import math

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from hypack import settings
from hypack.errors import (
    DomainError,
    HypothesisError,
    InvalidPackingError,
    ModeMismatchError,
    TruncationError,
)
from hypack.geometry import HPoint, euclidean_disk, hyp_ball
from hypack.integrate import region_ball_area
from hypack.models import Body, DensityReport, PackingWindow, Translation
from hypack.packing import is_packing
from hypack.rational import fraction_str, to_fraction
from hypack.regions import RectRegion, contains, union_all
from hypack.serialise import Serialiser


LOG = logging.getLogger(__name__)


class PeriodicPacking(Serialiser):
    """Motif of translations repeated over the lattice p Z x q Z.

    Attributes:
        body (Body): Euclidean body.
        periods (tuple): Lattice periods (p, q).
        motif (list): Translations placed in every cell.
        origin (tuple): Lower-left corner of the fundamental cell.

    Raises:
        InvalidPackingError: if copies of the motif overlap anywhere.
    """

    def __init__(self, body, periods, motif=None, origin=(0, 0)):
        if body.mode != "euclidean":
            raise ModeMismatchError("Periodic packings are Euclidean")
        p, q = (to_fraction(v) for v in periods)
        if p <= 0 or q <= 0:
            raise DomainError(f"Lattice periods must be positive, got {periods}")
        self.body = body
        self.periods = (p, q)
        self.motif = sorted(motif) if motif else [Translation()]
        self.origin = tuple(to_fraction(v) for v in origin)
        self._validate()

    def __repr__(self):
        p, q = self.periods
        return (
            f"PeriodicPacking({self.body.name}, {fraction_str(p)}Z x {fraction_str(q)}Z,"
            f" {len(self.motif)} per cell)"
        )

    @property
    def cell(self):
        (p, q), (x0, y0) = self.periods, self.origin
        return RectRegion.rectangle(x0, x0 + p, y0, y0 + q, mode="euclidean")

    @classmethod
    def lattice(cls, body, spacing):
        """One copy of body per cell of the square lattice spacing Z^2."""
        return cls(body, (spacing, spacing))

    def _index_range(self, lo, hi, offset, extent, period):
        """Lattice indices k whose copy [offset + k period + extent] meets (lo, hi)."""
        k0 = math.floor((lo - offset - extent[1]) / period)
        k1 = math.ceil((hi - offset - extent[0]) / period)
        return range(k0, k1 + 1)

    def placements_near(self, bounds):
        """Translations whose copies meet the open box bounds."""
        x0, x1, y0, y1 = bounds
        bx0, bx1, by0, by1 = self.body.region.bounds()
        p, q = self.periods
        result = []
        for g in self.motif:
            for k in self._index_range(x0, x1, g.tx, (bx0, bx1), p):
                lo, hi = g.tx + k * p + bx0, g.tx + k * p + bx1
                if not (lo < x1 and x0 < hi):
                    continue
                for l in self._index_range(y0, y1, g.ty, (by0, by1), q):
                    lo, hi = g.ty + l * q + by0, g.ty + l * q + by1
                    if lo < y1 and y0 < hi:
                        result.append(Translation(g.tx + k * p, g.ty + l * q))
        return sorted(result)

    def window(self, region):
        """The packing seen through region."""
        return PackingWindow(self.body, self.placements_near(region.bounds()), window=region)

    def _validate(self):
        (p, q), (x0, y0) = self.periods, self.origin
        bx0, bx1, by0, by1 = self.body.region.bounds()
        nx = math.ceil((bx1 - bx0) / p) + 1
        ny = math.ceil((by1 - by0) / q) + 1
        block = RectRegion.rectangle(
            x0 - nx * p, x0 + (nx + 1) * p, y0 - ny * q, y0 + (ny + 1) * q, mode="euclidean"
        )
        result = is_packing(self.window(block))
        if not result.ok:
            raise InvalidPackingError(
                f"Copies {result.violation[0]!r} and {result.violation[1]!r} overlap"
            )

    def to_dict(self):
        return {
            "schema": settings.SCHEMA,
            "body": self.body.to_dict(),
            "periods": [fraction_str(v) for v in self.periods],
            "motif": [g.to_dict() for g in self.motif],
            "origin": [fraction_str(v) for v in self.origin],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            Body.from_dict(d["body"]),
            [Fraction(v) for v in d["periods"]],
            [Translation.from_dict(g) for g in d["motif"]],
            [Fraction(v) for v in d.get("origin", (0, 0))],
        )


def _covered_fraction(pp, piece):
    """Exact fraction of the cell covered by lattice copies of piece (a sub-region of K)."""
    cell = pp.cell
    copies = [piece.transform(g) for g in pp.placements_near(cell.bounds())]
    covered = union_all(copies, "euclidean") & cell
    return covered.area() / cell.area()


def periodic_density(pp):
    """Covered fraction of the fundamental cell, exact."""
    value = _covered_fraction(pp, pp.body.region)
    return DensityReport(
        value,
        "exact-cell",
        provenance={"packing": repr(pp), "cell": pp.cell.to_dict()},
    )


def make_ball(mode, center, r):
    if mode == "hyperbolic":
        if not isinstance(center, HPoint):
            center = HPoint(*center)
        return hyp_ball(center, r)
    return euclidean_disk(tuple(center), r)


def _bounding_rect(ball, mode):
    x0, x1, y0, y1 = (Fraction(v) for v in ball.bounds())
    return RectRegion.rectangle(x0, x1, y0, y1, mode=mode)


def ball_fraction(w, center, r, tol=settings.DEFAULT_TOL):
    """Fraction of the ball of radius r about center covered by the window's copies.

    A window with no copies has fraction 0 wherever the ball lies.

    Raises:
        TruncationError: if the window does not contain the ball's bounding box.
    """
    if not r > 0:
        raise DomainError("Ball density needs a positive radius")
    ball = make_ball(w.mode, center, r)
    if not w.placements:
        return 0.0
    box = _bounding_rect(ball, w.mode)
    if not contains(w.window, box):
        raise TruncationError(
            f"Window does not contain the ball of radius {r} about {center}",
            required=box.bounds(),
        )
    return region_ball_area(w.region(), ball, tol * 1e-3) / ball.area


def ball_density(w, p, r, tol=settings.DEFAULT_TOL):
    """Ball averages of the packing about p, for one radius or a sweep.

    Returns:
        DensityReport: value at the largest radius, with every radius in
            radii/partials.
    """
    radii = sorted(r) if isinstance(r, (list, tuple)) else [r]
    partials = [ball_fraction(w, p, radius, tol) for radius in radii]
    LOG.info("Ball density about %s: %s", p, ", ".join(f"{v:.6f}" for v in partials))
    return DensityReport(
        partials[-1],
        "ball-limit",
        error=tol,
        radii=radii,
        partials=partials,
        provenance={"center": list(p), "metric": w.mode, "copies": len(w)},
    )


def _lattice_ball_fraction(pp, center, r, tol, piece=None):
    ball = make_ball("euclidean", center, r)
    box = _bounding_rect(ball, "euclidean")
    piece = pp.body.region if piece is None else piece
    copies = [piece.transform(g) for g in pp.placements_near(box.bounds())]
    return region_ball_area(union_all(copies, "euclidean"), ball, tol * 1e-3) / ball.area


def bound_chain(body, mu_upper=1):
    """Upper bound on the density of any invariant measure on packings by K.

    The chain, with mu(X) the frequency with which the origin lies in the X
    part of some copy:

        split off the protrusion       D = mu(K - P) + mu(P)
        trade protrusion for a pocket  mu(P) = mu(Q0)
        decompose R'                   mu(R') = mu(K - P) + m mu(Q0)
        collapse                       D = mu(R') - (m - 1) mu(Q0)
        area-ratio law                 mu(Q0) = mu(R') area(Q0) / area(R')
        cap                            mu(R') <= mu_upper

    Each identity that has an area counterpart is checked on areas too.
    """
    mu_upper = to_fraction(mu_upper)
    m = body.m
    pieces = body.pieces
    lam_q0 = pieces["Q0"].area()
    lam_p = pieces["P"].area()
    lam_rp = pieces["R'"].area()
    k_minus_p = body.region - pieces["P"]
    lam_kp = k_minus_p.area()
    ratio = lam_q0 / lam_rp
    factor = 1 - (m - 1) * ratio
    value = mu_upper * factor
    steps = [
        {
            "step": "split off the protrusion",
            "statement": "D = mu(K - P) + mu(P)",
            "area_check": body.area == lam_kp + lam_p,
        },
        {
            "step": "trade protrusion for a pocket",
            "statement": "mu(P) = mu(Q0)",
            "area_check": lam_p == lam_q0,
        },
        {
            "step": "decompose R'",
            "statement": "mu(R') = mu(K - P) + m mu(Q0)",
            "area_check": lam_rp == lam_kp + m * lam_q0,
        },
        {
            "step": "collapse",
            "statement": "D = mu(R') - (m - 1) mu(Q0)",
            "area_check": body.area == lam_rp - (m - 1) * lam_q0,
        },
        {
            "step": "area-ratio law",
            "statement": "mu(Q0) = mu(R') area(Q0) / area(R')",
            "value": ratio,
        },
        {
            "step": "cap",
            "statement": "D <= mu_upper (1 - (m - 1) area(Q0) / area(R'))",
            "value": value,
        },
    ]
    return DensityReport(
        value,
        "bound-chain",
        details={
            "m": m,
            "area_Q0": lam_q0,
            "area_P": lam_p,
            "area_R'": lam_rp,
            "area_K-P": lam_kp,
            "ratio": ratio,
            "factor": factor,
            "mu_upper": mu_upper,
            "steps": steps,
        },
        provenance={
            "m": m,
            "delta": body.delta,
            "delta_prime": body.delta_prime,
        },
    )


def _fit_constant(radii, deviations):
    return max((r * abs(d) for r, d in zip(radii, deviations)), default=0.0)


def ratio_check(pp, L, radii=(), tol=settings.DEFAULT_TOL, center=(0, 0)):
    """Compare the frequency of L against that of K with area(L) / area(K).

    Raises:
        HypothesisError: if L is not contained in the body.
    """
    if L.mode != "euclidean":
        raise ModeMismatchError("Ratio checks run on Euclidean periodic packings")
    if not contains(pp.body.region, L):
        raise HypothesisError("L must be contained in the body")
    freq_k = _covered_fraction(pp, pp.body.region)
    freq_l = _covered_fraction(pp, L) if not L.is_empty() else Fraction(0)
    expected = L.area() / pp.body.area
    value = freq_l / freq_k if freq_k else Fraction(0)
    radii = sorted(radii)
    partials = []
    for r in radii:
        whole = _lattice_ball_fraction(pp, center, r, tol)
        part = _lattice_ball_fraction(pp, center, r, tol, piece=L) if not L.is_empty() else 0.0
        partials.append(part / whole if whole else 0.0)
    deviations = [v - float(expected) for v in partials]
    return DensityReport(
        value,
        "ratio",
        radii=radii,
        partials=partials,
        details={
            "expected": expected,
            "matches": value == expected,
            "freq_L": freq_l,
            "freq_K": freq_k,
            "C": _fit_constant(radii, deviations),
        },
        provenance={"packing": repr(pp), "center": list(center)},
    )


def birkhoff_sweep(pp, centers, radii, tol=settings.DEFAULT_TOL, threads=1):
    """Ball averages about several centers against the exact cell density.

    The fitted constant C is the smallest with |average - D| <= C / r over
    the table.
    """
    density = _covered_fraction(pp, pp.body.region)
    radii = sorted(radii)
    jobs = [(tuple(center), r) for center in centers for r in radii]

    def run(job):
        return _lattice_ball_fraction(pp, job[0], job[1], tol)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            averages = list(executor.map(run, jobs))
    else:
        averages = [run(job) for job in jobs]

    table = [
        {"center": list(center), "r": r, "average": avg, "deviation": avg - float(density)}
        for (center, r), avg in zip(jobs, averages)
    ]
    C = _fit_constant([row["r"] for row in table], [row["deviation"] for row in table])
    largest = [row["average"] for row in table if row["r"] == radii[-1]]
    LOG.info("Birkhoff sweep: D=%s, fitted C=%.4f", fraction_str(density), C)
    return DensityReport(
        sum(largest) / len(largest),
        "ball-limit",
        error=C / radii[-1],
        radii=radii,
        partials=[row["average"] for row in table],
        details={"density": density, "C": C, "table": table},
        provenance={"packing": repr(pp), "centers": [list(c) for c in centers]},
    )
