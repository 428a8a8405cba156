"""
Build the tiling body K and check the conditions it is built to satisfy.

The construction, for an integer m >= 2 and rationals 0 < delta' < delta/2 < 1/6:

    R   = [0, m] x [1, m]
    Q0  = [delta, 1 - delta] x [1 + delta, m - delta]        pockets Qj = Q0 + j
    Q'0 = [1/2 - delta', 1/2 + delta'] x [1, 1 + delta]       slots  Q'j = Q'0 + j
    P   = m Q0,  P' = m Q'0                                   protrusion and its neck
    R'  = R | P' - U Q'j
    K   = R | P | P' - U Qj - U Q'j

The maps s(z) = m z and tau(z) = z + m tile the half-plane with copies of K:
the protrusion of each copy fills a pocket of the row below.
"""

import logging
import math

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from hypack import settings
from hypack.errors import ConfigurationError, ConstructionError, DomainError
from hypack.models import Body, Placement
from hypack.rational import fraction_str, to_fraction
from hypack.regions import RectRegion, contains, interiors_disjoint, union_all


LOG = logging.getLogger(__name__)

FIRST_DELTA = Fraction(1, 10)
MIN_DELTA = Fraction(1, 2 ** 60)


def check_parameters(m, delta, delta_prime):
    """Raise DomainError unless m >= 2 and 0 < delta' < delta/2 < 1/6."""
    if int(m) != m or m < 2:
        raise DomainError(f"m must be an integer >= 2, got {m}")
    delta, delta_prime = to_fraction(delta), to_fraction(delta_prime)
    if not 0 < delta_prime < delta / 2 < Fraction(1, 6):
        raise DomainError(
            "Need 0 < delta' < delta/2 < 1/6, got"
            f" delta={fraction_str(delta)}, delta'={fraction_str(delta_prime)}"
        )
    return int(m), delta, delta_prime


def build_pieces(m, delta, delta_prime):
    """All named regions of the construction, keyed by their usual names."""
    m, delta, delta_prime = check_parameters(m, delta, delta_prime)
    half = Fraction(1, 2)
    R = RectRegion.rectangle(0, m, 1, m)
    Q0 = RectRegion.rectangle(delta, 1 - delta, 1 + delta, m - delta)
    Qp0 = RectRegion.rectangle(half - delta_prime, half + delta_prime, 1, 1 + delta)
    s = Placement(1, 0, m)
    pieces = {"R": R, "P": Q0.transform(s), "P'": Qp0.transform(s)}
    for j in range(m):
        shift = Placement(0, j, m)
        pieces[f"Q{j}"] = Q0.transform(shift)
        pieces[f"Q'{j}"] = Qp0.transform(shift)
    pockets = union_all(pieces[f"Q{j}"] for j in range(m))
    slots = union_all(pieces[f"Q'{j}"] for j in range(m))
    pieces["R'"] = (R | pieces["P'"]) - slots
    pieces["K"] = union_all([R, pieces["P"], pieces["P'"]]) - pockets - slots
    return pieces


def build_body(m, delta, delta_prime, epsilon=None):
    """Construct K(m, delta, delta') with its auxiliary pieces.

    Raises:
        DomainError: if the parameters violate 0 < delta' < delta/2 < 1/6.
        ConstructionError: if the resulting region is not edge-connected.
    """
    pieces = build_pieces(m, delta, delta_prime)
    region = pieces.pop("K")
    if not region.is_connected():
        raise ConstructionError(f"Body for m={m} is not connected")
    body = Body(
        region,
        m=int(m),
        delta=to_fraction(delta),
        delta_prime=to_fraction(delta_prime),
        pieces=pieces,
        epsilon=None if epsilon is None else to_fraction(epsilon),
    )
    LOG.debug("Built %r with area %s", body, fraction_str(body.area))
    return body


def epsilon_bound(body):
    """1 - (m - 1) area(Q0) / area(R'), exact."""
    return 1 - (body.m - 1) * body.pieces["Q0"].area() / body.pieces["R'"].area()


def verify_epsilon_bound(body, epsilon):
    """Check 1 - (m - 1) area(Q0) / area(R') < epsilon in exact arithmetic.

    Returns:
        dict: holds, bound and the evaluated pieces.
    """
    epsilon = to_fraction(epsilon)
    lam_q0 = body.pieces["Q0"].area()
    lam_rp = body.pieces["R'"].area()
    bound = 1 - (body.m - 1) * lam_q0 / lam_rp
    return {
        "holds": bound < epsilon,
        "bound": bound,
        "epsilon": epsilon,
        "m": body.m,
        "area_Q0": lam_q0,
        "area_R'": lam_rp,
    }


def choose_parameters(epsilon, m=None):
    """Pick (m, delta, delta') for a target density epsilon.

    m is the smallest integer with 1/m < epsilon unless forced. delta runs
    through 1/10, 1/20, 1/40, ... until the bound holds exactly; delta' = delta/5.

    Raises:
        DomainError: if epsilon is not in (0, 1), or a forced m has 1/m >= epsilon.
    """
    epsilon = to_fraction(epsilon)
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {fraction_str(epsilon)}")
    if m is None:
        m = math.floor(1 / epsilon) + 1
    elif int(m) != m or m < 2 or Fraction(1, int(m)) >= epsilon:
        raise DomainError(
            f"Forced m={m} does not satisfy 1/m < epsilon={fraction_str(epsilon)}"
        )
    m = int(m)
    delta = FIRST_DELTA
    while delta >= MIN_DELTA:
        body = build_body(m, delta, delta / 5)
        if epsilon_bound(body) < epsilon:
            LOG.info(
                "epsilon=%s: m=%d, delta=%s, delta'=%s",
                fraction_str(epsilon), m, fraction_str(delta), fraction_str(delta / 5),
            )
            return m, delta, delta / 5
        delta /= 2
    raise DomainError(f"No admissible delta found for epsilon={fraction_str(epsilon)}")


def _open_overlap(box, other):
    return (
        box[0] < other[1] and other[0] < box[1]
        and box[2] < other[3] and other[2] < box[3]
    )


def fit_candidates(body, scales=settings.FIT_SCALES, step=settings.FIT_STEP, margin=0):
    """Affine placements g != e whose copy's bounding box meets Q0's.

    Translations run over the grid step * Z; margin widens the translation
    range on both sides.
    """
    step, margin = to_fraction(step), to_fraction(margin)
    if step <= 0:
        raise ConfigurationError(f"Grid step must be positive, got {step}")
    xmin, xmax, ymin, ymax = body.region.bounds()
    target = body.pieces["Q0"].bounds()
    candidates = []
    for a in range(scales[0], scales[1] + 1):
        lam = Fraction(body.m) ** a
        if not (lam * ymin < target[3] and target[2] < lam * ymax):
            continue
        lo = target[0] - lam * xmax - margin
        hi = target[1] - lam * xmin + margin
        k = math.floor(lo / step) + 1
        while k * step < hi:
            g = Placement(a, k * step, body.m)
            box = (lam * xmin + g.t, lam * xmax + g.t, lam * ymin, lam * ymax)
            if not g.is_identity() and (margin > 0 or _open_overlap(box, target)):
                candidates.append(g)
            k += 1
    return candidates


def _classify(body, g):
    """(eligible, fits) for one candidate placement."""
    copy = body.region.transform(g)
    q0 = body.pieces["Q0"]
    if not interiors_disjoint(copy, body.region):
        return False, False
    if (copy & q0).is_empty():
        return False, False
    return True, contains(q0, body.pieces["P"].transform(g))


def verify_fit_condition(
    body,
    scales=settings.FIT_SCALES,
    step=settings.FIT_STEP,
    margin=0,
    threads=1,
):
    """Search the affine family for copies that reach into Q0 without fitting.

    A candidate g is eligible when gK does not overlap K and gK meets Q0 in
    positive area. An eligible g is a violation unless gP lies inside Q0.

    Returns:
        dict: holds, witnesses (violations), fitting placements, candidate count
            and family parameters.
    Raises:
        ConfigurationError: if the candidate family is empty.
    """
    if body.mode != "hyperbolic" or body.m is None:
        raise ConfigurationError("Fit condition needs a constructed hyperbolic body")
    candidates = fit_candidates(body, scales, step, margin)
    if not candidates:
        raise ConfigurationError("Empty candidate family for the fit condition")
    LOG.info("Checking %d candidate placements against Q0", len(candidates))

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            outcomes = list(executor.map(lambda g: _classify(body, g), candidates))
    else:
        outcomes = [_classify(body, g) for g in candidates]

    witnesses, fitting = [], []
    for g, (eligible, fits) in zip(candidates, outcomes):
        if not eligible:
            continue
        (fitting if fits else witnesses).append(g)
    witnesses.sort()
    fitting.sort()
    if witnesses:
        LOG.warning("Fit condition violated by %d placements", len(witnesses))
    return {
        "holds": not witnesses,
        "witnesses": witnesses,
        "fitting": fitting,
        "candidates": len(candidates),
        "family": {
            "scales": list(scales),
            "step": to_fraction(step),
            "margin": to_fraction(margin),
        },
    }
