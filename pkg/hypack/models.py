"""Core records: placements, group norms, bodies, packing windows and reports."""

import logging
import math

from fractions import Fraction

from hypack import settings
from hypack.errors import DomainError, ModeMismatchError
from hypack.rational import fraction_str, number_from_json, number_to_json, to_fraction
from hypack.regions import RectRegion, union_all
from hypack.serialise import Serialiser, jsonable


LOG = logging.getLogger(__name__)


class Placement(Serialiser):
    """Affine half-plane isometry z -> m**a z + t.

    Attributes:
        a (int): Scale exponent.
        t (Fraction): Horizontal translation.
        base (int): The scale base m (s_m multiplies by m).
    """

    mode = "hyperbolic"

    __slots__ = ("a", "t", "base")

    def __init__(self, a=0, t=0, base=2):
        if int(a) != a:
            raise DomainError(f"Scale exponent must be an integer, got {a}")
        if int(base) != base or base < 2:
            raise DomainError(f"Scale base must be an integer >= 2, got {base}")
        self.a = int(a)
        self.t = to_fraction(t)
        self.base = int(base)

    def __repr__(self):
        return f"Placement(a={self.a}, t={fraction_str(self.t)}, m={self.base})"

    def __eq__(self, other):
        if not isinstance(other, Placement):
            return NotImplemented
        return (self.a, self.t, self.base) == (other.a, other.t, other.base)

    def __hash__(self):
        return hash(("placement", self.a, self.t, self.base))

    def __lt__(self, other):
        if not isinstance(other, Placement):
            raise ModeMismatchError(f"Cannot order {self!r} against {other!r}")
        return self.key < other.key

    @property
    def key(self):
        return (self.a, self.t)

    @property
    def scale(self):
        return Fraction(self.base) ** self.a

    def _check(self, other):
        if not isinstance(other, Placement):
            raise ModeMismatchError(f"Cannot compose {self!r} with {other!r}")
        if other.base != self.base:
            raise ModeMismatchError(
                f"Placements use different bases ({self.base} and {other.base})"
            )

    def is_identity(self):
        return self.a == 0 and self.t == 0

    def apply_point(self, x, y):
        lam = self.scale
        return lam * x + self.t, lam * y

    def apply_rect(self, rect):
        a, b, c, d = rect
        lam = self.scale
        return lam * a + self.t, lam * b + self.t, lam * c, lam * d

    def compose(self, other):
        """self o other: z -> m**a1 (m**a2 z + t2) + t1."""
        self._check(other)
        return Placement(self.a + other.a, self.scale * other.t + self.t, self.base)

    def inverse(self):
        return Placement(-self.a, -self.t / self.scale, self.base)

    def to_dict(self):
        return {"a": self.a, "t": fraction_str(self.t), "m": self.base}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["a"]), Fraction(d["t"]), int(d.get("m", 2)))


class Translation(Serialiser):
    """Euclidean translation (x, y) -> (x + tx, y + ty)."""

    mode = "euclidean"

    __slots__ = ("tx", "ty")

    def __init__(self, tx=0, ty=0):
        self.tx = to_fraction(tx)
        self.ty = to_fraction(ty)

    def __repr__(self):
        return f"Translation({fraction_str(self.tx)}, {fraction_str(self.ty)})"

    def __eq__(self, other):
        if not isinstance(other, Translation):
            return NotImplemented
        return (self.tx, self.ty) == (other.tx, other.ty)

    def __hash__(self):
        return hash(("translation", self.tx, self.ty))

    def __lt__(self, other):
        if not isinstance(other, Translation):
            raise ModeMismatchError(f"Cannot order {self!r} against {other!r}")
        return self.key < other.key

    @property
    def key(self):
        return (self.tx, self.ty)

    def is_identity(self):
        return self.tx == 0 and self.ty == 0

    def apply_point(self, x, y):
        return x + self.tx, y + self.ty

    def apply_rect(self, rect):
        a, b, c, d = rect
        return a + self.tx, b + self.tx, c + self.ty, d + self.ty

    def compose(self, other):
        if not isinstance(other, Translation):
            raise ModeMismatchError(f"Cannot compose {self!r} with {other!r}")
        return Translation(self.tx + other.tx, self.ty + other.ty)

    def inverse(self):
        return Translation(-self.tx, -self.ty)

    def to_dict(self):
        return {"tx": fraction_str(self.tx), "ty": fraction_str(self.ty)}

    @classmethod
    def from_dict(cls, d):
        return cls(Fraction(d["tx"]), Fraction(d["ty"]))


def placement_from_dict(d):
    if "a" in d:
        return Placement.from_dict(d)
    if "tx" in d:
        return Translation.from_dict(d)
    raise ValueError(f"Not a placement record: {d!r}")


def identity_for(body):
    """Identity placement in the body's group."""
    if body.mode == "euclidean":
        return Translation()
    return Placement(0, 0, body.m)


class GroupNorm(Serialiser):
    """Size function rho on placements; d_G(g, h) = rho(g^-1 o h) is left-invariant.

    kind="gauge" is the weighted word length for the generators s (z -> m z,
    weight w_scale log m per letter) and the translations (weight w_trans per
    unit moved). A translation by c can be made at level L as s^L o (z + c m**-L)
    o s^-L, so

        rho(a, t) = min over k >= 0 of
            w_scale (|a| + 2k) log m + w_trans |t| m**-(max(0, a) + k)

    This is an infimum over words, hence symmetric and subadditive, and d_G is
    a metric. kind="orbit" is the hyperbolic distance moved by i,
    acosh(1 + (t**2 + (lam - 1)**2) / (2 lam)); it has no free weights, so only
    w_scale = w_trans = 1 is accepted. Translations use w_trans times their
    Euclidean length.
    """

    KINDS = ("gauge", "orbit")

    def __init__(self, w_scale=1.0, w_trans=1.0, kind="gauge"):
        if not (w_scale > 0 and w_trans > 0):
            raise DomainError("Group norm weights must be positive")
        if kind not in self.KINDS:
            raise ValueError(f"Expected kind in {self.KINDS}, got {kind!r}")
        if kind == "orbit" and (w_scale != 1 or w_trans != 1):
            raise DomainError("The orbit norm is unweighted; w_scale and w_trans must be 1")
        self.w_scale = w_scale
        self.w_trans = w_trans
        self.kind = kind

    def __repr__(self):
        return f"GroupNorm(w_scale={self.w_scale}, w_trans={self.w_trans}, kind={self.kind!r})"

    def _word_cost(self, g, k):
        level = max(0, g.a) + k
        shift = abs(g.t) / Fraction(g.base) ** level
        return (
            float(self.w_scale) * (abs(g.a) + 2 * k) * math.log(g.base)
            + float(self.w_trans) * float(shift)
        )

    def rho(self, g):
        if isinstance(g, Translation):
            return float(self.w_trans) * math.hypot(float(g.tx), float(g.ty))
        if not isinstance(g, Placement):
            raise TypeError(f"Expected a placement, got {type(g).__name__}")
        if self.kind == "orbit":
            lam = g.scale
            argument = 1 + (g.t ** 2 + (lam - 1) ** 2) / (2 * lam)
            return math.acosh(float(argument))
        # cost is convex in k
        k = 0
        best = self._word_cost(g, 0)
        while g.t:
            cost = self._word_cost(g, k + 1)
            if cost >= best:
                break
            best, k = cost, k + 1
        return best

    def distance(self, g, h):
        return self.rho(g.inverse().compose(h))

    def to_dict(self):
        return {
            "w_scale": number_to_json(self.w_scale),
            "w_trans": number_to_json(self.w_trans),
            "kind": self.kind,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            number_from_json(d["w_scale"]),
            number_from_json(d["w_trans"]),
            d.get("kind", "gauge"),
        )


class Body(Serialiser):
    """A body: a connected rectilinear region plus its construction record.

    Attributes:
        region (RectRegion): The body itself, normalized.
        m (int): Scale base of the hyperbolic construction (None in Euclidean mode).
        delta (Fraction): Pocket margin.
        delta_prime (Fraction): Half-width of the small pockets.
        pieces (dict): Named auxiliary regions (R, P, P', R', Q0, ...).
        epsilon (Fraction): Target density, when the body was built for one.
        name (str): Label used in reports.
    """

    symmetry = "trivial"

    def __init__(
        self,
        region,
        m=None,
        delta=None,
        delta_prime=None,
        pieces=None,
        epsilon=None,
        name="K",
    ):
        self.region = region.normalize()
        self.m = m
        self.delta = delta
        self.delta_prime = delta_prime
        self.pieces = pieces if pieces else {}
        self.epsilon = epsilon
        self.name = name

    def __repr__(self):
        if self.m is None:
            return f"Body({self.name}, {self.mode})"
        return (
            f"Body({self.name}, m={self.m}, delta={fraction_str(self.delta)},"
            f" delta_prime={fraction_str(self.delta_prime)})"
        )

    def __eq__(self, other):
        if not isinstance(other, Body):
            return NotImplemented
        return self.region == other.region and self.m == other.m

    def __hash__(self):
        return hash((self.region, self.m))

    @property
    def mode(self):
        return self.region.mode

    @property
    def area(self):
        return self.region.area()

    @classmethod
    def unit_square(cls):
        """The Euclidean reference body [0, 1]^2."""
        return cls(RectRegion.rectangle(0, 1, 0, 1, mode="euclidean"), name="unit-square")

    @classmethod
    def from_region(cls, region, name="custom"):
        return cls(region, name=name)

    def to_dict(self):
        return {
            "name": self.name,
            "mode": self.mode,
            "symmetry": self.symmetry,
            "m": self.m,
            "delta": None if self.delta is None else fraction_str(self.delta),
            "delta_prime": None if self.delta_prime is None else fraction_str(self.delta_prime),
            "epsilon": None if self.epsilon is None else fraction_str(self.epsilon),
            "region": self.region.to_dict(),
            "area": fraction_str(self.area),
            "pieces": {name: piece.to_dict() for name, piece in self.pieces.items()},
        }

    @classmethod
    def from_dict(cls, d):
        def rational(key):
            return None if d.get(key) is None else Fraction(d[key])

        return cls(
            RectRegion.from_dict(d["region"]),
            m=d.get("m"),
            delta=rational("delta"),
            delta_prime=rational("delta_prime"),
            pieces={
                name: RectRegion.from_dict(piece)
                for name, piece in d.get("pieces", {}).items()
            },
            epsilon=rational("epsilon"),
            name=d.get("name", "K"),
        )


class PackingWindow(Serialiser):
    """Finite set of placed copies of one body, seen through a window.

    Attributes:
        body (Body): The body being placed.
        placements (list): Placement or Translation objects (duplicates allowed,
            so stacked coverings are representable; is_packing rejects them).
        window (RectRegion): Region where the configuration is known.
            Defaults to the union of the copies.
        kind (str): 'packing' or 'covering-candidate'.
        radius (float): Group-norm radius within which the placement list is
            complete, or None.
    """

    KINDS = ("packing", "covering-candidate")

    def __init__(self, body, placements=None, window=None, kind="packing", radius=None):
        if kind not in self.KINDS:
            raise ValueError(f"Expected kind in {self.KINDS}, got {kind!r}")
        self.body = body
        self.placements = list(placements) if placements else []
        for g in self.placements:
            if g.mode != body.mode:
                raise ModeMismatchError(
                    f"A {g.mode} placement cannot place a {body.mode} body"
                )
            if body.m is not None and g.mode == "hyperbolic" and g.base != body.m:
                raise ModeMismatchError(
                    f"Placement base {g.base} does not match body scale m={body.m}"
                )
        self.kind = kind
        self.radius = radius
        self._copies = None
        self.window = window if window is not None else self.region()
        if self.window.mode != body.mode:
            raise ModeMismatchError("Window and body modes differ")

    def __repr__(self):
        return f"PackingWindow({self.body!r}, {len(self.placements)} placements, {self.kind})"

    def __len__(self):
        return len(self.placements)

    def __iter__(self):
        return iter(self.placements)

    @property
    def mode(self):
        return self.body.mode

    def copies(self):
        """Transformed body regions, in placement order."""
        if self._copies is None:
            self._copies = [self.body.region.transform(g) for g in self.placements]
        return self._copies

    def region(self):
        """c(P): the union of all placed copies."""
        return union_all(self.copies(), self.body.mode)

    def replace(self, placements, **kwargs):
        """New window over the same body with a different placement list."""
        kwargs.setdefault("window", self.window)
        kwargs.setdefault("kind", self.kind)
        return PackingWindow(self.body, placements, **kwargs)

    def to_dict(self):
        return {
            "schema": settings.SCHEMA,
            "kind": self.kind,
            "mode": self.mode,
            "radius": number_to_json(self.radius),
            "body": self.body.to_dict(),
            "placements": [g.to_dict() for g in self.placements],
            "window": self.window.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            Body.from_dict(d["body"]),
            [placement_from_dict(g) for g in d.get("placements", [])],
            window=RectRegion.from_dict(d["window"]) if d.get("window") else None,
            kind=d.get("kind", "packing"),
            radius=number_from_json(d.get("radius")),
        )


class DensityReport(Serialiser):
    """Density estimate or bound with its method and provenance.

    Attributes:
        value: Exact Fraction or float.
        method (str): exact-cell, ball-limit, bound-chain or ratio.
        error (float): Error estimate (0 for exact values).
        radii (list): Radii of a ball sweep.
        partials (list): Value at each radius.
        details (dict): Method-specific extras (pieces, steps, fitted constants).
        provenance (dict): Inputs needed to reproduce the number.
    """

    METHODS = ("exact-cell", "ball-limit", "bound-chain", "ratio")

    def __init__(
        self,
        value,
        method,
        error=0,
        radii=None,
        partials=None,
        details=None,
        provenance=None,
        numeric=None,
    ):
        if method not in self.METHODS:
            raise ValueError(f"Expected method in {self.METHODS}, got {method!r}")
        self.value = value
        self.method = method
        self.error = error
        self.radii = radii if radii else []
        self.partials = partials if partials else []
        self.details = details if details else {}
        self.provenance = provenance if provenance else {}
        if numeric is None:
            numeric = "exact" if isinstance(value, (int, Fraction)) else "integrated"
        self.numeric = numeric

    def __repr__(self):
        return f"DensityReport({self.method}: {self.value} +/- {self.error})"

    def to_dict(self):
        return {
            "schema": settings.SCHEMA,
            "value": number_to_json(self.value),
            "method": self.method,
            "numeric": self.numeric,
            "error": number_to_json(self.error),
            "radii": jsonable(self.radii),
            "partials": jsonable(self.partials),
            "details": jsonable(self.details),
            "provenance": jsonable(self.provenance),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            number_from_json(d["value"]),
            d["method"],
            error=number_from_json(d.get("error", 0)),
            radii=[number_from_json(r) for r in d.get("radii", [])],
            partials=[number_from_json(v) for v in d.get("partials", [])],
            details=d.get("details"),
            provenance=d.get("provenance"),
            numeric=d.get("numeric"),
        )
