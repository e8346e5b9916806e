"""Orientation-preserving isometries of the hyperbolic plane as projective
2x2 real matrices of determinant one.

Maps are stored with a canonical projective sign (c > 0, or c == 0 and
a > 0) so that equality of isometries is plain entrywise comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .plane import BoundaryPoint, HPoint, INFINITY, boundary_gap

__all__ = [
    "MoebiusMap",
    "BoundaryPoint",
    "IsometryClass",
    "AxisData",
    "IDENTITY",
    "INFINITY",
    "NotHyperbolicError",
    "DegenerateAxisError",
    "compose",
    "inverse",
    "apply_boundary",
    "apply_point",
    "classify",
    "trace",
    "translation_length",
    "axis_data",
    "axis_geodesic_endpoints",
    "hyperbolic_from_axis",
    "boundary_gap",
]

# |trace| - 2 band inside which a map counts as parabolic (or identity).
CLASSIFY_EPS = 1e-9
IDENTITY_EPS = 1e-12


class NotHyperbolicError(ValueError):
    """Raised when an operation needs a hyperbolic map and got another kind."""


class DegenerateAxisError(ValueError):
    """Raised when an axis is requested through coincident endpoints."""


class IsometryClass(Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True, slots=True)
class MoebiusMap:
    """z -> (a z + b) / (c z + d) with a d - b c = 1, canonical sign.

    Entries must already describe a determinant-one matrix; use
    ``from_entries`` to normalize raw data.  The constructor only fixes
    the projective sign.  The determinant is validated with a tolerance
    that widens with the term magnitudes: for products of huge-entry
    matrices the float determinant cancels catastrophically and carries
    no information, while the group structure guarantees it is one.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        if not all(map(math.isfinite, (a, b, c, d))):
            raise ValueError(f"entries must be finite, got {(a, b, c, d)}")
        det = a * d - b * c
        err_scale = (abs(a * d) + abs(b * c)) * 1e-12
        if abs(det - 1.0) > max(1e-9, err_scale):
            raise ValueError(
                f"determinant {det} too far from one; normalize with from_entries"
            )
        if c < 0.0 or (c == 0.0 and a < 0.0):
            a, b, c, d = -a, -b, -c, -d
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @staticmethod
    def from_entries(a: float, b: float, c: float, d: float) -> "MoebiusMap":
        """Normalize an arbitrary positive-determinant matrix to det one."""
        det = a * d - b * c
        if not math.isfinite(det) or det <= 0.0:
            raise ValueError(f"matrix must have positive finite determinant, got {det}")
        s = math.sqrt(det)
        return MoebiusMap(a / s, b / s, c / s, d / s)

    def __call__(self, arg):
        if isinstance(arg, BoundaryPoint):
            return apply_boundary(self, arg)
        return apply_point(self, arg)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return compose(self, other)

    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


IDENTITY = MoebiusMap(1.0, 0.0, 0.0, 1.0)


def compose(g: MoebiusMap, h: MoebiusMap) -> MoebiusMap:
    """Matrix product g*h, renormalized: the isometry z -> g(h(z))."""
    return MoebiusMap(
        g.a * h.a + g.b * h.c,
        g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c,
        g.c * h.b + g.d * h.d,
    )


def inverse(g: MoebiusMap) -> MoebiusMap:
    return MoebiusMap(g.d, -g.b, -g.c, g.a)


def apply_boundary(g: MoebiusMap, xi: BoundaryPoint) -> BoundaryPoint:
    """Extend g to the boundary circle.  Total: poles map to infinity."""
    if xi.is_infinity:
        if g.c == 0.0:
            return INFINITY
        return BoundaryPoint(g.a / g.c)
    num = g.a * xi.x + g.b
    den = g.c * xi.x + g.d
    if den == 0.0:
        return INFINITY
    return BoundaryPoint(num / den)


def apply_point(g: MoebiusMap, z: HPoint) -> HPoint:
    """Apply g to an interior point.  Im g(z) = Im z / |c z + d|^2."""
    dr = g.c * z.x + g.d
    di = g.c * z.y
    sq = dr * dr + di * di
    nr = g.a * z.x + g.b
    ni = g.a * z.y
    return HPoint((nr * dr + ni * di) / sq, z.y / sq)


def trace(g: MoebiusMap) -> float:
    return g.a + g.d


def classify(g: MoebiusMap) -> IsometryClass:
    t = abs(trace(g))
    if t > 2.0 + CLASSIFY_EPS:
        return IsometryClass.HYPERBOLIC
    if t < 2.0 - CLASSIFY_EPS:
        return IsometryClass.ELLIPTIC
    if (
        abs(g.a - 1.0) <= IDENTITY_EPS
        and abs(g.d - 1.0) <= IDENTITY_EPS
        and abs(g.b) <= IDENTITY_EPS
        and abs(g.c) <= IDENTITY_EPS
    ):
        return IsometryClass.IDENTITY
    return IsometryClass.PARABOLIC


def translation_length(g: MoebiusMap) -> float:
    """Displacement along the axis of a hyperbolic map: 2 acosh(|tr|/2)."""
    if classify(g) is not IsometryClass.HYPERBOLIC:
        raise NotHyperbolicError(f"translation length undefined for {classify(g).value}")
    return 2.0 * math.acosh(abs(trace(g)) / 2.0)


@dataclass(frozen=True, slots=True)
class AxisData:
    """Fixed points and translation length of a hyperbolic map.

    ``minus`` is repulsive, ``plus`` attractive; the map translates points
    of the geodesic (minus, plus) by ``length`` toward ``plus``.
    """

    minus: BoundaryPoint
    plus: BoundaryPoint
    length: float


def _inv_derivative_sq(g: MoebiusMap, xi: BoundaryPoint) -> float:
    # 1/|g'(x)| = (c x + d)^2 at finite x; the fixed point is attractive
    # exactly when this exceeds one.
    if xi.is_infinity:
        raise ValueError("use the finite fixed point to discriminate")
    t = g.c * xi.x + g.d
    return t * t


def axis_data(g: MoebiusMap) -> AxisData:
    """Fixed boundary points and translation length of a hyperbolic map.

    The fixed points are the roots of c z^2 + (d - a) z - b = 0, solved with
    the cancellation-free quadratic formula; near-identity maps conjugated
    to huge scales keep meaningful endpoints this way.
    """
    if classify(g) is not IsometryClass.HYPERBOLIC:
        raise NotHyperbolicError("axis exists only for hyperbolic maps")
    length = 2.0 * math.acosh(abs(trace(g)) / 2.0)

    if g.c == 0.0:
        # One fixed point at infinity; z -> a^2 z + a b fixes b/(d - a).
        other = BoundaryPoint(g.b / (g.d - g.a))
        if abs(g.a) > 1.0:
            return AxisData(minus=other, plus=INFINITY, length=length)
        return AxisData(minus=INFINITY, plus=other, length=length)

    B = g.d - g.a
    disc = trace(g) ** 2 - 4.0
    root = math.sqrt(disc)
    q = -0.5 * (B + math.copysign(root, B if B != 0.0 else 1.0))
    # Roots q/c and -b/q; q == 0 cannot happen for hyperbolic maps.
    z1 = BoundaryPoint(q / g.c)
    z2 = BoundaryPoint(-g.b / q)
    if _inv_derivative_sq(g, z1) > 1.0:
        return AxisData(minus=z2, plus=z1, length=length)
    return AxisData(minus=z1, plus=z2, length=length)


def axis_geodesic_endpoints(g: MoebiusMap) -> tuple[BoundaryPoint, BoundaryPoint]:
    data = axis_data(g)
    return data.minus, data.plus


def _to_zero_infinity(p: BoundaryPoint, q: BoundaryPoint) -> MoebiusMap:
    """A positively oriented map sending p -> 0 and q -> oo."""
    if p.is_infinity and q.is_infinity:
        raise DegenerateAxisError("endpoints coincide at infinity")
    if p.is_infinity:
        return MoebiusMap(0.0, -1.0, 1.0, -q.x)
    if q.is_infinity:
        return MoebiusMap(1.0, -p.x, 0.0, 1.0)
    if p.x == q.x:
        raise DegenerateAxisError("coincident finite endpoints")
    if q.x > p.x:
        return MoebiusMap.from_entries(1.0, -p.x, -1.0, q.x)
    return MoebiusMap.from_entries(1.0, -p.x, 1.0, -q.x)


def hyperbolic_from_axis(
    minus: BoundaryPoint, plus: BoundaryPoint, length: float
) -> MoebiusMap:
    """The hyperbolic map translating by ``length`` along (minus, plus).

    Built by conjugating the dilation diag(e^{l/2}, e^{-l/2}) by the map
    sending (minus, plus) to (0, oo); axis_data inverts this within 1e-9.
    """
    if length <= 0.0 or not math.isfinite(length):
        raise ValueError(f"translation length must be positive, got {length}")
    f = _to_zero_infinity(minus, plus)
    h = math.exp(length / 2.0)
    dil = MoebiusMap(h, 0.0, 0.0, 1.0 / h)
    return compose(compose(inverse(f), dil), f)
