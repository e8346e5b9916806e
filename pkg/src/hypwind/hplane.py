"""Distances, geodesics, and Busemann cocycles of the upper half-plane.

Everything here is a pure function over immutable values.  The Busemann
cocycle has a Poisson-kernel closed form; the defining limit survives as
``busemann_oracle`` so the two can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .plane import BoundaryPoint, HPoint, INFINITY
from . import moebius
from .moebius import MoebiusMap

__all__ = [
    "HPoint",
    "Geodesic",
    "Tolerances",
    "DEFAULT_TOL",
    "CoincidentPointsError",
    "dist",
    "geodesic_through",
    "busemann",
    "busemann_oracle",
    "cross_time",
    "dist_to_geodesic",
]


class CoincidentPointsError(ValueError):
    """Raised when a geodesic is requested through a single point."""


@dataclass(frozen=True, slots=True)
class Tolerances:
    """Comparison thresholds used by validators and reports.

    eq       general equality comparisons
    oracle   closed-form versus limit-definition checks
    horizon  truncation time for limit oracles
    """

    eq: float = 1e-9
    oracle: float = 1e-6
    horizon: float = 40.0

    def __post_init__(self):
        if self.eq <= 0 or self.oracle <= 0 or self.horizon <= 0:
            raise ValueError("tolerances must be positive")


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True, slots=True)
class Geodesic:
    """A complete geodesic, stored by its unordered boundary endpoints.

    Canonical order (finite endpoints ascending, infinity last) makes
    equality of geodesics plain equality of the dataclass.
    """

    e1: BoundaryPoint
    e2: BoundaryPoint

    def __post_init__(self):
        a, b = self.e1, self.e2
        if a == b:
            raise ValueError("geodesic endpoints must differ")
        swap = a.is_infinity or (not b.is_infinity and b.x < a.x)
        if swap:
            a, b = b, a
        object.__setattr__(self, "e1", a)
        object.__setattr__(self, "e2", b)

    @property
    def is_vertical(self) -> bool:
        return self.e2.is_infinity


def dist(z: HPoint, w: HPoint) -> float:
    """Hyperbolic distance: sinh^2(d/2) = |z - w|^2 / (4 Im z Im w)."""
    dx = z.x - w.x
    dy = z.y - w.y
    s = math.sqrt((dx * dx + dy * dy) / (4.0 * z.y * w.y))
    return 2.0 * math.asinh(s)


def geodesic_through(z: HPoint, w: HPoint) -> Geodesic:
    """The complete geodesic through two distinct points."""
    if z == w:
        raise CoincidentPointsError("no geodesic through a single point")
    if z.x == w.x:
        return Geodesic(BoundaryPoint(z.x), INFINITY)
    # Semicircle centered on the real axis: equidistant center from z, w.
    m = (z.x * z.x + z.y * z.y - w.x * w.x - w.y * w.y) / (2.0 * (z.x - w.x))
    r = math.hypot(z.x - m, z.y)
    return Geodesic(BoundaryPoint(m - r), BoundaryPoint(m + r))


def busemann(xi: BoundaryPoint, x: HPoint, y: HPoint) -> float:
    """Busemann cocycle based at xi: the asymptotic value of
    d(x, sigma(t)) - d(y, sigma(t)) along any ray sigma to xi.

    Closed form via the Poisson kernel; 1-Lipschitz in each argument and
    additive: B(x, z) = B(x, y) + B(y, z).
    """
    if xi.is_infinity:
        return math.log(y.y / x.y)
    p = xi.x
    nx = (x.x - p) ** 2 + x.y * x.y
    ny = (y.x - p) ** 2 + y.y * y.y
    return math.log((y.y * nx) / (x.y * ny))


def _ray_from_i(xi: BoundaryPoint, t: float) -> HPoint:
    # Point at time t on the unit-speed geodesic ray from i toward xi.
    if xi.is_infinity:
        return HPoint(0.0, math.exp(t))
    p = xi.x
    if p == 0.0:
        return HPoint(0.0, math.exp(-t))
    # g = [[p, -1], [1, p]] / sqrt(p^2 + 1) fixes i and sends oo to p,
    # so g(i e^t) traces the ray.
    h = math.exp(t)
    den = h * h + p * p
    return HPoint(p * (h * h - 1.0) / den, h * (p * p + 1.0) / den)


def busemann_oracle(xi: BoundaryPoint, x: HPoint, y: HPoint, T: float) -> float:
    """Truncated limit definition of the cocycle, anchored on the ray from i.

    Independent of the closed form above; used as its test oracle.  The
    anchor choice is irrelevant in the limit by the cocycle relation.
    """
    if T < 1.0:
        raise ValueError("horizon must be at least 1")
    sigma = _ray_from_i(xi, T)
    return dist(x, sigma) - dist(y, sigma)


def _pullback_endpoint(frame_inv: MoebiusMap, e: BoundaryPoint) -> BoundaryPoint:
    return moebius.apply_boundary(frame_inv, e)


def cross_time(ray, geo: Geodesic, full: bool = False, tangency_eps: float = 1e-12):
    """Time at which the unit-speed ray of ``ray`` meets ``geo``, or None.

    ``ray`` is a frame (MoebiusMap) or anything carrying one in a ``frame``
    attribute; its geodesic is the frame image of the vertical axis.  The
    geodesic is pulled back by the inverse frame to endpoints (p, q); a
    transversal crossing exists iff they straddle 0, at height sqrt(-p q),
    i.e. at time log(-p q)/2.  By default only crossings of the forward ray
    (t >= 0) count; ``full=True`` returns the crossing time of the complete
    geodesic whatever its sign.  Configurations within ``tangency_eps`` of
    tangency are treated as misses.
    """
    frame = getattr(ray, "frame", ray)
    inv = moebius.inverse(frame)
    p = _pullback_endpoint(inv, geo.e1)
    q = _pullback_endpoint(inv, geo.e2)
    if p.is_infinity or q.is_infinity:
        return None
    scale = max(1.0, abs(p.x), abs(q.x))
    if min(abs(p.x), abs(q.x)) <= tangency_eps * scale:
        return None
    if p.x * q.x >= 0.0:
        return None
    t = 0.5 * math.log(-p.x * q.x)
    if not full and t < 0.0:
        return None
    return t


def dist_to_geodesic(z: HPoint, geo: Geodesic) -> float:
    """Hyperbolic distance from a point to a complete geodesic."""
    if geo.is_vertical:
        x0 = geo.e1.x
        return math.asinh(abs(z.x - x0) / z.y)
    # Conjugate the endpoints to (0, oo); then sinh(dist) = |Re w| / Im w.
    p, q = geo.e1.x, geo.e2.x
    f = moebius.MoebiusMap.from_entries(1.0, -p, -1.0, q)
    w = moebius.apply_point(f, z)
    return math.asinh(abs(w.x) / w.y)
