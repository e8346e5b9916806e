"""Unit tangent vectors as frames, the geodesic and horocyclic flows, and
the distances d1 and d2 on the unit tangent bundle.

A vector is stored as the unique isometry carrying the reference vector
(basepoint i, pointing up to oo) onto it.  Flows and the isometry action
are then exact matrix products; only point evaluation rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .plane import BoundaryPoint, HPoint, INFINITY
from . import hplane, moebius
from .hplane import Geodesic, dist, geodesic_through
from .moebius import IDENTITY, MoebiusMap

__all__ = [
    "UnitVector",
    "AnglePair",
    "U0",
    "frame_from",
    "geodesic_flow",
    "horocycle_flow",
    "apply_isometry",
    "rotate",
    "d1",
    "d2",
    "angle_pair",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, slots=True)
class UnitVector:
    """A unit tangent vector, identified with its frame g: this vector is
    the image of the reference vector under g."""

    frame: MoebiusMap

    def basepoint(self) -> HPoint:
        return moebius.apply_point(self.frame, HPoint(0.0, 1.0))

    def forward(self) -> BoundaryPoint:
        return moebius.apply_boundary(self.frame, INFINITY)

    def backward(self) -> BoundaryPoint:
        return moebius.apply_boundary(self.frame, BoundaryPoint(0.0))

    def point_at(self, t: float) -> HPoint:
        """Point at time t along the vector's unit-speed geodesic."""
        return moebius.apply_point(self.frame, HPoint(0.0, math.exp(t)))

    def geodesic(self) -> Geodesic:
        return Geodesic(self.backward(), self.forward())

    def direction_angle(self) -> float:
        """Euclidean angle of the vector at its basepoint, in [0, 2 pi).

        The model is conformal, so Euclidean and hyperbolic angles agree.
        The tangent direction is g'(i) * i = i / (c i + d)^2.
        """
        c, d = self.frame.c, self.frame.d
        w = complex(d * d - c * c, 2.0 * c * d)  # (c i + d)^2
        return math.atan2((1j / w).imag, (1j / w).real) % TWO_PI


U0 = UnitVector(IDENTITY)


def frame_from(base: HPoint, forward: BoundaryPoint) -> UnitVector:
    """The unique vector with the given basepoint and forward endpoint."""
    if forward.is_infinity:
        s = math.sqrt(base.y)
        return UnitVector(MoebiusMap(s, base.x / s, 0.0, 1.0 / s))
    f = forward.x
    d = (f - base.x) / base.y
    b = f * d - base.y * (d * d + 1.0)
    s = math.sqrt(base.y * (d * d + 1.0))  # sqrt of the determinant f d - b
    return UnitVector(MoebiusMap(f / s, b / s, 1.0 / s, d / s))


def geodesic_flow(u: UnitVector, t: float) -> UnitVector:
    """Move time t along the vector's geodesic; forward endpoint unchanged."""
    h = math.exp(t / 2.0)
    return UnitVector(moebius.compose(u.frame, MoebiusMap(h, 0.0, 0.0, 1.0 / h)))


def horocycle_flow(u: UnitVector, s: float) -> UnitVector:
    """Move signed arc length s along the horocycle centered at the forward
    endpoint; positive s moves the reference vector in the +x direction."""
    return UnitVector(moebius.compose(u.frame, MoebiusMap(1.0, s, 0.0, 1.0)))


def apply_isometry(g: MoebiusMap, u: UnitVector) -> UnitVector:
    """The isometry action on vectors; commutes with both flows."""
    return UnitVector(moebius.compose(g, u.frame))


def rotate(u: UnitVector, theta: float) -> UnitVector:
    """Rotate the vector by angle theta about its basepoint."""
    ch = math.cos(theta / 2.0)
    sh = math.sin(theta / 2.0)
    return UnitVector(moebius.compose(u.frame, MoebiusMap(ch, sh, -sh, ch)))


def d1(v: UnitVector, w: UnitVector) -> float:
    """Basepoint distance plus time-one point distance."""
    return dist(v.basepoint(), w.basepoint()) + dist(v.point_at(1.0), w.point_at(1.0))


@dataclass(frozen=True, slots=True)
class AnglePair:
    """Angles of two vectors against the connecting geodesic, in [0, 2 pi).

    alpha is measured at the first basepoint against the connecting ray,
    beta at the second basepoint against the same ray transported there.
    """

    alpha: float
    beta: float


def _forward_beyond(base: HPoint, through: HPoint) -> BoundaryPoint:
    # Endpoint of the ray from base through the second point.
    geo = geodesic_through(base, through)
    if geo.is_vertical:
        return INFINITY if through.y > base.y else BoundaryPoint(base.x)
    m = 0.5 * (geo.e1.x + geo.e2.x)
    tb = math.atan2(base.y, base.x - m)
    tt = math.atan2(through.y, through.x - m)
    return geo.e2 if tt < tb else geo.e1


def connecting_vector(v: UnitVector, w: UnitVector) -> UnitVector:
    """Unit vector at v's basepoint pointing along the geodesic toward w's."""
    return frame_from(v.basepoint(), _forward_beyond(v.basepoint(), w.basepoint()))


def angle_pair(v: UnitVector, w: UnitVector) -> AnglePair:
    """The two oriented angles entering d2; basepoints must differ."""
    c = connecting_vector(v, w)
    s = dist(v.basepoint(), w.basepoint())
    c_at_w = geodesic_flow(c, s)
    alpha = (v.direction_angle() - c.direction_angle()) % TWO_PI
    beta = (w.direction_angle() - c_at_w.direction_angle()) % TWO_PI
    return AnglePair(alpha, beta)


def _circular_gap(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def d2(v: UnitVector, w: UnitVector) -> float:
    """Basepoint distance plus angle discrepancy along the connecting
    geodesic; a working proxy for the Sasaki distance.

    The angle term is the circular gap between the two oriented angles of
    ``angle_pair``; with coincident basepoints it degenerates to the angle
    between the two directions, the continuous limit of the general case.
    """
    pv, pw = v.basepoint(), w.basepoint()
    if pv == pw:
        return _circular_gap(v.direction_angle(), w.direction_angle())
    pair = angle_pair(v, w)
    return dist(pv, pw) + _circular_gap(pair.alpha, pair.beta)
