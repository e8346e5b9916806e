"""Winding a geodesic ray around the closed geodesic of a hyperbolic
isometry, the induced time shift, and grid verification of its bounds.

For a ray crossing the axis of g, the wound vector keeps the basepoint and
sends the forward endpoint through g.  The time shift tau is the Busemann
cocycle of g^{-1} at the basepoint, measured from the forward endpoint; it
never exceeds the translation length, and after flowing by tau the wound
vector lands on the horocycle orbit of the g-image of the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .plane import HPoint, boundary_gap
from . import hplane, moebius, tangent
from .hplane import Geodesic, busemann, cross_time, dist
from .moebius import MoebiusMap, NotHyperbolicError
from .tangent import UnitVector, apply_isometry, d1, frame_from, geodesic_flow

__all__ = [
    "WindingResult",
    "KeyBoundReport",
    "RayMissesAxisError",
    "wind",
    "winding_time",
    "horocycle_alignment_check",
    "key_bound_report",
]


class RayMissesAxisError(ValueError):
    """Raised when the forward ray does not cross the axis transversally."""


# Grace below t = 0 for crossings that sit exactly at the basepoint.
_CROSS_GRACE = 1e-9


def _ray_crossing(ray, axis: Geodesic) -> float | None:
    t = cross_time(ray, axis, full=True)
    if t is None or t < -_CROSS_GRACE:
        return None
    return max(t, 0.0)


@dataclass(frozen=True, slots=True)
class WindingResult:
    """Wound vector, its time shift, and the two axis-crossing times.

    ``t_cross`` is the crossing time of the input ray, ``t_cross_wound``
    that of the wound ray; they differ by at most the translation length.
    """

    vector: UnitVector
    tau: float
    t_cross: float
    t_cross_wound: float


def _axis_and_crossing(g: MoebiusMap, u: UnitVector) -> tuple[Geodesic, float]:
    if moebius.classify(g) is not moebius.IsometryClass.HYPERBOLIC:
        raise NotHyperbolicError("winding is defined around hyperbolic isometries")
    data = moebius.axis_data(g)
    axis = Geodesic(data.minus, data.plus)
    t = _ray_crossing(u, axis)
    if t is None:
        raise RayMissesAxisError("forward ray does not cross the axis")
    return axis, t


def winding_time(g: MoebiusMap, u: UnitVector) -> float:
    """Time shift induced by winding u around g's closed geodesic.

    Bounded by the translation length of g in absolute value.
    """
    _axis_and_crossing(g, u)
    return busemann(
        u.forward(),
        moebius.apply_point(moebius.inverse(g), u.basepoint()),
        u.basepoint(),
    )


def wind(g: MoebiusMap, u: UnitVector) -> WindingResult:
    """Wind u around the closed geodesic of g.

    The result keeps u's basepoint and forwards through g; both crossing
    times are measured against g's axis.
    """
    axis, t_cross = _axis_and_crossing(g, u)
    vector = frame_from(u.basepoint(), moebius.apply_boundary(g, u.forward()))
    tau = busemann(
        u.forward(),
        moebius.apply_point(moebius.inverse(g), u.basepoint()),
        u.basepoint(),
    )
    t_wound = _ray_crossing(vector, axis)
    if t_wound is None:
        raise RayMissesAxisError("wound ray does not cross the axis")
    return WindingResult(vector=vector, tau=tau, t_cross=t_cross, t_cross_wound=t_wound)


def horocycle_alignment_check(g: MoebiusMap, u: UnitVector) -> float:
    """Defect of the membership g_tau(wound vector) in the horocycle orbit
    of g applied to u.

    Membership means equal forward endpoints and equal Busemann levels
    there; the defect adds the level mismatch and the angular endpoint
    gap.  Values at roundoff scale (<= 1e-8) certify the alignment.
    """
    res = wind(g, u)
    gu = apply_isometry(g, u)
    xi = gu.forward()
    flowed = geodesic_flow(res.vector, res.tau)
    level = busemann(xi, flowed.basepoint(), gu.basepoint())
    return abs(level) + boundary_gap(flowed.forward(), xi)


@dataclass(frozen=True, slots=True)
class KeyBoundReport:
    """Grid evidence for the eight-lengths winding bound.

    ``min_d1[i]`` is the smaller of the two flow distances at ``grid[i]``
    (wound vector against the input, and against its g-image, both after
    the tau shift).  ``worst_slack`` is the largest excess of that minimum
    over 8 l(g); ``case_slacks`` holds the analogous worst excesses for
    the crossing-window estimates (2 l before and after the crossing, and
    4 l / 4 l / 6 l for the three t regimes).  A scenario with no grid
    point reports None.
    """

    grid: list[float]
    min_d1: list[float]
    worst_slack: float
    case_slacks: dict[str, float | None]
    length: float
    tau: float
    t_cross: float

    def passes(self, tol: float = 1e-8) -> bool:
        if self.worst_slack > tol:
            return False
        return all(s is None or s <= tol for s in self.case_slacks.values())


def _grid(t_max: float, step: float) -> list[float]:
    n = int(math.floor(t_max / step + 1e-9))
    return [i * step for i in range(n + 1)]


def key_bound_report(
    g: MoebiusMap, u: UnitVector, t_max: float, step: float
) -> KeyBoundReport:
    """Evaluate the winding bounds on a time grid over [0, t_max]."""
    if t_max <= 0.0 or not (0.0 < step <= 1.0):
        raise ValueError("need t_max > 0 and step in (0, 1]")
    res = wind(g, u)
    length = moebius.translation_length(g)
    tau, t_c = res.tau, res.t_cross
    v = res.vector

    grid = _grid(t_max, step)
    min_d1: list[float] = []
    worst = -math.inf
    worst_cases: dict[str, float | None] = {
        "case1_2l": None,
        "case2_2l": None,
        "a_4l": None,
        "b_4l": None,
        "c_6l": None,
    }

    def bump(key: str, slack: float) -> None:
        cur = worst_cases[key]
        worst_cases[key] = slack if cur is None else max(cur, slack)

    for t in grid:
        v_shift = geodesic_flow(v, t + tau)
        u_t = geodesic_flow(u, t)
        gu_t = apply_isometry(g, u_t)
        d_same = d1(v_shift, u_t)
        d_moved = d1(v_shift, gu_t)
        m = min(d_same, d_moved)
        min_d1.append(m)
        worst = max(worst, m - 8.0 * length)

        # Unshifted quantities feed the crossing-window estimates.
        v_t = geodesic_flow(v, t)
        if t <= t_c:
            bump("case1_2l", dist(v_t.basepoint(), u_t.basepoint()) - 2.0 * length)
        if t >= t_c:
            bump("case2_2l", dist(v_t.basepoint(), gu_t.basepoint()) - 2.0 * length)
        if t <= t_c - 1.0:
            bump("a_4l", d1(v_t, u_t) - 4.0 * length)
        elif t >= t_c:
            bump("b_4l", d1(v_t, gu_t) - 4.0 * length)
        else:
            bump("c_6l", d1(v_t, u_t) - 6.0 * length)

    return KeyBoundReport(
        grid=grid,
        min_d1=min_d1,
        worst_slack=worst,
        case_slacks=worst_cases,
        length=length,
        tau=tau,
        t_cross=t_c,
    )
