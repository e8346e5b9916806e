"""Primitive point types shared by the matrix and plane-geometry modules."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["HPoint", "BoundaryPoint", "INFINITY", "boundary_gap"]


@dataclass(frozen=True, slots=True)
class HPoint:
    """A point x + i y of the upper half-plane, y > 0."""

    x: float
    y: float

    def __post_init__(self):
        if not (self.y > 0.0) or not math.isfinite(self.y) or not math.isfinite(self.x):
            raise ValueError(f"point must have finite coordinates and y > 0, got {self.x}, {self.y}")

    def as_complex(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True, slots=True)
class BoundaryPoint:
    """A point of the boundary circle R u {oo}.

    ``x is None`` encodes the point at infinity; otherwise ``x`` is the
    finite real coordinate.
    """

    x: float | None = None

    @staticmethod
    def real(value: float) -> "BoundaryPoint":
        value = float(value)
        if not math.isfinite(value):
            raise ValueError("finite coordinate required; use INFINITY for oo")
        return BoundaryPoint(value)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self) -> str:
        return "oo" if self.x is None else f"Boundary({self.x!r})"


INFINITY = BoundaryPoint(None)


def boundary_gap(p: BoundaryPoint, q: BoundaryPoint) -> float:
    """Angular gap between two boundary points, in [0, pi].

    The boundary is parametrized by x -> 2 atan(x) with oo at pi; the gap is
    the circle distance of the parameters.  Zero iff the points agree, and
    stays meaningful in the huge-coordinate regime where absolute
    differences do not.
    """
    a = math.pi if p.is_infinity else 2.0 * math.atan(p.x)
    b = math.pi if q.is_infinity else 2.0 * math.atan(q.x)
    d = abs(a - b)
    return min(d, 2.0 * math.pi - d)
