"""Construction and certification of nested families of short hyperbolic
isometries whose axes all cross the reference vertical ray.

The generators have symmetric axes (-A_n, A_n) with prescribed translation
lengths; the scale recurrence forces the isometric-circle traces on the
boundary to be pairwise disjoint, which is a checkable ping-pong witness
for discreteness and freeness of the generated group.  Short geodesics
have enormous isometric circles, so the scales grow roughly like
margin * 16 / (l_n * l_{n+1}) per level; depth is capped before the
products downstream would overflow binary64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .plane import BoundaryPoint, HPoint
from .hplane import DEFAULT_TOL, Geodesic, Tolerances, cross_time, dist
from .moebius import (
    AxisData,
    MoebiusMap,
    NotHyperbolicError,
    apply_boundary,
    apply_point,
    axis_data,
    compose,
    hyperbolic_from_axis,
    inverse,
)
from .tangent import U0

__all__ = [
    "NestedSpec",
    "NestedSequence",
    "ValidationReport",
    "CertReport",
    "DepthOverflowError",
    "SpecInvalidError",
    "default_lengths",
    "build_nested",
    "validate_nested",
    "certify_schottky",
]

# Headroom before binary64 overflow in downstream prefix products.
MAX_SCALE = 2.0**900


class DepthOverflowError(ValueError):
    """Raised when the scale recurrence would exceed the binary64 budget."""


class SpecInvalidError(ValueError):
    """Raised for inconsistent construction parameters."""


def default_lengths(depth: int) -> list[float]:
    """Translation lengths 2^-(2n+3): 1/8, 1/32, 1/128, ..."""
    return [2.0 ** -(2 * n + 3) for n in range(depth)]


@dataclass(frozen=True, slots=True)
class NestedSpec:
    """Parameters of the construction.

    depth        number of generators
    lengths      strictly decreasing positive translation lengths;
                 None picks the 2^-(2n+3) schedule
    first_scale  A_0 > 1, so the first axis crosses the ray at positive time
    margin       interval-separation safety factor (>= 1)
    """

    depth: int = 3
    lengths: tuple[float, ...] | None = None
    first_scale: float = math.e
    margin: float = 4.0

    def resolved_lengths(self) -> list[float]:
        return list(self.lengths) if self.lengths is not None else default_lengths(self.depth)

    def validate(self) -> None:
        if self.depth < 1:
            raise SpecInvalidError("depth must be at least 1")
        ls = self.resolved_lengths()
        if len(ls) != self.depth:
            raise SpecInvalidError(f"expected {self.depth} lengths, got {len(ls)}")
        if any(l <= 0 for l in ls) or any(a <= b for a, b in zip(ls, ls[1:])):
            raise SpecInvalidError("lengths must be positive and strictly decreasing")
        if not self.first_scale > 1.0:
            raise SpecInvalidError("first_scale must exceed 1")
        if not self.margin >= 1.0:
            raise SpecInvalidError("margin must be at least 1")


Interval = tuple[float, float]


@dataclass(frozen=True, slots=True)
class NestedSequence:
    """Generators with cached axes, ray-crossing times, and ping-pong data.

    ``intervals[n]`` is the pair (I_n^-, I_n^+) of boundary intervals
    traced by the isometric circles of the n-th generator and its inverse.
    """

    gens: list[MoebiusMap]
    axes: list[AxisData]
    t: list[float]
    intervals: list[tuple[Interval, Interval]]

    def __len__(self) -> int:
        return len(self.gens)

    @property
    def lengths(self) -> list[float]:
        return [ax.length for ax in self.axes]

    @property
    def scales(self) -> list[float]:
        """Attracting fixed points; equal to A_n for the symmetric build."""
        return [ax.plus.x for ax in self.axes]


def _pingpong_intervals(scale: float, length: float) -> tuple[Interval, Interval]:
    # Isometric-circle trace of a map with axis (-A, A): [A tanh(l/4), A coth(l/4)],
    # mirrored for the inverse.
    lo = scale * math.tanh(length / 4.0)
    hi = scale / math.tanh(length / 4.0)
    return ((-hi, -lo), (lo, hi))


def build_nested(spec: NestedSpec) -> NestedSequence:
    """Build the symmetric-axis family for the given parameters.

    Scales follow A_{n+1} = margin * A_n * coth(l_n/4) / tanh(l_{n+1}/4),
    which separates consecutive interval pairs by the margin factor; the
    ray-crossing times are then exactly log A_n.
    """
    spec.validate()
    lengths = spec.resolved_lengths()

    scales = [float(spec.first_scale)]
    for n in range(spec.depth - 1):
        growth = spec.margin / (math.tanh(lengths[n] / 4.0) * math.tanh(lengths[n + 1] / 4.0))
        scales.append(scales[-1] * growth)
    if any(a > MAX_SCALE for a in scales):
        raise DepthOverflowError(
            f"scale {max(scales):.3e} exceeds the 2^900 budget at depth {spec.depth}"
        )

    gens = []
    axes = []
    intervals = []
    for a, l in zip(scales, lengths):
        minus, plus = BoundaryPoint(-a), BoundaryPoint(a)
        gens.append(hyperbolic_from_axis(minus, plus, l))
        axes.append(AxisData(minus=minus, plus=plus, length=l))
        intervals.append(_pingpong_intervals(a, l))
    return NestedSequence(
        gens=gens,
        axes=axes,
        t=[math.log(a) for a in scales],
        intervals=intervals,
    )


@dataclass(frozen=True, slots=True)
class ValidationReport:
    """Outcome of the nestedness checks, one flag per condition.

    The two growth flags are the finite-depth proxies for the escape of
    the crossing times and of the fixed points.  Length deviations compare
    the translation lengths recomputed from the matrices against the
    stored ones; they degrade with scale and are reported, not judged.
    """

    plus_increasing: bool
    minus_decreasing: bool
    lengths_decreasing: bool
    crossings_ok: bool
    crossing_times: list[float]
    t_increasing: bool
    reach_increasing: bool
    max_length_dev: float
    max_length_rel_dev: float
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_nested(seq: NestedSequence, tol: Tolerances = DEFAULT_TOL) -> ValidationReport:
    """Check the nestedness conditions from the generator matrices.

    Endpoints and lengths are recomputed from the matrices, so hand-built
    violations are caught regardless of what the cached axes claim.
    """
    failures: list[str] = []
    try:
        recomputed = [axis_data(g) for g in seq.gens]
    except NotHyperbolicError:
        # Lengths below ~2^-14 push the trace inside the parabolic
        # classification band; the axis is then undefined by contract.
        return ValidationReport(
            plus_increasing=False,
            minus_decreasing=False,
            lengths_decreasing=False,
            crossings_ok=False,
            crossing_times=[],
            t_increasing=False,
            reach_increasing=False,
            max_length_dev=math.inf,
            max_length_rel_dev=math.inf,
            failures=["a generator is not classifiably hyperbolic"],
        )
    plus = [d.plus.x if not d.plus.is_infinity else math.inf for d in recomputed]
    minus = [d.minus.x if not d.minus.is_infinity else math.inf for d in recomputed]

    plus_inc = all(p > 0 for p in plus) and all(a < b for a, b in zip(plus, plus[1:]))
    if not plus_inc:
        failures.append("attracting fixed points not increasing in R+")
    minus_dec = all(m < 0 for m in minus) and all(a > b for a, b in zip(minus, minus[1:]))
    if not minus_dec:
        failures.append("repelling fixed points not decreasing in R-")

    stored = seq.lengths
    lens = [d.length for d in recomputed]
    lens_dec = all(l > 0 for l in stored) and all(a > b for a, b in zip(stored, stored[1:]))
    if not lens_dec:
        failures.append("translation lengths not strictly decreasing")

    crossing_times: list[float] = []
    crossings_ok = True
    for n, d in enumerate(recomputed):
        t = cross_time(U0, Geodesic(d.minus, d.plus))
        straddles = (not d.minus.is_infinity and not d.plus.is_infinity
                     and d.minus.x * d.plus.x < 0)
        if t is None or t <= 0.0 or not straddles:
            crossings_ok = False
            crossing_times.append(math.nan)
            continue
        crossing_times.append(t)
        if abs(t - seq.t[n]) > tol.eq * max(1.0, abs(seq.t[n])):
            crossings_ok = False
    if not crossings_ok:
        failures.append("axes do not cross the reference ray as cached")

    t_inc = all(a < b for a, b in zip(seq.t, seq.t[1:]))
    if not t_inc:
        failures.append("crossing times not increasing")
    reach = [min(p, abs(m)) for p, m in zip(plus, minus)]
    reach_inc = all(a < b for a, b in zip(reach, reach[1:]))
    if not reach_inc:
        failures.append("fixed-point reach not increasing")

    devs = [abs(a - b) for a, b in zip(lens, stored)]
    rel_devs = [d / b if b > 0 else math.inf for d, b in zip(devs, stored)]
    return ValidationReport(
        plus_increasing=plus_inc,
        minus_decreasing=minus_dec,
        lengths_decreasing=lens_dec,
        crossings_ok=crossings_ok,
        crossing_times=crossing_times,
        t_increasing=t_inc,
        reach_increasing=reach_inc,
        max_length_dev=max(devs),
        max_length_rel_dev=max(rel_devs),
        failures=failures,
    )


@dataclass(frozen=True, slots=True)
class CertReport:
    """Ping-pong certificate for discreteness of the generated group.

    disjoint    the 2 N closed boundary intervals are pairwise disjoint
    min_gap     smallest gap between consecutive intervals (negative
                when they overlap)
    mapping_ok  sampled boundary points outside I_n^- land in I_n^+
                under the n-th generator, and symmetrically for inverses
    word_check  smallest displacement of the point i under nontrivial
                reduced words; bounded away from zero witnesses freeness
    """

    disjoint: bool
    min_gap: float
    mapping_ok: bool
    word_check: float

    def ok(self, displacement_floor: float = 1e-6) -> bool:
        return self.disjoint and self.mapping_ok and self.word_check >= displacement_floor


def _reduced_words(n_gens: int, max_len: int):
    # Letters 2k and 2k+1 are generator k and its inverse.
    letters = list(range(2 * n_gens))
    stack = [[l] for l in letters]
    while stack:
        w = stack.pop()
        yield w
        if len(w) < max_len:
            for l in letters:
                if l ^ 1 != w[-1]:
                    stack.append(w + [l])


def certify_schottky(seq: NestedSequence, max_word_len: int = 4) -> CertReport:
    """Certify interval disjointness, the ping-pong mapping property on
    sampled boundary points, and word displacements at the basepoint i.

    Words use at most the first four generators; deeper generators have
    strictly larger intervals and add nothing to the witness.
    """
    flat: list[Interval] = [iv for pair in seq.intervals for iv in pair]
    flat.sort()
    min_gap = math.inf
    disjoint = True
    for (lo1, hi1), (lo2, hi2) in zip(flat, flat[1:]):
        gap = lo2 - hi1
        min_gap = min(min_gap, gap)
        if gap <= 0:
            disjoint = False

    mapping_ok = True
    n = len(seq)
    sample = [BoundaryPoint(0.0), BoundaryPoint(None)]
    for lo, hi in flat:
        sample.append(BoundaryPoint(0.5 * (lo + hi)))
        sample.append(BoundaryPoint(math.copysign(1.0, lo) * math.sqrt(abs(lo * hi))))
    for k in range(n):
        (mlo, mhi), (plo, phi) = seq.intervals[k]
        g, ginv = seq.gens[k], inverse(seq.gens[k])
        for pt in sample:
            if pt.is_infinity or not (mlo <= pt.x <= mhi):
                img = apply_boundary(g, pt)
                if img.is_infinity or not _inside(img.x, plo, phi):
                    mapping_ok = False
            if pt.is_infinity or not (plo <= pt.x <= phi):
                img = apply_boundary(ginv, pt)
                if img.is_infinity or not _inside(img.x, mlo, mhi):
                    mapping_ok = False

    m = min(n, 4)
    basepoint = HPoint(0.0, 1.0)
    gens_and_invs = []
    for k in range(m):
        gens_and_invs.append(seq.gens[k])
        gens_and_invs.append(inverse(seq.gens[k]))
    word_check = math.inf
    for w in _reduced_words(m, max_word_len):
        mat = gens_and_invs[w[0]]
        for l in w[1:]:
            mat = compose(mat, gens_and_invs[l])
        word_check = min(word_check, dist(apply_point(mat, basepoint), basepoint))

    return CertReport(
        disjoint=disjoint,
        min_gap=min_gap,
        mapping_ok=mapping_ok,
        word_check=word_check,
    )


def _inside(x: float, lo: float, hi: float, rel: float = 1e-9) -> bool:
    pad = rel * max(1.0, abs(lo), abs(hi))
    return lo - pad <= x <= hi + pad
