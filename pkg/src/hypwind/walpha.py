"""Iterated winding along a nested family: prefix products, wound vectors,
accumulated time shifts, the limit vector, and grid verification that the
flowed vectors approach the reference orbit in the quotient.

Numerical strategy: all per-step quantities are computed in pulled-back
coordinates, where the wound vector is a vertical frame and the winding
increments are height ratios.  The pulled-back basepoints follow a one-map
recurrence, so the increments stay accurate at depths where the direct
prefix-product formulas have long lost the difference.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .plane import BoundaryPoint, HPoint, INFINITY
from .hplane import busemann, dist
from .moebius import MoebiusMap, IDENTITY, apply_boundary, apply_point, compose, inverse
from .schottky import NestedSequence
from .tangent import U0, UnitVector, apply_isometry, d1, d2, frame_from, geodesic_flow
from .winding import winding_time

__all__ = [
    "AlphaRun",
    "ConvergenceReport",
    "DiagonalReport",
    "PrecisionLossError",
    "InsufficientDepthError",
    "EmptyCandidatesError",
    "schedule_bound",
    "run_alpha",
    "w_alpha",
    "quotient_d1_upper",
    "quotient_d2_upper",
    "verify_wss",
    "diagonal_avoid",
    "diagonal_margins",
]


class PrecisionLossError(ArithmeticError):
    """Raised when independent routes to the same quantity disagree."""


class InsufficientDepthError(ValueError):
    """Raised when no admissible generator remains for some target."""


class EmptyCandidatesError(ValueError):
    """Raised when a quotient upper bound is requested over no candidates."""


def schedule_bound(n: int) -> float:
    """Admissible translation length at step n: 2^-(2n+3)."""
    return 2.0 ** -(2 * n + 3)


@dataclass(frozen=True, slots=True)
class AlphaRun:
    """Data of an iterated winding run.

    alpha      the picked generators
    lengths    their translation lengths
    beta       prefix products alpha_0 ... alpha_n
    endpoints  x_n = beta_n(oo), a decreasing positive sequence
    v          vectors at i pointing to x_n
    zs         pulled-back basepoints z_n = beta_n^{-1}(i)
    tau_inc    winding-time increments r_{n+1} - r_n
    r          accumulated time shifts
    s          horocycle parameters of the pulled-back flowed vectors
    r_limit    last accumulated shift, the estimate of the limit shift
    tail_bound geometric bound on the remaining shift increments
    """

    pick: list[int]
    alpha: list[MoebiusMap]
    lengths: list[float]
    beta: list[MoebiusMap]
    endpoints: list[float]
    v: list[UnitVector]
    zs: list[HPoint]
    tau_inc: list[float]
    r: list[float]
    s: list[float]
    r_limit: float
    tail_bound: float

    def __len__(self) -> int:
        return len(self.alpha)


_I = HPoint(0.0, 1.0)
# Depth up to which the prefix-product route still resolves r_n.
_DIRECT_CHECK_DEPTH = 3
_DIRECT_CHECK_TOL = 1e-6
_HEIGHT_TOL = 1e-6


def run_alpha(seq: NestedSequence, pick: list[int]) -> AlphaRun:
    """Run the iterated winding construction over the picked generators.

    The increments are winding times of single generators against the
    pulled-back vertical vectors; at shallow depth they are cross-checked
    against the prefix-product formula r_n = -log Im(beta_n^{-1} i), and
    the pulled-back flowed vector must sit at height one.  Either check
    failing raises PrecisionLossError.
    """
    if len(pick) == 0:
        raise IndexError("pick must name at least one generator")
    if any(b <= a for a, b in zip(pick, pick[1:])):
        raise IndexError("pick must be strictly increasing")
    if pick[0] < 0 or pick[-1] >= len(seq):
        raise IndexError(f"pick out of range for depth {len(seq)}")

    alpha = [seq.gens[j] for j in pick]
    lengths = [seq.axes[j].length for j in pick]
    for n, l in enumerate(lengths):
        if l > schedule_bound(n) * (1.0 + 1e-12):
            warnings.warn(
                f"picked length {l:g} at step {n} exceeds the 2^-(2n+3) schedule;"
                " convergence bounds are not guaranteed",
                stacklevel=2,
            )

    beta = [alpha[0]]
    for a in alpha[1:]:
        beta.append(compose(beta[-1], a))

    endpoints = []
    for b in beta:
        e = apply_boundary(b, INFINITY)
        if e.is_infinity:
            raise PrecisionLossError("prefix product sent oo to oo")
        endpoints.append(e.x)
    v = [frame_from(_I, BoundaryPoint(x)) for x in endpoints]

    zs = [apply_point(inverse(alpha[0]), _I)]
    for a in alpha[1:]:
        zs.append(apply_point(inverse(a), zs[-1]))

    r = [winding_time(alpha[0], U0)]
    tau_inc = []
    for n in range(len(alpha) - 1):
        inc = winding_time(alpha[n + 1], frame_from(zs[n], INFINITY))
        tau_inc.append(inc)
        r.append(r[-1] + inc)

    for n in range(min(len(beta), _DIRECT_CHECK_DEPTH + 1)):
        direct = -math.log(apply_point(inverse(beta[n]), _I).y)
        if abs(r[n] - direct) > _DIRECT_CHECK_TOL:
            raise PrecisionLossError(
                f"incremental r_{n} = {r[n]!r} disagrees with direct {direct!r}"
            )

    s = []
    for n, z in enumerate(zs):
        base = geodesic_flow(frame_from(z, INFINITY), r[n]).basepoint()
        if abs(base.y - 1.0) > _HEIGHT_TOL:
            raise PrecisionLossError(
                f"pulled-back flowed vector at step {n} sits at height {base.y!r}, not 1"
            )
        s.append(base.x)

    m = len(alpha)
    return AlphaRun(
        pick=list(pick),
        alpha=alpha,
        lengths=lengths,
        beta=beta,
        endpoints=endpoints,
        v=v,
        zs=zs,
        tau_inc=tau_inc,
        r=r,
        s=s,
        r_limit=r[-1],
        # Geometric tail of the length schedule beyond the last step.
        tail_bound=schedule_bound(m) * 4.0 / 3.0,
    )


def w_alpha(run: AlphaRun) -> UnitVector:
    """Finite-depth estimate of the limit vector: the vector at i pointing
    to the last endpoint, flowed by the accumulated shift.

    Truncation error: the limit shift differs from ``run.r_limit`` by at
    most ``run.tail_bound``, and the limit endpoint lies below the last
    endpoint by no more than the observed endpoint decrements continue to
    shrink (they contract faster than geometrically).
    """
    return geodesic_flow(
        frame_from(_I, BoundaryPoint(run.endpoints[-1])), run.r_limit
    )


def _quotient_min(u: UnitVector, v: UnitVector, candidates, metric):
    if not candidates:
        raise EmptyCandidatesError("need at least one candidate (say, the identity)")
    best = math.inf
    best_ix = -1
    for ix, g in enumerate(candidates):
        val = metric(u, apply_isometry(g, v))
        if val < best:
            best, best_ix = val, ix
    return best, best_ix


def quotient_d1_upper(u: UnitVector, v: UnitVector, candidates: list[MoebiusMap]) -> float:
    """min over candidates g of d1(u, g v): an upper bound for the quotient
    distance, which is all that convergence-to-zero checks need."""
    return _quotient_min(u, v, candidates, d1)[0]


def quotient_d2_upper(u: UnitVector, v: UnitVector, candidates: list[MoebiusMap]) -> float:
    return _quotient_min(u, v, candidates, d2)[0]


@dataclass(frozen=True, slots=True)
class ConvergenceReport:
    """Grid verification that the flowed run vectors approach the flowed
    reference vector in the quotient.

    For each grid time, ``d1_upper`` is the worst candidate-minimized d1
    over all run depths (candidates: identity and the prefix products up
    to that depth); ``w_d1`` is the same for the limit-vector estimate
    with all candidates.  Level l carries the bound 2 * 2^-l, judged for
    t >= T_levels[l]; T_levels comes from the horocycle-decay estimate
    max(3, log(|s_n| (1 + 1/e) 2^l)).  ``first_meet_*`` is the earliest
    grid time from which the corresponding series stays within the level
    bound.
    """

    ts: list[float]
    n_star: list[int]
    d1_upper: list[float]
    d2_upper: list[float]
    w_d1: list[float]
    w_d2: list[float]
    levels: int
    T_levels: list[float]
    first_meet_d1: list[float]
    first_meet_d2: list[float]
    tolerance: float
    passed: bool
    violations: list[tuple[float, int, float]]

    def level_bound(self, level: int) -> float:
        return 2.0 * 2.0**-level

    def rows(self):
        """CSV rows (t, n_star, d1_upper, d2_upper, bound, level)."""
        for level in range(self.levels + 1):
            b = self.level_bound(level)
            for i, t in enumerate(self.ts):
                yield (t, self.n_star[i], self.d1_upper[i], self.d2_upper[i], b, level)


def _first_meet(ts, values, bound, tol):
    # Earliest grid time from which values stay <= bound + tol.
    meet = math.inf
    for t, v in zip(reversed(ts), reversed(values)):
        if v <= bound + tol:
            meet = t
        else:
            break
    return meet


def verify_wss(
    run: AlphaRun, t_max: float, step: float, levels: int, tolerance: float = 1e-6
) -> ConvergenceReport:
    """Verify the quotient-distance decay of the flowed run vectors.

    For every depth n the candidates are the identity and the prefix
    products up to beta_n; the worst candidate-minimized distance over n
    must fall below each level bound from that level's threshold time on.
    The limit-vector estimate is checked the same way against the full
    candidate list.
    """
    if t_max <= 0.0 or not (0.0 < step <= 1.0) or levels < 0:
        raise ValueError("need t_max > 0, step in (0, 1], levels >= 0")
    nsteps = int(math.floor(t_max / step + 1e-9))
    ts = [i * step for i in range(nsteps + 1)]
    depth = len(run)
    candidates = [IDENTITY] + list(run.beta)
    w_vec = w_alpha(run)

    n_star: list[int] = []
    d1_upper: list[float] = []
    d2_upper: list[float] = []
    w_d1: list[float] = []
    w_d2: list[float] = []
    for t in ts:
        ref = geodesic_flow(U0, t)
        worst1 = worst2 = -math.inf
        star = -1
        for n in range(depth):
            moving = geodesic_flow(run.v[n], t + run.r[n])
            cands_n = candidates[: n + 2]
            val1, ix = _quotient_min(moving, ref, cands_n, d1)
            val2, _ = _quotient_min(moving, ref, cands_n, d2)
            worst1 = max(worst1, val1)
            worst2 = max(worst2, val2)
            if n == depth - 1:
                star = ix - 1  # -1 encodes the identity candidate
        n_star.append(star)
        d1_upper.append(worst1)
        d2_upper.append(worst2)
        moving_w = geodesic_flow(w_vec, t)
        w_d1.append(_quotient_min(moving_w, ref, candidates, d1)[0])
        w_d2.append(_quotient_min(moving_w, ref, candidates, d2)[0])

    decay = 1.0 + math.exp(-1.0)
    smax = max(max(abs(x) for x in run.s), 1e-300)
    T_levels = [max(3.0, math.log(smax * decay) + level * math.log(2.0))
                for level in range(levels + 1)]

    passed = True
    violations: list[tuple[float, int, float]] = []
    first_meet_d1: list[float] = []
    first_meet_d2: list[float] = []
    for level in range(levels + 1):
        bound = 2.0 * 2.0**-level
        for i, t in enumerate(ts):
            if t < T_levels[level] - 1e-12:
                continue
            for value in (d1_upper[i], w_d1[i]):
                if value > bound + tolerance:
                    passed = False
                    violations.append((t, level, value))
        first_meet_d1.append(_first_meet(ts, [max(a, b) for a, b in zip(d1_upper, w_d1)],
                                         bound, tolerance))
        first_meet_d2.append(_first_meet(ts, [max(a, b) for a, b in zip(d2_upper, w_d2)],
                                         bound, tolerance))

    return ConvergenceReport(
        ts=ts,
        n_star=n_star,
        d1_upper=d1_upper,
        d2_upper=d2_upper,
        w_d1=w_d1,
        w_d2=w_d2,
        levels=levels,
        T_levels=T_levels,
        first_meet_d1=first_meet_d1,
        first_meet_d2=first_meet_d2,
        tolerance=tolerance,
        passed=passed,
        violations=violations,
    )


@dataclass(frozen=True, slots=True)
class DiagonalReport:
    """Margins of the endpoint-avoidance inequalities.

    pulled_w[n] is the limit endpoint pulled back by the first n picked
    inverses; it must exceed the n-th attracting point (margin_star),
    which in turn must exceed the similarly pulled n-th target
    (margin_target).  All margins positive forces the limit endpoint to
    differ from every target; the raw endpoint gaps are reported too.
    """

    pick: list[int]
    pulled_w: list[float]
    pulled_targets: list[float]
    margins_star: list[float]
    margins_target: list[float]
    endpoint_gaps: list[float]

    @property
    def ok(self) -> bool:
        return all(m > 0 for m in self.margins_star) and all(
            m > 0 for m in self.margins_target
        )


def _pull_boundary(g: MoebiusMap, x: float) -> float:
    img = apply_boundary(inverse(g), BoundaryPoint(x))
    return math.inf if img.is_infinity else img.x


def diagonal_margins(
    seq: NestedSequence, pick: list[int], targets: list[float]
) -> DiagonalReport:
    """Evaluate the avoidance inequalities for a pick against targets.

    Pullbacks are applied one generator at a time; composing the inverse
    prefix first would forfeit the projective robustness of the staged
    route.
    """
    run = run_alpha(seq, pick)
    w_end = run.endpoints[-1]
    plus = [seq.axes[j].plus.x for j in pick]
    k = min(len(targets), len(pick))

    pulled_w = [w_end]
    pulled_t = list(targets[:k])
    margins_star = []
    margins_target = []
    if k > 0:
        margins_star.append(w_end - plus[0])
        margins_target.append(plus[0] - targets[0])
    for n in range(1, k):
        pulled_w.append(_pull_boundary(run.alpha[n - 1], pulled_w[-1]))
        for j in range(n, k):
            pulled_t[j] = _pull_boundary(run.alpha[n - 1], pulled_t[j])
        margins_star.append(pulled_w[n] - plus[n])
        margins_target.append(plus[n] - pulled_t[n])

    return DiagonalReport(
        pick=list(pick),
        pulled_w=pulled_w,
        pulled_targets=pulled_t[:k],
        margins_star=margins_star,
        margins_target=margins_target,
        endpoint_gaps=[abs(w_end - x) for x in targets],
    )


def diagonal_avoid(seq: NestedSequence, targets: list[float]) -> list[int]:
    """Greedily pick generators whose run endpoint avoids every target.

    The n-th pick must respect the length schedule and its attracting
    point must exceed the n-th target pulled back by the previous picks;
    the selection then continues schedule-only through the remaining
    depth.  The resulting margins are verified before returning.
    """
    plus = [ax.plus.x for ax in seq.axes]
    lengths = seq.lengths
    pick: list[int] = []
    pulled = [float(x) for x in targets]
    j = 0
    n = 0
    while j < len(seq):
        needed = None if n >= len(targets) else pulled[n]
        found = None
        while j < len(seq):
            if lengths[j] <= schedule_bound(n) * (1.0 + 1e-12) and (
                needed is None or plus[j] > needed
            ):
                found = j
                break
            j += 1
        if found is None:
            break
        pick.append(found)
        if n < len(targets):
            g = seq.gens[found]
            for m in range(n + 1, len(pulled)):
                pulled[m] = _pull_boundary(g, pulled[m])
        j = found + 1
        n += 1

    if n < len(targets):
        raise InsufficientDepthError(
            f"no admissible generator for target index {n} (depth {len(seq)})"
        )

    report = diagonal_margins(seq, pick, targets)
    if not report.ok:
        raise PrecisionLossError(
            "avoidance inequalities failed numerically for the greedy pick"
        )
    return pick
