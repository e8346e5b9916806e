"""Seeded randomized verification suites for the quantitative bounds.

Every suite draws an independent random stream per trial, derived from
(seed, suite tag, trial index), so results do not depend on execution
order and identical seeds reproduce identical reports.  A suite's
``worst_slack`` is the largest excess of a measured quantity over its
allowed bound; nonpositive slack everywhere means the suite passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .plane import BoundaryPoint, HPoint, INFINITY
from .hplane import Geodesic, busemann, busemann_oracle, dist, dist_to_geodesic
from .moebius import (
    MoebiusMap,
    apply_boundary,
    apply_point,
    hyperbolic_from_axis,
    translation_length,
)
from .tangent import UnitVector, d1, frame_from, geodesic_flow, horocycle_flow
from .winding import key_bound_report, winding_time

__all__ = ["SuiteResult", "SUITE_NAMES", "run_suite", "run_all_suites"]

# Stable per-suite tags entering the per-trial seed derivation.
_TAGS = {
    "busemann_cocycle": 1,
    "busemann_lipschitz": 2,
    "busemann_oracle": 3,
    "winding_time_bound": 4,
    "key_proposition": 5,
    "displacement_identity": 6,
    "flow_identity": 7,
}

SUITE_NAMES = list(_TAGS)


@dataclass(frozen=True, slots=True)
class SuiteResult:
    suite: str
    trials: int
    worst_slack: float
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _rng(seed: int, tag: int, trial: int) -> np.random.Generator:
    return np.random.default_rng((int(seed), tag, trial))


def _random_point(rng) -> HPoint:
    return HPoint(float(rng.normal(0.0, 3.0)), math.exp(float(rng.uniform(-3.0, 3.0))))


def _random_boundary(rng) -> BoundaryPoint:
    if rng.uniform() < 0.125:
        return INFINITY
    return BoundaryPoint(float(rng.normal(0.0, 5.0)))


def _random_frame(rng) -> UnitVector:
    return frame_from(_random_point(rng), _random_boundary(rng))


def _random_crossing_config(rng, lmin: float, lmax: float):
    """A hyperbolic map and a vector whose forward ray crosses its axis.

    Sampled in the vector's own coordinates (axis endpoints straddling
    the pulled-back vertical ray, crossing strictly above the basepoint),
    then pushed to general position through the frame.  Lengths are
    log-uniform to cover the short-geodesic regime.
    """
    u = _random_frame(rng)
    h = math.exp(float(rng.uniform(0.05, 3.0)))
    ratio = math.exp(float(rng.uniform(-2.0, 2.0)))
    p_hat = BoundaryPoint(-h / math.sqrt(ratio))
    q_hat = BoundaryPoint(h * math.sqrt(ratio))
    p = apply_boundary(u.frame, p_hat)
    q = apply_boundary(u.frame, q_hat)
    ell = math.exp(float(rng.uniform(math.log(lmin), math.log(lmax))))
    return hyperbolic_from_axis(p, q, ell), u


def _summarize(name: str, slacks: list[float]) -> SuiteResult:
    worst = max(slacks)
    return SuiteResult(
        suite=name,
        trials=len(slacks),
        worst_slack=worst,
        violations=sum(1 for s in slacks if s > 0.0),
    )


def suite_busemann_cocycle(seed: int, trials: int, tol: float = 1e-10) -> SuiteResult:
    """|B(x,z) - B(x,y) - B(y,z)| stays at roundoff for random data."""
    slacks = []
    for k in range(trials):
        rng = _rng(seed, _TAGS["busemann_cocycle"], k)
        xi = _random_boundary(rng)
        x, y, z = (_random_point(rng) for _ in range(3))
        defect = abs(busemann(xi, x, z) - busemann(xi, x, y) - busemann(xi, y, z))
        slacks.append(defect - tol)
    return _summarize("busemann_cocycle", slacks)


def suite_busemann_lipschitz(seed: int, trials: int, tol: float = 1e-10) -> SuiteResult:
    """|B(x,y)| never exceeds the distance between the arguments."""
    slacks = []
    for k in range(trials):
        rng = _rng(seed, _TAGS["busemann_lipschitz"], k)
        xi = _random_boundary(rng)
        x, y = _random_point(rng), _random_point(rng)
        slacks.append(abs(busemann(xi, x, y)) - dist(x, y) - tol)
    return _summarize("busemann_lipschitz", slacks)


def suite_busemann_oracle(
    seed: int, trials: int, tol: float = 1e-6, horizon: float = 40.0
) -> SuiteResult:
    """Closed form against the truncated limit definition."""
    slacks = []
    for k in range(trials):
        rng = _rng(seed, _TAGS["busemann_oracle"], k)
        if rng.uniform() < 0.125:
            xi = INFINITY
        else:
            xi = BoundaryPoint(float(rng.uniform(-20.0, 20.0)))
        x = HPoint(float(rng.uniform(-20.0, 20.0)), math.exp(float(rng.uniform(-3.0, 3.0))))
        y = HPoint(float(rng.uniform(-20.0, 20.0)), math.exp(float(rng.uniform(-3.0, 3.0))))
        defect = abs(busemann(xi, x, y) - busemann_oracle(xi, x, y, horizon))
        slacks.append(defect - tol)
    return _summarize("busemann_oracle", slacks)


def suite_winding_time_bound(
    seed: int, trials: int, tol: float = 1e-9, lmin: float = 1e-4, lmax: float = 2.0
) -> SuiteResult:
    """|winding time| <= translation length over crossing configurations."""
    slacks = []
    for k in range(trials):
        rng = _rng(seed, _TAGS["winding_time_bound"], k)
        g, u = _random_crossing_config(rng, lmin, lmax)
        tau = winding_time(g, u)
        slacks.append(abs(tau) - translation_length(g) - tol)
    return _summarize("winding_time_bound", slacks)


def suite_key_proposition(
    seed: int,
    trials: int,
    t_max: float = 20.0,
    step: float = 0.25,
    tol: float = 1e-8,
    lmin: float = 1e-4,
    lmax: float = 2.0,
) -> SuiteResult:
    """Grid verification of the eight-lengths bound and its window cases."""
    slacks = []
    for k in range(trials):
        rng = _rng(seed, _TAGS["key_proposition"], k)
        g, u = _random_crossing_config(rng, lmin, lmax)
        report = key_bound_report(g, u, t_max, step)
        worst = report.worst_slack
        for s in report.case_slacks.values():
            if s is not None:
                worst = max(worst, s)
        slacks.append(worst - tol)
    return _summarize("key_proposition", slacks)


def suite_displacement_identity(
    seed: int, trials: int, rel_tol: float = 1e-9, lmin: float = 1e-4, lmax: float = 2.0
) -> SuiteResult:
    """sinh(d(z, gz)/2) = cosh(d(z, axis)) sinh(l/2), in relative error."""
    slacks = []
    for k in range(trials):
        rng = _rng(seed, _TAGS["displacement_identity"], k)
        p = _random_boundary(rng)
        q = _random_boundary(rng)
        while q == p:
            q = _random_boundary(rng)
        ell = math.exp(float(rng.uniform(math.log(lmin), math.log(lmax))))
        g = hyperbolic_from_axis(p, q, ell)
        z = _random_point(rng)
        lhs = math.sinh(dist(z, apply_point(g, z)) / 2.0)
        # The exact sampled length; the trace route would lose ~half the
        # digits of short lengths to cancellation in acosh near 1.
        rhs = math.cosh(dist_to_geodesic(z, Geodesic(p, q))) * math.sinh(ell / 2.0)
        slacks.append(abs(lhs - rhs) / rhs - rel_tol)
    return _summarize("displacement_identity", slacks)


def suite_flow_identity(
    seed: int, trials: int, d1_tol: float = 1e-10, entry_tol: float = 1e-12
) -> SuiteResult:
    """Geodesic-conjugated horocycle steps against the rescaled step.

    The identity is exact matrix algebra; floating point leaves a few
    ulps, checked both entrywise and through d1.
    """
    slacks = []
    for k in range(trials):
        rng = _rng(seed, _TAGS["flow_identity"], k)
        u = _random_frame(rng)
        t = float(rng.uniform(-3.0, 3.0))
        s = float(rng.uniform(-5.0, 5.0))
        lhs = geodesic_flow(horocycle_flow(geodesic_flow(u, -t), s), t)
        rhs = horocycle_flow(u, s * math.exp(-t))
        scale = max(1.0, *(abs(e) for e in lhs.frame.entries()))
        entry_dev = max(
            abs(a - b) for a, b in zip(lhs.frame.entries(), rhs.frame.entries())
        )
        slacks.append(max(d1(lhs, rhs) - d1_tol, entry_dev / scale - entry_tol))
    return _summarize("flow_identity", slacks)


_RUNNERS = {
    "busemann_cocycle": suite_busemann_cocycle,
    "busemann_lipschitz": suite_busemann_lipschitz,
    "busemann_oracle": suite_busemann_oracle,
    "winding_time_bound": suite_winding_time_bound,
    "key_proposition": suite_key_proposition,
    "displacement_identity": suite_displacement_identity,
    "flow_identity": suite_flow_identity,
}


def run_suite(name: str, seed: int, trials: int, t_max: float = 20.0, step: float = 0.25) -> SuiteResult:
    if name not in _RUNNERS:
        raise KeyError(f"unknown suite {name!r}; known: {SUITE_NAMES}")
    if name == "key_proposition":
        return suite_key_proposition(seed, trials, t_max=t_max, step=step)
    return _RUNNERS[name](seed, trials)


def run_all_suites(
    seed: int, trials: int, t_max: float = 20.0, step: float = 0.25
) -> list[SuiteResult]:
    """Run every suite with the same trial count, in registry order."""
    return [run_suite(name, seed, trials, t_max, step) for name in SUITE_NAMES]
