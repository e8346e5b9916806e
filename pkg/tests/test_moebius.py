import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypwind.moebius import (
    IDENTITY,
    INFINITY,
    BoundaryPoint,
    DegenerateAxisError,
    IsometryClass,
    MoebiusMap,
    NotHyperbolicError,
    apply_boundary,
    apply_point,
    axis_data,
    classify,
    compose,
    hyperbolic_from_axis,
    inverse,
    translation_length,
)
from hypwind.plane import HPoint
from hypwind.hplane import dist


def approx_map(g, entries, tol=1e-12):
    return all(abs(a - b) <= tol for a, b in zip(g.entries(), entries))


DILATION4 = MoebiusMap(2.0, 0.0, 0.0, 0.5)  # z -> 4z
SHIFT1 = MoebiusMap(1.0, 1.0, 0.0, 1.0)  # z -> z + 1


class TestCompose:
    def test_matrix_product(self):
        g = compose(DILATION4, SHIFT1)
        assert approx_map(g, (2.0, 2.0, 0.0, 0.5))

    def test_inverse_cancels(self):
        g = hyperbolic_from_axis(BoundaryPoint(-1.0), BoundaryPoint(1.0), math.log(4))
        assert approx_map(compose(g, inverse(g)), IDENTITY.entries())

    def test_translations_add(self):
        g = compose(SHIFT1, MoebiusMap(1.0, 2.0, 0.0, 1.0))
        assert approx_map(g, (1.0, 3.0, 0.0, 1.0))


class TestInverse:
    def test_shift(self):
        assert approx_map(inverse(SHIFT1), (1.0, -1.0, 0.0, 1.0))

    def test_dilation_canonical_sign(self):
        g = inverse(DILATION4)
        assert approx_map(g, (0.5, 0.0, 0.0, 2.0))
        assert g.a > 0

    def test_identity(self):
        assert inverse(IDENTITY) == IDENTITY

    def test_double_inverse_roundtrip(self):
        g = hyperbolic_from_axis(BoundaryPoint(-2.0), BoundaryPoint(0.5), 0.3)
        assert approx_map(inverse(inverse(g)), g.entries())


class TestApplyBoundary:
    def test_dilation_at_one(self):
        assert apply_boundary(DILATION4, BoundaryPoint(1.0)).x == pytest.approx(4.0)

    def test_dilation_at_infinity(self):
        assert apply_boundary(DILATION4, INFINITY).is_infinity

    def test_infinity_to_a_over_c(self):
        g = MoebiusMap(1.25, 0.75, 0.75, 1.25)
        img = apply_boundary(g, INFINITY)
        assert img.x == pytest.approx(5.0 / 3.0, abs=1e-12)
        # Cross-check against the large-x limit of (a x + b)/(c x + d).
        far = apply_boundary(g, BoundaryPoint(1e12))
        assert img.x == pytest.approx(far.x, abs=1e-9)

    def test_pole_maps_to_infinity(self):
        g = MoebiusMap(1.25, 0.75, 0.75, 1.25)
        assert apply_boundary(g, BoundaryPoint(-1.25 / 0.75)).is_infinity


class TestApplyPoint:
    def test_shift_at_i(self):
        z = apply_point(SHIFT1, HPoint(0.0, 1.0))
        assert (z.x, z.y) == (1.0, 1.0)

    def test_closed_form_inverse_image(self):
        # For the axis (-1, 1) with length l, g^{-1}(i) = (-sinh l + i)/cosh l.
        g = hyperbolic_from_axis(BoundaryPoint(-1.0), BoundaryPoint(1.0), math.log(4))
        z = apply_point(inverse(g), HPoint(0.0, 1.0))
        l = math.log(4)
        assert z.x == pytest.approx(-math.sinh(l) / math.cosh(l), abs=1e-14)
        assert z.y == pytest.approx(1.0 / math.cosh(l), abs=1e-14)

    def test_identity(self):
        z = apply_point(IDENTITY, HPoint(0.0, 2.0))
        assert (z.x, z.y) == (0.0, 2.0)

    def test_height_identity(self):
        g = MoebiusMap(1.25, 0.75, 0.75, 1.25)
        z = HPoint(0.3, 0.7)
        w = apply_point(g, z)
        den = complex(g.c * z.x + g.d, g.c * z.y)
        assert w.y == pytest.approx(z.y / abs(den) ** 2, rel=1e-14)


class TestClassify:
    def test_hyperbolic(self):
        assert classify(DILATION4) is IsometryClass.HYPERBOLIC

    def test_parabolic(self):
        assert classify(SHIFT1) is IsometryClass.PARABOLIC

    def test_elliptic(self):
        assert classify(MoebiusMap(0.0, -1.0, 1.0, 0.0)) is IsometryClass.ELLIPTIC

    def test_identity(self):
        assert classify(IDENTITY) is IsometryClass.IDENTITY

    def test_near_parabolic_band(self):
        h = 1e-11  # trace 2 + 1e-11, inside the 1e-9 band
        g = MoebiusMap.from_entries(1.0 + h, 1.0, 0.0, 1.0)
        assert classify(g) is IsometryClass.PARABOLIC


class TestAxisData:
    def test_dilation(self):
        d = axis_data(DILATION4)
        assert d.minus.x == pytest.approx(0.0, abs=1e-15)
        assert d.plus.is_infinity
        assert d.length == pytest.approx(math.log(4), rel=1e-14)

    def test_symmetric_axis(self):
        c, s = math.cosh(math.log(2)), math.sinh(math.log(2))
        g = MoebiusMap(c, s, s, c)
        d = axis_data(g)
        # g(0) = tanh(log 2) > 0 pulls toward +1.
        assert d.minus.x == pytest.approx(-1.0, abs=1e-12)
        assert d.plus.x == pytest.approx(1.0, abs=1e-12)
        assert d.length == pytest.approx(math.log(4), rel=1e-12)

    def test_inverse_swaps_fixed_points(self):
        c, s = math.cosh(math.log(2)), math.sinh(math.log(2))
        d = axis_data(inverse(MoebiusMap(c, s, s, c)))
        assert d.minus.x == pytest.approx(1.0, abs=1e-12)
        assert d.plus.x == pytest.approx(-1.0, abs=1e-12)
        assert d.length == pytest.approx(math.log(4), rel=1e-12)

    def test_rejects_non_hyperbolic(self):
        with pytest.raises(NotHyperbolicError):
            axis_data(SHIFT1)
        with pytest.raises(NotHyperbolicError):
            translation_length(SHIFT1)


class TestHyperbolicFromAxis:
    def test_symmetric_example(self):
        g = hyperbolic_from_axis(BoundaryPoint(-1.0), BoundaryPoint(1.0), math.log(4))
        assert approx_map(g, (1.25, 0.75, 0.75, 1.25), tol=1e-14)

    def test_vertical_axis_gives_dilation(self):
        lam = 3.7
        g = hyperbolic_from_axis(BoundaryPoint(0.0), INFINITY, math.log(lam))
        assert approx_map(g, (math.sqrt(lam), 0.0, 0.0, 1.0 / math.sqrt(lam)), tol=1e-13)

    def test_roundtrip_wide_symmetric(self):
        A = math.e
        g = hyperbolic_from_axis(BoundaryPoint(-A), BoundaryPoint(A), 0.125)
        d = axis_data(g)
        assert d.minus.x == pytest.approx(-A, abs=1e-9 * A)
        assert d.plus.x == pytest.approx(A, abs=1e-9 * A)
        assert d.length == pytest.approx(0.125, rel=1e-9)

    def test_degenerate_axis(self):
        with pytest.raises(DegenerateAxisError):
            hyperbolic_from_axis(BoundaryPoint(1.0), BoundaryPoint(1.0), 1.0)
        with pytest.raises(DegenerateAxisError):
            hyperbolic_from_axis(INFINITY, INFINITY, 1.0)

    def test_rejects_nonpositive_length(self):
        with pytest.raises(ValueError):
            hyperbolic_from_axis(BoundaryPoint(-1.0), BoundaryPoint(1.0), 0.0)


def _random_hyperbolic(rng):
    if rng.uniform() < 0.1:
        p = INFINITY
    else:
        p = BoundaryPoint(float(rng.normal(0.0, 5.0)))
    while True:
        q = BoundaryPoint(float(rng.normal(0.0, 5.0)))
        if q != p:
            break
    l = math.exp(float(rng.uniform(math.log(1e-3), math.log(2.0))))
    return hyperbolic_from_axis(p, q, l), p, q, l


class TestProperties:
    def test_axis_roundtrip_bulk(self):
        # hyperbolic_from_axis inverts axis_data entrywise.
        for k in range(10_000):
            rng = np.random.default_rng((2024, 10, k))
            g, *_ = _random_hyperbolic(rng)
            d = axis_data(g)
            h = hyperbolic_from_axis(d.minus, d.plus, d.length)
            scale = max(1.0, *(abs(e) for e in g.entries()))
            assert all(
                abs(a - b) <= 1e-8 * scale for a, b in zip(g.entries(), h.entries())
            )

    def test_conjugation_covariance(self):
        for k in range(300):
            rng = np.random.default_rng((2024, 11, k))
            g, *_ = _random_hyperbolic(rng)
            f, *_ = _random_hyperbolic(rng)
            d = axis_data(g)
            dc = axis_data(compose(compose(f, g), inverse(f)))
            fm = apply_boundary(f, d.minus)
            fp = apply_boundary(f, d.plus)
            for got, want in ((dc.minus, fm), (dc.plus, fp)):
                if want.is_infinity:
                    assert got.is_infinity or abs(got.x) > 1e12
                else:
                    assert got.x == pytest.approx(want.x, abs=1e-7 * max(1, abs(want.x)))
            assert dc.length == pytest.approx(d.length, abs=1e-10)

    def test_fixes_exactly_axis_endpoints(self):
        rng = np.random.default_rng((2024, 12))
        g = hyperbolic_from_axis(BoundaryPoint(-2.0), BoundaryPoint(3.0), 0.7)
        for _ in range(200):
            x = float(rng.normal(0.0, 10.0))
            img = apply_boundary(g, BoundaryPoint(x))
            moved = img.is_infinity or abs(img.x - x) > 1e-12 * max(1.0, abs(x))
            near_fixed = min(abs(x + 2.0), abs(x - 3.0)) < 1e-6
            assert moved or near_fixed
        for fixed in (-2.0, 3.0):
            img = apply_boundary(g, BoundaryPoint(fixed))
            assert img.x == pytest.approx(fixed, abs=1e-12)

    def test_trace_length_vs_axis_displacement(self):
        # Moving a point of the axis measures the translation length.
        for A, l in [(2.0, 0.5), (math.e, 0.125), (10.0, 1.5), (1.5, 1e-3)]:
            g = hyperbolic_from_axis(BoundaryPoint(-A), BoundaryPoint(A), l)
            z = HPoint(0.0, A)  # apex of the axis semicircle
            assert dist(z, apply_point(g, z)) == pytest.approx(l, abs=1e-10)

    def test_det_one_and_canonical_sign(self):
        for k in range(500):
            rng = np.random.default_rng((2024, 13, k))
            g, *_ = _random_hyperbolic(rng)
            h, *_ = _random_hyperbolic(rng)
            p = compose(g, h)
            assert abs(p.a * p.d - p.b * p.c - 1.0) <= 1e-9
            assert p.c > 0 or (p.c == 0 and p.a > 0)


@given(
    st.floats(min_value=-50, max_value=50),
    st.floats(min_value=-50, max_value=50),
    st.floats(min_value=1e-3, max_value=2.0),
)
@settings(max_examples=200, deadline=None)
def test_from_axis_translates_toward_plus(p, q, l):
    if abs(p - q) < 1e-3:
        return
    g = hyperbolic_from_axis(BoundaryPoint(p), BoundaryPoint(q), l)
    d = axis_data(g)
    assert d.plus.x == pytest.approx(q, abs=1e-6 * max(1, abs(q)))
    assert d.minus.x == pytest.approx(p, abs=1e-6 * max(1, abs(p)))


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=100, deadline=None)
def test_compose_associative(seed):
    rng = np.random.default_rng((77, seed))
    g, *_ = _random_hyperbolic(rng)
    h, *_ = _random_hyperbolic(rng)
    k, *_ = _random_hyperbolic(rng)
    left = compose(compose(g, h), k)
    right = compose(g, compose(h, k))
    scale = max(1.0, *(abs(e) for e in left.entries()))
    assert all(abs(a - b) <= 1e-11 * scale for a, b in zip(left.entries(), right.entries()))
