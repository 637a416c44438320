"""Rigorous tensor trig series: evaluation, norms, exact powers, pointwise
bounds, and boundary factorization, validated against closed-form values,
high-precision mpmath oracles, and dense floating-point sampling."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sobemb.errors import CapacityError, DomainError
from sobemb.intervals import Interval, iv_pow_int
from sobemb.ivarray import IArray
from sobemb.series import (
    COS,
    SIN,
    DomainRect,
    Series2D,
    SineSeries2D,
    factor_boundary,
    l2_inner,
    lp_norm,
    multiply,
    negative_part_sup,
    power_expand,
)

SQ = DomainRect(1.0, 1.0)


def _one_mode(a=1.0, domain=SQ):
    c = np.zeros((1, 1))
    c[0, 0] = a
    return SineSeries2D(domain, c)


def _seeded_series(n, seed, scale=1.0, domain=SQ):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=(n, n)) * scale / (1.0 + np.add.outer(np.arange(n), np.arange(n)))
    return SineSeries2D(domain, c)


# -- norms (closed-form oracles) -------------------------------------------------


def test_h01_norm_single_mode():
    # [DERIVED] |grad sin(pi x) sin(pi y)|_{L2}^2 = 2 pi^2 / 4, norm = pi/sqrt(2)
    n = _one_mode().h01_norm()
    assert n.contains(2.2214414690791831)
    assert n.width() < 1e-12


def test_l2_norm_single_mode():
    # [TRIVIAL] integral of sin^2 over (0,1) is 1/2 per dimension
    n = _one_mode().l2_norm()
    assert n.contains(0.5)
    assert n.width() < 1e-14


def test_l2_norm_scales_linearly():
    n = _one_mode(3.0).l2_norm()
    assert n.contains(1.5)


def test_h01_dominates_l2_poincare():
    # [DERIVED] Poincare: |u|_{L2} <= |grad u|_{L2} / sqrt(lambda_1)
    for seed in (0, 5, 11):
        u = _seeded_series(6, seed)
        lhs = u.l2_norm()
        rhs = u.h01_norm()
        lam1 = math.sqrt(SQ.lambda1().lo)
        assert lhs.hi <= rhs.hi / lam1 * (1.0 + 1e-12)


def test_rectangle_norms_scale_with_domain():
    dom = DomainRect(2.0, 1.0)
    n = _one_mode(domain=dom).l2_norm()
    # [TRIVIAL] integral sin^2(pi x / 2) over (0,2) = 1, times 1/2 in y
    assert n.contains(math.sqrt(0.5))


# -- point evaluation (mpmath oracle) ---------------------------------------------


def test_eval_two_mode_series_against_mpmath():
    """Fixed two-mode series at a seeded interior point: the enclosure must
    contain a 50-digit independent oracle value."""
    c = np.zeros((3, 3))
    c[0, 0] = 0.7
    c[1, 2] = -0.3  # mode (2, 3)
    u = SineSeries2D(SQ, c)
    rng = np.random.default_rng(20240817)
    x, y = rng.uniform(0.05, 0.95, size=2)
    enc = u.eval(x, y)
    with mpmath.workdps(50):
        pi = mpmath.pi
        oracle = mpmath.mpf(0.7) * mpmath.sin(pi * x) * mpmath.sin(pi * y) + \
            mpmath.mpf(-0.3) * mpmath.sin(2 * pi * x) * mpmath.sin(3 * pi * y)
        assert mpmath.mpf(enc.lo) <= oracle <= mpmath.mpf(enc.hi)
    assert enc.width() < 1e-13


def test_eval_outside_domain_raises():
    u = _one_mode()
    with pytest.raises(DomainError):
        u.eval(1.5, 0.5)


def test_values_on_grid_matches_eval():
    u = _seeded_series(4, 3)
    xs = np.array([0.25, 0.7])
    ys = np.array([0.1, 0.55])
    grid = u.values_on_grid(xs, ys)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            pt = u.eval(float(x), float(y))
            assert grid.lo[i, j] <= pt.hi and pt.lo <= grid.hi[i, j]


# -- exact powers -----------------------------------------------------------------


def test_cube_of_single_mode_coefficients():
    # [DERIVED] sin^3 t = (3 sin t - sin 3t)/4, so (sin sin)^3 has
    # coefficients (9/16, -3/16, -3/16, 1/16) at modes (1,1),(1,3),(3,1),(3,3)
    v = power_expand(_one_mode(), 3)
    assert v.parity_x == SIN and v.parity_y == SIN
    got = {}
    for (i, j), want in [((0, 0), 9 / 16), ((0, 2), -3 / 16),
                         ((2, 0), -3 / 16), ((2, 2), 1 / 16)]:
        assert v.coeffs.lo[i, j] <= want <= v.coeffs.hi[i, j]
        got[(i, j)] = want
    # every other coefficient is exactly zero by parity
    mask = np.ones(v.coeffs.shape, dtype=bool)
    for ij in got:
        mask[ij] = False
    assert np.all(v.coeffs.lo[mask] == 0.0)
    assert np.all(v.coeffs.hi[mask] == 0.0)


def test_square_of_single_mode_is_cosine_parity():
    v = power_expand(_one_mode(), 2)
    assert v.parity_x == COS and v.parity_y == COS
    # [DERIVED] sin^2 t = 1/2 - cos(2t)/2 per dimension
    assert v.eval(0.5, 0.5).contains(1.0)
    assert v.integral().contains(0.25)


def test_l4_norm_single_mode():
    # [DERIVED] integral sin^4 over (0,1) = 3/8; L4 norm = sqrt(3/8)
    n = lp_norm(_one_mode(), 4.0)
    assert n.contains(0.61237243569579452)
    assert n.width() < 1e-12


def test_power_expand_rejects_bad_orders():
    u = _one_mode()
    with pytest.raises(DomainError):
        power_expand(u, 7)
    big = SineSeries2D(SQ, np.zeros((400, 400)))
    with pytest.raises(CapacityError):
        power_expand(big, 3)


def test_power_expand_matches_pointwise_eval():
    """At 10^2 seeded interior points, the enclosure of (u^p)(x, y) from the
    exact expansion intersects the p-th interval power of u(x, y)."""
    u = _seeded_series(4, 20240817)
    rng = np.random.default_rng(99)
    pts = rng.uniform(0.02, 0.98, size=(100, 2))
    for p in (2, 3):
        v = power_expand(u, p)
        for x, y in pts:
            a = v.eval(float(x), float(y))
            b = iv_pow_int(u.eval(float(x), float(y)), p)
            assert a.intersects(b), (p, x, y)


def test_multiply_commutes():
    u = _seeded_series(3, 1)
    v = _seeded_series(4, 2)
    uv = multiply(u, v)
    vu = multiply(v, u)
    assert uv.coeffs.shape == vu.coeffs.shape
    pt_a = uv.eval(0.37, 0.61)
    pt_b = vu.eval(0.37, 0.61)
    assert pt_a.intersects(pt_b)


def test_multiply_rejects_mismatched_domains():
    with pytest.raises(DomainError):
        multiply(_one_mode(), _one_mode(domain=DomainRect(2.0, 1.0)))


# -- pointwise bounds --------------------------------------------------------------


def test_sup_abs_bound_single_mode():
    s = _one_mode(2.5).sup_abs_bound()
    assert s.lo <= 2.5 <= s.hi * (1.0 + 1e-12)
    assert s.hi <= 2.5 * (1.0 + 1e-12)


def test_grad_sup_bound_dominates_samples():
    u = _seeded_series(5, 7)
    g = u.grad_sup_bound().hi
    # independent float sampling of |grad u| via term-by-term differentiation
    xs = np.linspace(0.0, 1.0, 101)
    mid = u.coeffs.mid()
    mx = np.arange(1, 6) * np.pi
    sx, cx = np.sin(np.outer(xs, mx)), np.cos(np.outer(xs, mx))
    ux = (cx * mx) @ mid @ sx.T
    uy = sx @ mid @ (cx * mx).T
    assert g >= np.max(np.hypot(ux, uy)) * (1.0 - 1e-12)


def test_inf_enclosure_contains_dense_sample_inf():
    """Seeded series: the infimum over a 10^6-point dense sample lies inside
    the rigorous infimum enclosure (the sample min can only overestimate the
    true infimum, so a small one-sided slack covers the upper endpoint)."""
    u = _seeded_series(5, 13)
    enc = u.inf_enclosure(128)
    xs = np.linspace(0.0, 1.0, 1000)
    mid = u.coeffs.mid()
    s = np.sin(np.outer(xs, np.arange(1, 6) * np.pi))
    dense_min = float(np.min(s @ mid @ s.T))
    assert enc.lo <= dense_min
    assert dense_min <= enc.hi + 1e-4


def test_negative_part_sup_zero_for_positive_series():
    # sin(pi x) sin(pi y) is nonnegative on the unit square
    hint = negative_part_sup(_one_mode())
    assert hint.neg_sup == 0.0


def test_negative_part_sup_detects_sign_change():
    c = np.zeros((2, 2))
    c[1, 1] = 1.0  # sin(2 pi x) sin(2 pi y) dips to -1
    hint = negative_part_sup(SineSeries2D(SQ, c))
    # the bound goes through the boundary-factored profile 4 cos cos, so it
    # is a valid but conservative upper bound: 1 <= sup u_- <= bound <= ~4.1
    assert 1.0 - 1e-9 <= hint.neg_sup <= 4.5


# -- boundary factorization --------------------------------------------------------


def test_factor_boundary_identity_at_points():
    """u(x, y) must equal sin(pi x/L1) sin(pi y/L2) * w(x, y) where w is the
    boundary-factored profile; checked by interval intersection at samples."""
    u = _seeded_series(5, 21)
    w = factor_boundary(u)
    assert w.parity_x == COS and w.parity_y == COS
    from sobemb.intervals import PI, iv_sin

    for x, y in [(0.2, 0.3), (0.55, 0.81), (0.94, 0.07)]:
        lhs = u.eval(x, y)
        rhs = iv_sin(PI * Interval(x)) * iv_sin(PI * Interval(y)) * w.eval(x, y)
        assert lhs.intersects(rhs), (x, y)


def test_factor_boundary_single_mode_is_constant_one():
    w = factor_boundary(_one_mode())
    assert w.coeffs.lo[0, 0] <= 1.0 <= w.coeffs.hi[0, 0]
    assert w.coeffs.hi[0, 0] - w.coeffs.lo[0, 0] < 1e-12
    assert np.all(w.coeffs.lo[1:, :] == 0.0) and np.all(w.coeffs.hi[:, 1:][1:] == 0.0)


# -- inner products ----------------------------------------------------------------


def test_l2_inner_orthogonality():
    a = np.zeros((3, 3))
    a[0, 0] = 1.0
    b = np.zeros((3, 3))
    b[1, 2] = 1.0
    assert l2_inner(SineSeries2D(SQ, a), SineSeries2D(SQ, b)).contains(0.0)
    same = l2_inner(SineSeries2D(SQ, a), SineSeries2D(SQ, a))
    assert same.contains(0.25)  # (1/2)*(1/2)


def test_l2_inner_matches_norm_squared():
    u = _seeded_series(4, 17)
    ip = l2_inner(u, u)
    n2 = u.l2_norm() * u.l2_norm()
    assert ip.intersects(n2)


def test_l2_inner_cross_parity():
    # [DERIVED] integral sin(pi x) dx over (0,1) = 2/pi; constant cos mode
    s = SineSeries2D(SQ, np.array([[1.0]]))
    c = Series2D(SQ, IArray(np.array([[1.0]])), COS, COS)
    val = l2_inner(s, c)
    want = (2.0 / math.pi) ** 2
    assert val.contains(want)


# -- serialization -----------------------------------------------------------------


def test_series_json_roundtrip_is_exact():
    u = _seeded_series(4, 23)
    v = Series2D.from_json(u.to_json())
    assert v.domain == u.domain
    assert np.array_equal(v.coeffs.lo, u.coeffs.lo)
    assert np.array_equal(v.coeffs.hi, u.coeffs.hi)
    assert (v.parity_x, v.parity_y) == (u.parity_x, u.parity_y)


# -- property suite ---------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_product_eval_containment(seed, x, y):
    """multiply(u, v)(x, y) and u(x, y) * v(x, y) enclose the same real value."""
    u = _seeded_series(3, seed)
    v = _seeded_series(3, seed + 1)
    w = multiply(u, v)
    a = w.eval(x, y)
    b = u.eval(x, y) * v.eval(x, y)
    assert a.intersects(b)
