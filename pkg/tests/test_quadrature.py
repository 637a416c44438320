"""Rigorous midpoint quadrature of |u|^q: closed-form and mpmath oracles,
cell-budget validation, and refinement behavior."""

import mpmath
import numpy as np
import pytest

from sobemb.errors import DomainError, QuadratureError
from sobemb.quadrature import integrate_abs_power
from sobemb.series import DomainRect, SineSeries2D, lp_norm

SQ = DomainRect(1.0, 1.0)


def _one_mode(a=1.0):
    c = np.zeros((1, 1))
    c[0, 0] = a
    return SineSeries2D(SQ, c)


def test_integral_square_oracle():
    # [DERIVED] integral of sin^2 sin^2 over the unit square = 1/4
    enc = integrate_abs_power(_one_mode(), 2.0, cells=512)
    assert enc.contains(0.25)
    assert enc.width() < 0.05


def test_integral_fourth_power_oracle():
    # [DERIVED] (integral sin^4)^2 = (3/8)^2 = 9/64
    enc = integrate_abs_power(_one_mode(), 4.0, cells=512)
    assert enc.contains(9.0 / 64.0)


def test_fractional_power_against_mpmath():
    # [DERIVED] independent oracle: (int_0^1 sin(pi t)^2.5 dt)^2 via mpmath
    with mpmath.workdps(30):
        one_dim = mpmath.quad(lambda t: mpmath.sin(mpmath.pi * t) ** mpmath.mpf("2.5"),
                              [0, 1])
        oracle = float(one_dim ** 2)
    enc = integrate_abs_power(_one_mode(), 2.5, cells=512)
    assert enc.lo <= oracle <= enc.hi


def test_sign_changing_series_uses_absolute_value():
    c = np.zeros((2, 2))
    c[1, 1] = 1.0  # sin(2 pi x) sin(2 pi y), integral of |.|^2 is still 1/4
    enc = integrate_abs_power(SineSeries2D(SQ, c), 2.0, cells=512)
    assert enc.contains(0.25)
    assert enc.lo >= 0.0


def test_refinement_tightens_enclosure():
    u = _one_mode()
    w_coarse = integrate_abs_power(u, 3.0, cells=64).width()
    w_fine = integrate_abs_power(u, 3.0, cells=512).width()
    assert w_fine < w_coarse


def test_cell_budget_validation():
    u = _one_mode()
    with pytest.raises(DomainError):
        integrate_abs_power(u, 2.0, cells=1)
    with pytest.raises(QuadratureError):
        integrate_abs_power(u, 2.0, cells=100000)


def test_lp_norm_fractional_consistent_with_integer():
    """lp_norm at q = 4 (exact expansion route) and the quadrature enclosure
    of the same integral must overlap."""
    rng = np.random.default_rng(20240817)
    c = rng.normal(size=(3, 3))
    u = SineSeries2D(SQ, c)
    n4 = lp_norm(u, 4.0)
    quad = integrate_abs_power(u, 4.0, cells=512)
    assert quad.lo <= (n4.hi ** 4) * (1 + 1e-12)
    assert (n4.lo ** 4) * (1 - 1e-12) <= quad.hi
