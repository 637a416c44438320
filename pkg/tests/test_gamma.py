"""Verified Gamma function: reference digits and the recursion property."""

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from sobemb.intervals import Interval, iv_gamma


def test_gamma_integers():
    # [TRIVIAL] Gamma(n) = (n-1)!
    for n, fact in [(1, 1.0), (2, 1.0), (3, 2.0), (4, 6.0), (5, 24.0), (8, 5040.0)]:
        assert iv_gamma(Interval(float(n))).contains(fact)


def test_gamma_half():
    # [DERIVED] Gamma(1/2) = sqrt(pi) = 1.7724538509055160...
    assert iv_gamma(Interval(0.5)).contains(1.7724538509055160)


def test_gamma_product_oracle():
    # [DERIVED] Gamma(5/3) * Gamma(4/3) = 0.806133050770763489...
    # (50-digit reference values of Gamma(1/3), Gamma(2/3) reduced by the
    # recursion Gamma(x+1) = x Gamma(x); oracle computed independently)
    g53 = iv_gamma(Interval(5.0 / 3.0))
    g43 = iv_gamma(Interval(4.0 / 3.0))
    prod = g53 * g43
    assert prod.contains(0.806133050770763489)
    assert prod.width() < 1e-10


def test_gamma_monotone_widths():
    for x in (0.2, 1.3, 4.7, 9.9, 20.5):
        g = iv_gamma(Interval(x))
        assert g.lo > 0.0
        assert g.width() / g.lo < 1e-9  # tight relative enclosure


@settings(max_examples=1000, deadline=None)
@given(st.floats(min_value=0.05, max_value=30.0))
def test_gamma_recursion_containment(x):
    """10^3 cases: the enclosures of Gamma(x+1) and x*Gamma(x) overlap
    (both contain the true common value)."""
    left = iv_gamma(Interval(x) + Interval(1.0))
    right = Interval(x) * iv_gamma(Interval(x))
    assert left.intersects(right)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.5, max_value=20.0), st.floats(0.0, 1e-8))
def test_gamma_interval_argument_contains_point(x, w):
    wide = iv_gamma(Interval(x, x + w))
    point = iv_gamma(Interval(x))
    assert wide.lo <= point.hi and point.lo <= wide.hi


def test_gamma_matches_libm_samples():
    for x in (0.7, 1.1, 2.9, 6.3, 11.0):
        g = iv_gamma(Interval(x))
        assert g.lo <= math.gamma(x) <= g.hi
