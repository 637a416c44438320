"""Closed-form upper bounds and the two-sided enclosure combination logic."""

import math

import numpy as np
import pytest

from sobemb.bounds import (
    best_enclosure,
    corollary_bound,
    enclosure_from_ball,
    outward_decimal,
    plum_bound,
    talenti_constant,
)
from sobemb.errors import (
    CertificateMissing,
    DomainError,
    HypothesisFailure,
    SoundnessViolation,
)
from sobemb.intervals import Interval
from sobemb.series import DomainRect, SineSeries2D

SQ = DomainRect(1.0, 1.0)
RHO = Interval(19.7392088021787172, 19.7392088021787173)  # contains 2 pi^2


def test_talenti_q_four_thirds_is_one_over_pi():
    # [DERIVED] n=2, q=4/3: the sharp constant collapses to 1/pi
    # = 0.31830988618379067
    t = talenti_constant(2, Interval(4.0 / 3.0))
    assert t.contains(0.31830988618379067)
    assert t.width() < 1e-12


def test_talenti_validation():
    with pytest.raises(DomainError):
        talenti_constant(1, Interval(1.5))
    with pytest.raises(DomainError):
        talenti_constant(2, Interval(2.5))  # q must be < n


def test_symmetrization_table_oracles():
    # [DERIVED] unit-square upper bounds for p = 3, 4, 5 (14 significant
    # digits, outward): independently computed from the closed form
    for p, want in [(3, 0.27991104681667), (4, 0.31830988618379),
                    (5, 0.35780388458050)]:
        b = corollary_bound(2, float(p), SQ.measure())
        assert b.lo <= want <= b.hi or abs(b.hi - want) < 1e-13
        assert b.width() < 1e-12


def test_spectral_table_oracles():
    # [DERIVED] unit-square spectral bounds for p = 3, 4, 5 with
    # rho = lambda_1 = 2 pi^2
    for p, want in [(3, 0.32964899322075), (4, 0.39894228040144),
                    (5, 0.48909030972535)]:
        b = plum_bound(2, float(p), RHO)
        assert abs(b.hi - want) < 1e-12
        assert b.width() < 1e-12


def test_plum_p4_closed_form():
    # [DERIVED] n=2, p=4: (1/2)^{3/4} * 2^{1/2} * rho^{-1/4}; with
    # rho = 2 pi^2 this equals 1/sqrt(2 pi) = 0.3989422804014327
    b = plum_bound(2, 4.0, RHO)
    assert b.contains(1.0 / math.sqrt(2.0 * math.pi))


def test_plum_three_dimensional_closed_form():
    # [DERIVED] n=3, p=4: s = 3(1/p - 1/2 + 1/3) = 1/4, bound =
    # (2/sqrt(3))^{3/4} * rho^{-1/8}
    rho = Interval(10.0)
    b = plum_bound(3, 4.0, rho)
    hand = (2.0 / math.sqrt(3.0)) ** 0.75 * 10.0 ** -0.125
    assert b.contains(hand)


def test_plum_requires_interval_rho():
    with pytest.raises(DomainError):
        plum_bound(2, 4.0, 2.0)
    with pytest.raises(DomainError):
        plum_bound(2, 4.0, Interval(0.0, 1.0))


def test_corollary_validation():
    with pytest.raises(DomainError):
        corollary_bound(2, 1.5, SQ.measure())  # p must exceed n/(n-1)
    with pytest.raises(DomainError):
        corollary_bound(3, 7.0, SQ.measure())  # above the critical exponent


def test_corollary_measure_scaling():
    # |Omega|^{(2-q)/(2q)} with q = 4/3 at p = 4: doubling the measure
    # scales the bound by 2^{1/4}
    b1 = corollary_bound(2, 4.0, Interval(1.0))
    b2 = corollary_bound(2, 4.0, Interval(2.0))
    ratio = b2 / b1
    assert ratio.contains(2.0 ** 0.25)


# -- extremal enclosure -------------------------------------------------------------


def test_enclosure_from_ball_requires_positiveness(u_p3_n10):
    with pytest.raises(CertificateMissing):
        enclosure_from_ball(u_p3_n10, Interval(0.0, 1e-8), 3, positive=False)


def test_enclosure_from_ball_rejects_large_radius(u_p3_n10):
    with pytest.raises(HypothesisFailure):
        enclosure_from_ball(u_p3_n10, Interval(0.0, 100.0), 3, positive=True)


def test_enclosure_from_ball_brackets_ratio(u_p3_n10):
    lower, upper = enclosure_from_ball(u_p3_n10, Interval(0.0, 1e-9), 3,
                                       positive=True)
    assert 0.0 < lower <= upper
    # the ratio ||u||_{L4} / ||u||_{H^1_0} must lie inside
    from sobemb.series import lp_norm

    ratio = lp_norm(u_p3_n10, 4.0) / u_p3_n10.h01_norm()
    assert lower <= ratio.hi and ratio.lo <= upper


def test_best_enclosure_picks_smallest_upper():
    res = best_enclosure(
        (0.2, 0.3),
        [("corollary", Interval(0.31, 0.32)), ("plum", Interval(0.39, 0.4))],
        4, SQ,
    )
    assert res.upper == 0.3 and res.sources["upper"] == "extremal"
    res2 = best_enclosure(
        (0.2, 0.35),
        [("corollary", Interval(0.31, 0.32))],
        4, SQ,
    )
    assert res2.upper == 0.32 and res2.sources["upper"] == "corollary"
    assert res2.lower == 0.2 and res2.sources["lower"] == "extremal"


def test_best_enclosure_without_extremal_is_trivial_lower():
    res = best_enclosure(None, [("plum", Interval(0.39, 0.4))], 4, SQ)
    assert res.lower == 0.0
    assert res.sources["lower"] == "trivial"


def test_best_enclosure_detects_crossing():
    with pytest.raises(SoundnessViolation):
        best_enclosure((0.5, 0.6), [("plum", Interval(0.39, 0.4))], 4, SQ)


def test_outward_decimal_directions():
    s_lo = outward_decimal(1.0 / 3.0, -1, sig=6)
    s_hi = outward_decimal(1.0 / 3.0, +1, sig=6)
    assert float(s_lo) <= 1.0 / 3.0 <= float(s_hi)
    assert s_lo != s_hi
    assert outward_decimal(0.0, +1) == "0"
