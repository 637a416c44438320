"""Rigorous certification of approximate extremizers.

Given floating sine coefficients u-hat for -Laplace u = |u|^{p-1} u, this
module derives, entirely in interval arithmetic:

  * defect bounds  delta >= ||Lap u-hat + |u-hat|^{p-1} u-hat||  (H^-1 and L2),
  * an inverse-linearization bound K >= ||(-Lap - p|u-hat|^{p-1})^{-1}||
    as an operator H^-1 -> H^1_0, via eigenvalue enclosures of a finite
    preconditioned block plus explicit tail and coupling corrections,
  * a Lipschitz bound g for the derivative on a trial ball,
  * a Newton-Kantorovich existence/uniqueness ball (radius r_h1),
  * an L-infinity error radius by elliptic bootstrap (radius r_inf),
  * a positiveness certificate: a point where the true solution is provably
    positive together with sup(u_-)^{p-1} < lambda_1.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import corollary_bound
from .errors import (
    ConditionFailure,
    FixedPointFailure,
    GapFailure,
    NotInvertible,
)
from .intervals import PI, Interval, iv_pow_int, iv_pow_real, iv_sqrt
from .ivarray import IArray, _dn, _up, imatmul, isum
from .series import (
    COS,
    SIN,
    DomainRect,
    Series2D,
    l2_inner,
    negative_part_sup,
    power_expand,
)
from .symeig import SymMatrix, min_abs_eig_lower

UNIQUE_RADIUS_CAP = 1e300


def first_eigenvalue_lower(domain: DomainRect) -> Interval:
    """Enclosure of lambda_1 = pi^2 (1/L1^2 + 1/L2^2) on the rectangle."""
    return domain.lambda1()


# -- defect ---------------------------------------------------------------------


def defect_bounds(u: Series2D, p: int) -> tuple:
    """(delta_hminus1, delta_l2) bounding the defect Lap u + |u|^{p-1} u.

    Odd p: the defect is an exact finite sine series, measured coefficient-
    wise.  Even p: u^p is a cosine-parity series; the L2 norm is integrated
    exactly and |u|^{p-1}u - u^p is absorbed via the negative-part bound;
    H^-1 is then bounded by L2/sqrt(lambda_1).
    """
    if p not in (2, 3, 4, 5):
        raise ValueError(f"exponent p must be in 2..5, got {p}")
    dom = u.domain
    quarter = dom.measure() * Interval(0.25)
    v = power_expand(u, p)
    lam_u = dom.lambda_grid(u.modes_x(), u.modes_y())

    if p % 2 == 1:
        nx, ny = v.coeffs.shape
        d = IArray.zeros((nx, ny))
        sx, sy = u.coeffs.shape
        d[:sx, :sy] = u.coeffs * lam_u
        d = v.coeffs - d
        lam_big = dom.lambda_grid(v.modes_x(), v.modes_y())
        d2 = d.square()
        l2 = iv_sqrt(_nonneg(isum(d2)) * quarter)
        hm1 = iv_sqrt(_nonneg(isum(d2 / lam_big)) * quarter)
        return hm1, l2

    lap = Series2D(dom, -(u.coeffs * lam_u), SIN, SIN)
    sq = (
        _nonneg(isum(lap.coeffs.square()) * quarter)
        + Interval(2.0) * l2_inner(lap, v)
        + _nonneg(isum(v.coeffs.square() * _l2_weight_grid(v)))
    )
    l2 = iv_sqrt(_nonneg(sq))
    eta = negative_part_sup(u).neg_sup
    slack = Interval(2.0) * iv_pow_int(Interval(eta), p) * iv_sqrt(dom.measure())
    l2 = Interval(l2.lo, (l2 + slack).hi)
    hm1 = l2 / iv_sqrt(first_eigenvalue_lower(dom))
    return Interval(0.0, hm1.hi), Interval(0.0, l2.hi)


def _nonneg(iv: Interval) -> Interval:
    return Interval(max(iv.lo, 0.0), max(iv.hi, 0.0))


def _l2_weight_grid(v: Series2D) -> IArray:
    wx = v._l2_weights(0)
    wy = v._l2_weights(1)
    return wx.reshape(-1, 1) * wy.reshape(1, -1)


# -- inverse-linearization bound --------------------------------------------------


def _inv_sqrt_arr(lam: IArray) -> IArray:
    s = IArray(_dn(np.sqrt(lam.lo)), _up(np.sqrt(lam.hi)), _unsafe=True)
    return IArray(np.ones(lam.shape)) / s


def _lookup(c: IArray, ix, iy) -> IArray:
    """Gather c[ix, iy] treating out-of-range mode indices as zero."""
    bx, by = np.broadcast_arrays(ix, iy)
    nx, ny = c.shape
    valid = (bx < nx) & (by < ny)
    cx = np.minimum(bx, nx - 1)
    cy = np.minimum(by, ny - 1)
    lo = np.where(valid, c.lo[cx, cy], 0.0)
    hi = np.where(valid, c.hi[cx, cy], 0.0)
    return IArray(lo, hi, _unsafe=True)


def _cos_potential_matrix(c: IArray, mx: np.ndarray, my: np.ndarray) -> IArray:
    """Mode-basis matrix of a cosine-parity potential on given sine modes.

    M[(i,j),(k,l)] = (4/|Omega|) int W phi_ij phi_kl for W with cosine
    coefficients c (mode = array index), using
    sin i sin k = (cos|i-k| - cos(i+k))/2 per dimension.
    """
    a, b = len(mx), len(my)
    dx = np.abs(mx[:, None] - mx[None, :])
    sx = mx[:, None] + mx[None, :]
    ex = 1.0 + (dx == 0)
    dy = np.abs(my[:, None] - my[None, :])
    sy = my[:, None] + my[None, :]
    ey = 1.0 + (dy == 0)

    def br_x(m):
        return m[:, None, :, None]

    def br_y(m):
        return m[None, :, None, :]

    t_dd = _lookup(c, br_x(dx), br_y(dy))
    t_ds = _lookup(c, br_x(dx), br_y(sy))
    t_sd = _lookup(c, br_x(sx), br_y(dy))
    t_ss = _lookup(c, br_x(sx), br_y(sy))
    m4 = (
        t_dd * (0.25 * br_x(ex) * br_y(ey))
        - t_ds * (0.25 * br_x(ex) * np.ones((1, b, 1, b)))
        - t_sd * (0.25 * np.ones((a, 1, a, 1)) * br_y(ey))
        + t_ss * 0.25
    )
    return m4.reshape(a * b, a * b)


def _triple_overlap(L: float, mi: np.ndarray, mk: np.ndarray,
                    ma: np.ndarray) -> IArray:
    """X[(i,k), a] = (2/L) * L/2 ... the raw integral
    int_0^L sin(a pi x/L) sin(i pi x/L) sin(k pi x/L) dx,
    nonzero iff a+i+k is odd, via int sin a cos b = 2La/(pi(a^2-b^2))."""

    def part(b):
        aa = ma[None, None, :].astype(np.float64)
        bb = b[:, :, None].astype(np.float64)
        odd = (ma[None, None, :] + b[:, :, None]) % 2 == 1
        denom = aa * aa - bb * bb
        denom = np.where(odd, denom, 1.0)
        num = IArray(np.where(odd, 2.0 * aa, 0.0)) * IArray._coerce(Interval(L))
        val = num / IArray(denom) / IArray._coerce(PI)
        val.lo[~odd] = 0.0
        val.hi[~odd] = 0.0
        return val

    b1 = np.abs(mi[:, None] - mk[None, :])
    b2 = mi[:, None] + mk[None, :]
    x = (part(b1) - part(b2)) * IArray._coerce(Interval(0.5))
    return x.reshape(len(mi) * len(mk), len(ma))


def _sin_potential_matrix(w: IArray, dom: DomainRect,
                          rows_x, cols_x, rows_y, cols_y) -> IArray:
    """Mode-basis matrix of a sine-parity potential between two mode sets."""
    ma_x = np.arange(1, w.shape[0] + 1)
    ma_y = np.arange(1, w.shape[1] + 1)
    px = _triple_overlap(dom.L1, rows_x, cols_x, ma_x)
    py = _triple_overlap(dom.L2, rows_y, cols_y, ma_y)
    t = imatmul(imatmul(px, w), py.T)  # ((i,k),(j,l))
    t = t.reshape(len(rows_x), len(cols_x), len(rows_y), len(cols_y))
    t = IArray(
        np.ascontiguousarray(t.lo.transpose(0, 2, 1, 3)),
        np.ascontiguousarray(t.hi.transpose(0, 2, 1, 3)),
        _unsafe=True,
    )
    n_row = len(rows_x) * len(rows_y)
    n_col = len(cols_x) * len(cols_y)
    scale = Interval(4.0) / dom.measure()
    return t.reshape(n_row, n_col) * IArray._coerce(scale)


def _b_matrix(m2: IArray, lam_flat: IArray) -> SymMatrix:
    d = _inv_sqrt_arr(lam_flat)
    scaled = m2 * d.reshape(-1, 1) * d.reshape(1, -1)
    n = m2.shape[0]
    return SymMatrix(IArray(np.eye(n)) - scaled)


def _inverse_blocks(u: Series2D, p: int, nprime: int):
    """Yield preconditioned blocks B = I - Lam^{-1/2} M Lam^{-1/2}.

    When the potential's parity structure permits (solution supported on
    odd-odd modes), the finite section decouples into parity blocks.
    """
    dom = u.domain
    w = power_expand(u, p - 1)
    wc = w.coeffs * IArray._coerce(Interval(float(p)))
    all_modes = np.arange(1, nprime + 1)
    odd = np.arange(1, nprime + 1, 2)
    even = np.arange(2, nprime + 1, 2)

    def lam_flat(mx, my):
        return dom.lambda_grid(mx, my).reshape(-1)

    if w.parity_x == COS:  # odd p: even-power potential
        cos_modes = np.arange(0, wc.shape[0])
        has_odd = bool(
            np.any(wc.mag()[cos_modes % 2 == 1, :] > 0)
            or np.any(wc.mag()[:, np.arange(wc.shape[1]) % 2 == 1] > 0)
        )
        groups = (
            [(all_modes, all_modes)]
            if has_odd
            else [(odd, odd), (odd, even), (even, odd), (even, even)]
        )
        for mx, my in groups:
            if len(mx) == 0 or len(my) == 0:
                continue
            m2 = _cos_potential_matrix(wc, mx, my)
            yield _b_matrix(m2, lam_flat(mx, my))
        return

    # even p: odd-power sine potential
    sin_modes = np.arange(1, wc.shape[0] + 1)
    has_even = bool(
        np.any(wc.mag()[sin_modes % 2 == 0, :] > 0)
        or np.any(wc.mag()[:, np.arange(1, wc.shape[1] + 1) % 2 == 0] > 0)
    )
    if has_even or len(even) == 0:
        m2 = _sin_potential_matrix(wc, dom, all_modes, all_modes,
                                   all_modes, all_modes)
        yield _b_matrix(m2, lam_flat(all_modes, all_modes))
        return
    # potential flips parity in both dimensions: two invariant subspaces
    for rx, ry, cx, cy in (
        (odd, odd, even, even),
        (odd, even, even, odd),
    ):
        cross = _sin_potential_matrix(wc, dom, rx, cx, ry, cy)
        n1 = len(rx) * len(ry)
        n2 = len(cx) * len(cy)
        big = IArray.zeros((n1 + n2, n1 + n2))
        big[:n1, n1:] = cross
        big[n1:, :n1] = cross.T
        lam = IArray.zeros((n1 + n2,))
        lam[:n1] = lam_flat(rx, ry)
        lam[n1:] = lam_flat(cx, cy)
        yield _b_matrix(big, lam)


def _tail_lambda(dom: DomainRect, nprime: int) -> Interval:
    a = dom.lambda_mode(nprime + 1, 1)
    b = dom.lambda_mode(1, nprime + 1)
    return Interval(min(a.lo, b.lo), min(a.hi, b.hi))


def default_split_order(u: Series2D, p: int) -> int:
    """Smallest split order whose estimated coupling correction is negligible
    next to typical block minima (~0.2); larger orders only add near-identity
    rows while cubing the eigenvalue-enclosure cost."""
    dom = u.domain
    wbar = Interval(float(p)) * iv_pow_int(u.sup_abs_bound(), p - 1)
    bandwidth = (p - 1) * u.N
    for cut in range(1, p * u.N + 1):
        lam_tail_try = _tail_lambda(dom, bandwidth + cut)
        lam_cut_try = _tail_lambda(dom, cut)
        if lam_tail_try.lo <= wbar.hi:
            continue
        est = wbar.hi / math.sqrt(lam_tail_try.lo * lam_cut_try.lo)
        if est <= 0.05:
            return bandwidth + cut
    return max(p * u.N, 1)


def inverse_bound(u: Series2D, p: int, nprime: int | None = None) -> Interval:
    """K >= norm of (-Lap - p|u|^{p-1})^{-1} as an operator H^-1 -> H^1_0.

    Combines (i) eigenvalue enclosures of the preconditioned finite block,
    (ii) the tail bound 1 - Wbar/lambda_tail, and (iii) an off-diagonal
    coupling correction.  The potential has trigonometric degree (p-1)*N per
    dimension, so only finite modes with a component above nprime - (p-1)*N
    couple to the tail at all; the correction Wbar/sqrt(lambda_tail *
    lambda_cut) uses the smallest eigenvalue over those rows (falling back
    to lambda_1 when the split order is within the potential bandwidth).
    For even p the exactly-expanded potential p*u^{p-1} differs from
    p|u|^{p-1} only on {u < 0}; that perturbation is absorbed via the
    negative-part bound.
    """
    dom = u.domain
    wbar = Interval(float(p)) * iv_pow_int(u.sup_abs_bound(), p - 1)
    if nprime is None:
        nprime = default_split_order(u, p)
    lam_tail = _tail_lambda(dom, nprime)
    if not lam_tail.lo > wbar.hi:
        raise GapFailure(
            f"tail eigenvalue {lam_tail.lo:.4e} does not exceed potential "
            f"bound {wbar.hi:.4e} at split order {nprime}"
        )
    tail_lo = (Interval(1.0) - wbar / lam_tail).lo

    m_lo = tail_lo
    for block in _inverse_blocks(u, p, nprime):
        m_lo = min(m_lo, min_abs_eig_lower(block))

    bandwidth = (p - 1) * u.N
    if nprime > bandwidth:
        lam_cut = _tail_lambda(dom, nprime - bandwidth)
    else:
        lam_cut = dom.lambda1()
    coupling = (wbar / iv_sqrt(lam_tail * lam_cut)).hi
    eps_pert = 0.0
    if p % 2 == 0:
        eta = negative_part_sup(u).neg_sup
        eps_pert = (
            Interval(2.0 * p)
            * iv_pow_int(Interval(eta), p - 1)
            / first_eigenvalue_lower(dom)
        ).hi

    m = (Interval(m_lo) - Interval(coupling) - Interval(eps_pert)).lo
    if not m > 0.0:
        raise NotInvertible(
            f"inverse bound denominator {m:.4e} <= 0 at split order {nprime}"
        )
    k = Interval(1.0) / Interval(m)
    return Interval(k.lo, k.hi)


# -- Newton-Kantorovich ---------------------------------------------------------


@dataclass(frozen=True)
class KantorovichData:
    """Inputs of the Newton-Kantorovich radius computation."""

    delta: Interval  # H^-1 defect bound
    K: Interval  # inverse-linearization bound
    g: Interval  # derivative Lipschitz bound on the trial ball

    def __post_init__(self):
        for name in ("delta", "K", "g"):
            iv = getattr(self, name)
            if not (math.isfinite(iv.hi) and iv.lo >= 0.0):
                raise ValueError(f"{name} must be a finite nonnegative interval")


def lipschitz_bound(u: Series2D, p: int, R: float) -> Interval:
    """g >= Lipschitz constant of v -> p|v|^{p-1} (H^1_0 -> op-norm) on the
    ball of radius R about u, via Hoelder and the classical L^{p+1} bound."""
    if R < 0.0:
        raise ValueError("trial radius must be nonnegative")
    c = corollary_bound(2, p + 1, u.domain.measure())
    base = u.h01_norm() + Interval(R)
    g = (
        Interval(float(p * (p - 1)))
        * iv_pow_int(c, p + 1)
        * iv_pow_int(base, p - 2)
    )
    return Interval(max(g.lo, 0.0), g.hi)


def kantorovich_radius(kd: KantorovichData) -> tuple:
    """(r_h1, unique_radius) of the Newton-Kantorovich theorem.

    r = 2 K delta / (1 + sqrt(1 - 2 K^2 delta g))  (the stable form of
    (1 - sqrt(1-h))/(K g)), requiring h = 2 K^2 delta g < 1.  Uniqueness
    holds up to (1 + sqrt(1-h))/(K g), capped at a large finite value when
    g approaches 0 (the linear case is unique on every ball).
    """
    delta, k, g = kd.delta, kd.K, kd.g
    h = Interval(2.0) * k * k * delta * g
    if not h.hi < 1.0:
        raise ConditionFailure(
            f"Kantorovich condition violated: 2 K^2 delta g = {h.hi:.4e} >= 1"
        )
    disc = iv_sqrt(Interval(max(0.0, (Interval(1.0) - h).lo),
                            (Interval(1.0) - h).hi))
    r = Interval(2.0) * k * delta / (Interval(1.0) + disc)
    r = Interval(max(r.lo, 0.0), r.hi)
    if g.hi <= 0.0:
        return r, Interval(UNIQUE_RADIUS_CAP)
    unique_lo = ((Interval(1.0) + Interval(disc.lo)) /
                 (Interval(k.hi) * Interval(g.hi))).lo
    unique_lo = min(unique_lo, UNIQUE_RADIUS_CAP)
    return r, Interval(unique_lo, UNIQUE_RADIUS_CAP)


# -- L-infinity radius ------------------------------------------------------------


def linf_embedding_constant(domain: DomainRect, box: int = 400) -> Interval:
    """c with ||v||_inf <= c ||Lap v||_L2 on the sine-series closure.

    c^2 = (4/|Omega|) * sum over all modes of lambda_ij^{-2}; the sum is a
    rigorous box partial sum plus a monotone integral tail bound.
    """
    modes = np.arange(1, box + 1)
    lam = domain.lambda_grid(modes, modes)
    inv2 = (IArray(np.ones(lam.shape)) / lam).square()
    s = isum(inv2)
    l1, l2_ = Interval(domain.L1), Interval(domain.L2)
    # tail over {i > box} x {j >= 1} plus the transposed strip
    tail = (
        (l2_ * l1 ** 3 + l1 * l2_ ** 3)
        / (Interval(8.0 * box * box) * PI ** 3)
    )
    total = Interval(max(s.lo, 0.0), (s + Interval(0.0, tail.hi)).hi)
    c2 = Interval(4.0) / domain.measure() * total
    return iv_sqrt(c2)


def linf_radius(u: Series2D, p: int, r_h1: Interval, domain=None,
                delta_l2: Interval | None = None, rho_max: float = 1e3,
                iterations: int = 60) -> Interval:
    """r_inf >= L-infinity distance of the true solution from u.

    Bootstrap: e = u_true - u solves -Lap e = w, so ||e||_inf <= c * ||w||_L2
    with ||w||_L2 <= delta_l2 + p (sup|u| + rho)^{p-1} r_h1 / sqrt(lambda_1)
    whenever rho >= ||e||_inf.  An a-priori bound (Hoelder + classical
    embedding constants, no sup norm) seeds rho; the monotone map is then
    iterated downward, every iterate being a valid bound.
    """
    dom = domain if domain is not None else u.domain
    if delta_l2 is None:
        _, delta_l2 = defect_bounds(u, p)
    c_inf = linf_embedding_constant(dom)
    lam1 = first_eigenvalue_lower(dom)
    r = Interval(max(0.0, r_h1.lo), r_h1.hi)
    norm_u = u.h01_norm()
    sup_u = Interval(0.0, u.sup_abs_bound().hi)

    # a-priori seed: ||w_nl||_L2 <= p ||max(|u_true|,|u|)||_{L^{2p}}^{p-1}
    # * ||e||_{L^{2p}} with the classical L^{2p} constant
    c2p = corollary_bound(2, 2 * p, dom.measure())
    base = Interval(2.0) * norm_u + r
    t = (
        c_inf
        * (
            delta_l2
            + Interval(float(p)) * iv_pow_int(c2p, p) * iv_pow_int(base, p - 1) * r
        )
    ).hi
    if not (math.isfinite(t) and t >= 0.0):
        raise FixedPointFailure("a-priori L-infinity seed is not finite")

    best = t
    for _ in range(iterations):
        ft = (
            c_inf
            * (
                delta_l2
                + Interval(float(p))
                * iv_pow_int(sup_u + Interval(0.0, best), p - 1)
                * r
                / iv_sqrt(lam1)
            )
        ).hi
        if not math.isfinite(ft):
            break
        best = min(best, ft)
        if ft >= best * (1.0 - 1e-15):
            break
    if best > rho_max:
        raise FixedPointFailure(
            f"L-infinity radius {best:.4e} exceeds rho_max = {rho_max:.4e}"
        )
    return Interval(0.0, best)


# -- positiveness -----------------------------------------------------------------


@dataclass(frozen=True)
class PositivenessAudit:
    """Audit record of the positiveness certificate."""

    verdict: bool
    point: tuple | None
    point_value_lo: float
    positivity_margin: float
    neg_sup: float
    neg_power_hi: float
    lambda1_lo: float
    spectral_margin: float
    reason: str


def positiveness_certificate(u: Series2D, r_inf: Interval, p: int,
                             domain: DomainRect | None = None) -> PositivenessAudit:
    """Verify the hypotheses forcing positivity of the true solution.

    (a) some point x0 with u(x0) - r_inf > 0 rigorously, and
    (b) (r_inf + sup u_-)^{p-1} < lambda_1 rigorously and strictly.
    """
    dom = domain if domain is not None else u.domain
    lam1_lo = first_eigenvalue_lower(dom).lo

    best_margin = -math.inf
    best_point = None
    best_lo = -math.inf
    fracs = (0.5, 0.25, 0.75)
    for fx in fracs:
        for fy in fracs:
            x0 = fx * dom.L1
            y0 = fy * dom.L2
            val = u.eval(x0, y0)
            margin = (Interval(val.lo) - Interval(r_inf.hi)).lo
            if margin > best_margin:
                best_margin = margin
                best_point = (x0, y0)
                best_lo = val.lo
    point_ok = best_margin > 0.0

    eta = negative_part_sup(u).neg_sup
    neg_power = iv_pow_int(Interval(r_inf.hi) + Interval(eta), p - 1).hi
    spectral_margin = (Interval(lam1_lo) - Interval(neg_power)).lo
    spectral_ok = neg_power < lam1_lo

    if point_ok and spectral_ok:
        reason = "verified"
    elif not point_ok:
        reason = "no positivity subdomain"
    else:
        reason = "negative-part spectral condition failed"
    return PositivenessAudit(
        verdict=point_ok and spectral_ok,
        point=best_point,
        point_value_lo=best_lo,
        positivity_margin=best_margin,
        neg_sup=eta,
        neg_power_hi=neg_power,
        lambda1_lo=lam1_lo,
        spectral_margin=spectral_margin,
        reason=reason,
    )


# -- orchestration ----------------------------------------------------------------


@dataclass
class CertifiedBall:
    """Certified existence ball around an approximate extremizer."""

    center: Series2D
    r_h1: Interval
    r_inf: Interval
    unique_radius: Interval
    positive: bool
    audit: PositivenessAudit
    kantorovich: KantorovichData = field(repr=False, default=None)
    delta_l2: Interval = field(repr=False, default=None)
    nprime: int = 0

    def to_dict(self, p: int | None = None) -> dict:
        c = self.center
        digest = hashlib.sha256(
            c.coeffs.lo.tobytes() + c.coeffs.hi.tobytes()
        ).hexdigest()
        d = {
            "format": "sobemb-certificate/1",
            "domain": {"L1": c.domain.L1.hex(), "L2": c.domain.L2.hex()},
            "N": c.N,
            "coefficient_digest": digest,
            "r_h1": [self.r_h1.lo.hex(), self.r_h1.hi.hex()],
            "r_inf": [self.r_inf.lo.hex(), self.r_inf.hi.hex()],
            "unique_radius": [self.unique_radius.lo.hex(),
                              self.unique_radius.hi.hex()],
            "positive": self.positive,
            "margins": {
                "positivity": self.audit.positivity_margin,
                "spectral": self.audit.spectral_margin,
            },
            "split_order": self.nprime,
        }
        if p is not None:
            d["p"] = p
        if self.kantorovich is not None:
            kd = self.kantorovich
            d["kantorovich"] = {
                "delta": [kd.delta.lo.hex(), kd.delta.hi.hex()],
                "K": [kd.K.lo.hex(), kd.K.hi.hex()],
                "g": [kd.g.lo.hex(), kd.g.hi.hex()],
            }
        return d

    def to_json(self, p: int | None = None) -> str:
        return json.dumps(self.to_dict(p))


def certify_ball(u: Series2D, p: int, nprime: int | None = None,
                 rho_max: float = 1e3, max_gap_retries: int = 3) -> CertifiedBall:
    """Full certification pipeline for one approximate solution."""
    if nprime is None:
        nprime = default_split_order(u, p)
    d_hm1, d_l2 = defect_bounds(u, p)

    k = None
    for attempt in range(max_gap_retries + 1):
        try:
            k = inverse_bound(u, p, nprime)
            break
        except (GapFailure, NotInvertible):
            if attempt == max_gap_retries:
                raise
            nprime *= 2

    # trial-radius loop: g is evaluated on a ball of radius R; the certified
    # radius must satisfy r <= R for the Lipschitz bound to apply
    r_trial = max(4.0 * (k * d_hm1).hi, 1e-14)
    r_h1 = unique = kd = None
    for _ in range(8):
        g = lipschitz_bound(u, p, r_trial)
        kd = KantorovichData(d_hm1, k, g)
        r_h1, unique = kantorovich_radius(kd)
        if r_h1.hi <= r_trial:
            break
        r_trial *= 4.0
    else:
        raise ConditionFailure("no trial radius R with certified r <= R found")

    r_inf = linf_radius(u, p, r_h1, u.domain, delta_l2=d_l2, rho_max=rho_max)
    audit = positiveness_certificate(u, r_inf, p, u.domain)
    return CertifiedBall(
        center=u,
        r_h1=r_h1,
        r_inf=r_inf,
        unique_radius=unique,
        positive=audit.verdict,
        audit=audit,
        kantorovich=kd,
        delta_l2=d_l2,
        nprime=nprime,
    )
