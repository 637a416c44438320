"""Closed-form embedding constants and the two-sided enclosure formula.

Upper bounds for the best constant of H^1_0 -> L^p:
  * the symmetrization-based constant (via the sharp W^{1,q}(R^n) -> L^p(R^n)
    constant with q = np/(n+p) and a measure factor),
  * the spectral bound depending only on a lower bound rho <= lambda_1.

The extremal two-sided enclosure combines the L^{p+1}/H^1_0 ratio of a
certified approximate extremizer with its certified error radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal

from .errors import CertificateMissing, DomainError, HypothesisFailure, SoundnessViolation
from .intervals import Interval, iv_gamma, iv_pi, iv_pow_real, iv_sqrt
from .series import PositivityHint, Series2D, lp_norm

UNIQUE_RADIUS_CAP = 1e300


def talenti_constant(n: int, q) -> Interval:
    """Sharp constant of the W^{1,q}(R^n) -> L^{nq/(n-q)}(R^n) embedding."""
    if n < 2:
        raise DomainError("dimension must be >= 2")
    qi = Interval._coerce(q)
    if not (qi.lo > 1.0 and qi.hi < n):
        raise DomainError(f"exponent q must lie in (1, {n})")
    ni = Interval(float(n))
    one = Interval(1.0)
    inv_q = one / qi
    pi = iv_pi()
    f1 = iv_pow_real(pi, Interval(-0.5))
    f2 = iv_pow_real(ni, -inv_q)
    f3 = iv_pow_real((qi - one) / (ni - qi), one - inv_q)
    bracket = (
        iv_gamma(one + ni / Interval(2.0))
        * iv_gamma(ni)
        / (iv_gamma(ni / qi) * iv_gamma(one + ni - ni / qi))
    )
    f4 = iv_pow_real(bracket, one / ni)
    return f1 * f2 * f3 * f4


def corollary_bound(n: int, p, measure) -> Interval:
    """Upper bound |Omega|^{(2-q)/(2q)} * T with q = np/(n+p)."""
    pi_ = Interval._coerce(p)
    mi = Interval._coerce(measure)
    if mi.lo <= 0.0:
        raise DomainError("measure must be positive")
    lo_edge = n / (n - 1)
    if not pi_.lo > lo_edge:
        raise DomainError(f"exponent p must exceed {lo_edge}")
    if n >= 3 and not pi_.hi < 2 * n / (n - 2):
        raise DomainError(f"exponent p must be below {2 * n / (n - 2)}")
    ni = Interval(float(n))
    q = ni * pi_ / (ni + pi_)
    t = talenti_constant(n, q)
    expo = (Interval(2.0) - q) / (Interval(2.0) * q)
    return iv_pow_real(mi, expo) * t


def plum_bound(n: int, p, rho: Interval) -> Interval:
    """Upper bound from a rigorous lower bound rho <= lambda_1.

    Only rho.lo is used (rho enters with a negative exponent, so any true
    lower spectral bound yields a valid upper bound).
    """
    pi_ = Interval._coerce(p)
    if not isinstance(rho, Interval):
        raise DomainError("rho must be an Interval (certified lower bound)")
    if not rho.lo > 0.0:
        raise DomainError("rho must be positive")
    rho_lo = Interval(rho.lo)
    one = Interval(1.0)
    if n == 2:
        if not pi_.lo >= 2.0:
            raise DomainError("exponent p must be >= 2")
        nu = int(pi_.lo // 2)
        half = Interval(0.5)
        expo = half + (Interval(2.0 * nu) - Interval(3.0)) / pi_
        prod = one
        for k in range(nu - 1):
            prod = prod * (pi_ / Interval(2.0) - Interval(float(k)))
        return (
            iv_pow_real(half, expo)
            * iv_pow_real(prod, Interval(2.0) / pi_)
            * iv_pow_real(rho_lo, -one / pi_)
        )
    if n < 3:
        raise DomainError("dimension must be >= 2")
    hi_edge = 2 * n / (n - 2)
    if not (pi_.lo >= 2.0 and pi_.hi <= hi_edge):
        raise DomainError(f"exponent p must lie in [2, {hi_edge}]")
    ni = Interval(float(n))
    s = ni * (one / pi_ - Interval(0.5) + one / ni)
    base = (ni - one) / (iv_sqrt(ni) * (ni - Interval(2.0)))
    return iv_pow_real(base, one - s) * iv_pow_real(rho_lo, -s / Interval(2.0))


@dataclass(frozen=True)
class ClassicalParams:
    """Derived parameters of the closed-form upper bounds."""

    n: int
    p: float
    q: Interval
    measure: Interval
    rho: Interval
    s: Interval | None
    nu: int

    @staticmethod
    def derive(n: int, p: float, measure, rho: Interval) -> "ClassicalParams":
        pi_ = Interval._coerce(p)
        ni = Interval(float(n))
        one = Interval(1.0)
        q = ni * pi_ / (ni + pi_)
        s = None if n == 2 else ni * (one / pi_ - Interval(0.5) + one / ni)
        return ClassicalParams(
            n=n, p=float(p), q=q, measure=Interval._coerce(measure),
            rho=rho, s=s, nu=int(p // 2),
        )


@dataclass(frozen=True)
class EnclosureResult:
    """Two-sided enclosure of the best embedding constant."""

    p: int  # the Lebesgue exponent of the embedding H^1_0 -> L^p
    lower: float
    upper: float
    sources: dict
    domain: object

    def width(self) -> float:
        return self.upper - self.lower


def enclosure_from_ball(u: Series2D, r_h1: Interval, p: int, positive: bool,
                        cert: PositivityHint | None = None) -> tuple:
    """Two-sided bounds on C_{p+1} from a certified extremizer ball.

    lower = lp.lo / h01.hi and upper = lp.hi / (h01.lo - 2 r_h1.hi); valid
    when the certified ball contains the (unique) positive extremizer.
    """
    if not positive:
        raise CertificateMissing(
            "enclosure requires a verified positiveness certificate"
        )
    h01 = u.h01_norm()
    two_r = 2.0 * r_h1.hi
    if not h01.lo > two_r:
        raise HypothesisFailure(
            f"norm lower bound {h01.lo:.6e} must exceed 2 r_h1 = {two_r:.6e}"
        )
    lp = lp_norm(u, float(p + 1), cert)
    lower = (Interval(lp.lo) / Interval(h01.hi)).lo
    denom = Interval(h01.lo) - Interval(two_r)
    upper = (Interval(lp.hi) / denom).hi
    return max(lower, 0.0), upper


def best_enclosure(extremal, classical, p: int, domain) -> EnclosureResult:
    """Combine the extremal enclosure with classical upper bounds.

    extremal: (lower, upper) pair or None; classical: list of (tag, Interval).
    """
    lower = 0.0
    uppers = []
    if extremal is not None:
        lower = float(extremal[0])
        uppers.append(("extremal", float(extremal[1])))
    for tag, iv in classical:
        uppers.append((tag, float(iv.hi)))
    if not uppers:
        raise DomainError("no upper bounds supplied")
    tag, upper = min(uppers, key=lambda t: t[1])
    if lower > upper:
        raise SoundnessViolation(
            f"lower bound {lower!r} exceeds upper bound {upper!r} ({tag})"
        )
    return EnclosureResult(
        p=p, lower=lower, upper=upper,
        sources={"lower": "extremal" if extremal is not None else "trivial",
                 "upper": tag},
        domain=domain,
    )


def outward_decimal(x: float, direction: int, sig: int = 14) -> str:
    """Decimal string with the last digit rounded outward (direction +-1)."""
    if x == 0.0:
        return "0"
    d = Decimal(x)
    exp = d.adjusted() - sig + 1
    mode = ROUND_FLOOR if direction < 0 else ROUND_CEILING
    return str(d.quantize(Decimal(1).scaleb(exp), rounding=mode))
