"""Outward-rounded interval arithmetic over binary64 endpoints.

Every operation returns an interval containing the exact mathematical image
of its inputs.  Directed rounding is realized by nextafter-widening around
the round-to-nearest result (error <= 0.5 ulp for +,-,*,/ and sqrt, so one
nextafter step in each direction is sufficient).  Library elementary
functions (exp, log, sin) are assumed accurate to <= 1 ulp (glibc libm
documents < 0.6 ulp for these on binary64); their endpoint values are
widened by 2 ulps.

Overflow policy: an endpoint leaving the finite range raises
OverflowError_, it never becomes infinite.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DivisionByZeroInterval, DomainError, OverflowError_

_INF = math.inf
_MAX_TRIG_ARG = 2.0 ** 10  # no trig argument reduction beyond this


def _dn(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


class Interval:
    """Closed interval [lo, hi] with finite binary64 endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = float(lo)
        hi = lo if hi is None else float(hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise OverflowError_(f"non-finite endpoint: [{lo}, {hi}]")
        if lo > hi:
            raise ValueError(f"lo > hi: [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_fraction(fr: Fraction) -> "Interval":
        f = float(fr)
        if Fraction(f) == fr:
            return Interval(f)
        return Interval(_dn(f), _up(f))

    # -- queries -----------------------------------------------------------

    def width(self) -> float:
        return _up(self.hi - self.lo)

    def mid(self) -> float:
        return self.lo + 0.5 * (self.hi - self.lo)

    def mag(self) -> float:
        """max |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def mig(self) -> float:
        """min |x| over the interval."""
        if self.lo <= 0.0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= float(x) <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __eq__(self, other):
        return (
            isinstance(other, Interval)
            and self.lo == other.lo
            and self.hi == other.hi
        )

    def __hash__(self):
        return hash((self.lo, self.hi))

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Interval":
        if isinstance(x, Interval):
            return x
        return Interval(float(x))

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __abs__(self):
        return Interval(self.mig(), self.mag())

    def __add__(self, other):
        b = Interval._coerce(other)
        lo = _add_dir(self.lo, b.lo, -1)
        hi = _add_dir(self.hi, b.hi, +1)
        return Interval(lo, hi)

    __radd__ = __add__

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return iv_pow_int(self, k)

    def __sub__(self, other):
        return self + (-Interval._coerce(other))

    def __rsub__(self, other):
        return Interval._coerce(other) - self

    def __mul__(self, other):
        b = Interval._coerce(other)
        cands = (
            _mul_dir(self.lo, b.lo),
            _mul_dir(self.lo, b.hi),
            _mul_dir(self.hi, b.lo),
            _mul_dir(self.hi, b.hi),
        )
        lo = min(c[0] for c in cands)
        hi = max(c[1] for c in cands)
        return Interval(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = Interval._coerce(other)
        if b.lo <= 0.0 <= b.hi:
            raise DivisionByZeroInterval(f"denominator {b} contains 0")
        cands = (
            _div_dir(self.lo, b.lo),
            _div_dir(self.lo, b.hi),
            _div_dir(self.hi, b.lo),
            _div_dir(self.hi, b.hi),
        )
        lo = min(c[0] for c in cands)
        hi = max(c[1] for c in cands)
        return Interval(lo, hi)

    def __rtruediv__(self, other):
        return Interval._coerce(other) / self


def _check_finite(x: float) -> float:
    if not math.isfinite(x):
        raise OverflowError_("interval endpoint overflowed")
    return x


def _add_dir(x: float, y: float, direction: int) -> float:
    """x + y rounded toward -inf (direction=-1) or +inf (+1), using two-sum."""
    s = x + y
    _check_finite(s)
    bb = s - x
    err = (x - (s - bb)) + (y - bb)  # exact residual of the fl addition
    if direction < 0:
        return s if err >= 0.0 else _check_finite(_dn(s))
    return s if err <= 0.0 else _check_finite(_up(s))


def _mul_dir(x: float, y: float):
    """Enclosure [down, up] of the exact product x*y."""
    p = x * y
    _check_finite(p)
    if x == 0.0 or y == 0.0:
        return (0.0, 0.0)
    return (_check_finite(_dn(p)), _check_finite(_up(p)))


def _div_dir(x: float, y: float):
    q = x / y
    _check_finite(q)
    if x == 0.0:
        return (0.0, 0.0)
    return (_check_finite(_dn(q)), _check_finite(_up(q)))


# -- constants ---------------------------------------------------------------

#: enclosure of pi (math.pi rounds down: pi = 3.14159265358979323846... >
#: 3.141592653589793115997963...)
PI = Interval(math.pi, _up(math.pi))
PI_HALF = Interval(math.pi / 2.0, _up(math.pi / 2.0))  # pi/2 exact halving of PI
TWO_PI = Interval(2.0 * math.pi, _up(2.0 * math.pi))


def iv_pi() -> Interval:
    return PI


# -- elementary functions ----------------------------------------------------


def _libm_enclose(f, x: float, ulps: int = 2):
    v = f(x)
    _check_finite(v)
    lo, hi = v, v
    for _ in range(ulps):
        lo = _dn(lo)
        hi = _up(hi)
    return lo, hi


def iv_sqrt(a: Interval) -> Interval:
    if a.lo < 0.0:
        raise DomainError(f"sqrt of {a}")
    rl = math.sqrt(a.lo)
    rh = math.sqrt(a.hi)
    # math.sqrt is correctly rounded; exactness detectable in rationals
    lo = rl if Fraction(rl) ** 2 == Fraction(a.lo) else max(0.0, _dn(rl))
    hi = rh if Fraction(rh) ** 2 == Fraction(a.hi) else _up(rh)
    return Interval(lo, hi)


def iv_exp(a: Interval) -> Interval:
    lo, _ = _libm_enclose(math.exp, a.lo)
    _, hi = _libm_enclose(math.exp, a.hi)
    return Interval(max(0.0, lo), hi)


def iv_ln(a: Interval) -> Interval:
    if a.lo <= 0.0:
        raise DomainError(f"ln of {a}")
    lo, _ = _libm_enclose(math.log, a.lo)
    _, hi = _libm_enclose(math.log, a.hi)
    return Interval(lo, hi)


def iv_sin(a: Interval) -> Interval:
    if max(abs(a.lo), abs(a.hi)) > _MAX_TRIG_ARG:
        raise DomainError(f"sin argument beyond +-2^10: {a}")
    if a.hi - a.lo >= TWO_PI.hi:
        return Interval(-1.0, 1.0)
    l1, h1 = _libm_enclose(math.sin, a.lo)
    l2, h2 = _libm_enclose(math.sin, a.hi)
    lo, hi = min(l1, l2), max(h1, h2)
    # widen to +-1 whenever a critical point (2m+-1/2)*pi may lie inside
    m0 = math.floor(a.lo / (2.0 * math.pi)) - 1
    m1 = math.floor(a.hi / (2.0 * math.pi)) + 1
    for m in range(m0, m1 + 1):
        cmax = Interval(4 * m + 1) * PI_HALF
        if cmax.hi >= a.lo and cmax.lo <= a.hi:
            hi = 1.0
        cmin = Interval(4 * m + 3) * PI_HALF
        if cmin.hi >= a.lo and cmin.lo <= a.hi:
            lo = -1.0
    return Interval(max(lo, -1.0), min(hi, 1.0))


def iv_cos(a: Interval) -> Interval:
    return iv_sin(a + PI_HALF)


def iv_pow_int(a: Interval, k: int) -> Interval:
    if k < 0:
        return Interval(1.0) / iv_pow_int(a, -k)
    if k == 0:
        return Interval(1.0)
    if k % 2 == 0:
        return _binexp(abs(a), k)
    lo_end = _binexp(Interval(a.lo), k)
    hi_end = _binexp(Interval(a.hi), k)
    return lo_end.hull(hi_end)


def _binexp(a: Interval, k: int) -> Interval:
    r = Interval(1.0)
    base = a
    while k:
        if k & 1:
            r = r * base
        k >>= 1
        if k:
            base = base * base
    return r


def iv_pow_real(a: Interval, y) -> Interval:
    if a.lo <= 0.0:
        raise DomainError(f"pow_real base {a}")
    return iv_exp(Interval._coerce(y) * iv_ln(a))


# -- Gamma function -----------------------------------------------------------

# Bernoulli numbers B_2..B_18 as exact rationals; the Stirling series for
# ln Gamma(x), x real > 0, truncated after the B_16 term has remainder
# bounded in absolute value by the first omitted (B_18) term.
_BERNOULLI = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
]
_B18 = Fraction(43867, 798)
_STIRLING_SHIFT = 12.0  # Stirling evaluated only for arguments >= this

_HALF_LN_TWO_PI = iv_ln(TWO_PI) * Interval(0.5)


def _ln_gamma_stirling(z: Interval) -> Interval:
    """ln Gamma on an interval with z.lo >= _STIRLING_SHIFT."""
    t = (z - Interval(0.5)) * iv_ln(z) - z + _HALF_LN_TWO_PI
    zinv2 = Interval(1.0) / (z * z)
    term = Interval(1.0) / z
    for j, b2j in enumerate(_BERNOULLI, start=1):
        coef = Interval.from_fraction(b2j / (2 * j * (2 * j - 1)))
        t = t + coef * term
        term = term * zinv2
    # remainder: first omitted term (j = 9), valid sign-agnostically
    rmag = (Interval.from_fraction(_B18 / (18 * 17)) * term).mag()
    return t + Interval(-rmag, rmag)


def iv_gamma(a: Interval) -> Interval:
    if a.lo <= 0.0:
        raise DomainError(f"gamma requires positive argument, got {a}")
    k = max(0, math.ceil(_STIRLING_SHIFT - a.lo))
    g = _ln_gamma_stirling(a + Interval(float(k)))
    result = iv_exp(g)
    for i in range(k):
        result = result / (a + Interval(float(i)))
    return result


# -- spec-facing dispatch ------------------------------------------------------


def iv_arith(op: str, a: Interval, b: Interval) -> Interval:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def iv_elem(fn: str, a: Interval, arg=None) -> Interval:
    if fn == "sqrt":
        return iv_sqrt(a)
    if fn == "exp":
        return iv_exp(a)
    if fn == "ln":
        return iv_ln(a)
    if fn == "sin":
        return iv_sin(a)
    if fn == "pow_real":
        return iv_pow_real(a, arg)
    if fn == "pow_int":
        return iv_pow_int(a, int(arg))
    raise ValueError(f"unknown elementary function {fn!r}")
