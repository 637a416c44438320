"""Vectorized interval arrays (numpy lo/hi pairs) with outward rounding.

Elementwise operations widen the round-to-nearest result by one ulp in each
direction, which contains the exact result since round-to-nearest error is
at most 0.5 ulp.  Reductions (sums, matrix products) use a-priori floating
point error bounds of the classical (k u / (1 - k u)) * sum|x| form instead
of per-step widening, so they stay BLAS-fast.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import OverflowError_
from .intervals import Interval

_EPS = 2.0 ** -52
_TINY = 1e-290  # absorbs underflow in radius computations
_RAD_FLOOR = 1e-200  # lower clamp for nonzero radii entering BLAS products


def _dn(x):
    return np.nextafter(x, -np.inf)


def _up(x):
    return np.nextafter(x, np.inf)


def _chk(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise OverflowError_("interval array endpoint overflowed")


class IArray:
    """Array of intervals stored as two float64 arrays of equal shape."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None, _unsafe=False):
        lo = np.asarray(lo, dtype=np.float64)
        hi = lo.copy() if hi is None else np.asarray(hi, dtype=np.float64)
        if not _unsafe:
            _chk(lo, hi)
            if np.any(lo > hi):
                raise ValueError("lo > hi in IArray")
        self.lo = lo
        self.hi = hi

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zeros(shape) -> "IArray":
        z = np.zeros(shape)
        return IArray(z, z.copy(), _unsafe=True)

    @staticmethod
    def from_scalar(iv: Interval, shape=()) -> "IArray":
        return IArray(np.full(shape, iv.lo), np.full(shape, iv.hi), _unsafe=True)

    def copy(self) -> "IArray":
        return IArray(self.lo.copy(), self.hi.copy(), _unsafe=True)

    # -- structure ----------------------------------------------------------

    @property
    def shape(self):
        return self.lo.shape

    @property
    def size(self):
        return self.lo.size

    def __getitem__(self, idx):
        return IArray(self.lo[idx], self.hi[idx], _unsafe=True)

    def __setitem__(self, idx, value: "IArray"):
        self.lo[idx] = value.lo
        self.hi[idx] = value.hi

    def item(self, *idx) -> Interval:
        return Interval(float(self.lo[idx]), float(self.hi[idx]))

    def reshape(self, *shape):
        return IArray(self.lo.reshape(*shape), self.hi.reshape(*shape), _unsafe=True)

    @property
    def T(self):
        return IArray(self.lo.T, self.hi.T, _unsafe=True)

    def mid(self):
        return self.lo + 0.5 * (self.hi - self.lo)

    def rad(self):
        m = self.mid()
        return _up(np.maximum(_up(m - self.lo), _up(self.hi - m)))

    def mag(self):
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    def mig(self):
        m = np.minimum(np.abs(self.lo), np.abs(self.hi))
        m[(self.lo <= 0.0) & (self.hi >= 0.0)] = 0.0
        return m

    def width(self):
        return _up(self.hi - self.lo)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=np.float64)
        return bool(np.all(self.lo <= x) and np.all(x <= self.hi))

    # -- elementwise arithmetic ----------------------------------------------

    @staticmethod
    def _coerce(x) -> "IArray":
        if isinstance(x, IArray):
            return x
        if isinstance(x, Interval):
            return IArray(np.float64(x.lo), np.float64(x.hi), _unsafe=True)
        return IArray(np.asarray(x, dtype=np.float64))

    def __neg__(self):
        return IArray(-self.hi, -self.lo, _unsafe=True)

    def __abs__(self):
        return IArray(self.mig(), self.mag(), _unsafe=True)

    def __add__(self, other):
        b = IArray._coerce(other)
        lo, hi = _dn(self.lo + b.lo), _up(self.hi + b.hi)
        # adding the exact interval [0, 0] is exact; skip the widening there
        # so structural zeros (parity patterns) survive accumulation
        za = (self.lo == 0.0) & (self.hi == 0.0)
        zb = (b.lo == 0.0) & (b.hi == 0.0)
        lo = np.where(za, np.broadcast_to(b.lo, lo.shape),
                      np.where(zb, np.broadcast_to(self.lo, lo.shape), lo))
        hi = np.where(za, np.broadcast_to(b.hi, hi.shape),
                      np.where(zb, np.broadcast_to(self.hi, hi.shape), hi))
        _chk(lo, hi)
        return IArray(lo, hi, _unsafe=True)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-IArray._coerce(other))

    def __rsub__(self, other):
        return IArray._coerce(other) + (-self)

    def __mul__(self, other):
        b = IArray._coerce(other)
        c1 = self.lo * b.lo
        c2 = self.lo * b.hi
        c3 = self.hi * b.lo
        c4 = self.hi * b.hi
        lo = _dn(np.minimum(np.minimum(c1, c2), np.minimum(c3, c4)))
        hi = _up(np.maximum(np.maximum(c1, c2), np.maximum(c3, c4)))
        # a factor that is exactly [0, 0] makes the product exactly zero
        z = ((self.lo == 0.0) & (self.hi == 0.0)) | ((b.lo == 0.0) & (b.hi == 0.0))
        lo = np.where(z, 0.0, lo)
        hi = np.where(z, 0.0, hi)
        _chk(lo, hi)
        return IArray(lo, hi, _unsafe=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = IArray._coerce(other)
        if np.any((b.lo <= 0.0) & (b.hi >= 0.0)):
            from .errors import DivisionByZeroInterval

            raise DivisionByZeroInterval("array denominator contains 0")
        c1 = self.lo / b.lo
        c2 = self.lo / b.hi
        c3 = self.hi / b.lo
        c4 = self.hi / b.hi
        lo = _dn(np.minimum(np.minimum(c1, c2), np.minimum(c3, c4)))
        hi = _up(np.maximum(np.maximum(c1, c2), np.maximum(c3, c4)))
        _chk(lo, hi)
        return IArray(lo, hi, _unsafe=True)

    def square(self):
        lo2 = self.lo * self.lo
        hi2 = self.hi * self.hi
        lo = np.maximum(_dn(np.minimum(lo2, hi2)), 0.0)
        hi = _up(np.maximum(lo2, hi2))
        lo[(self.lo <= 0.0) & (self.hi >= 0.0)] = 0.0
        _chk(hi)
        return IArray(lo, hi, _unsafe=True)

    # -- reductions ------------------------------------------------------------


def _sum_dir(x: np.ndarray, direction: int) -> float:
    """Rigorous directed-rounding bound for sum(x)."""
    n = x.size
    if n == 0:
        return 0.0
    s = float(np.sum(x))
    if not math.isfinite(s):
        raise OverflowError_("sum overflowed")
    g = (n * _EPS) / (1.0 - n * _EPS)
    bound = float(np.sum(np.abs(x))) * g
    bound = bound * (1.0 + 4.0 * n * _EPS) + _TINY  # slack for the |x| sum itself
    return math.nextafter(s - bound, -math.inf) if direction < 0 else math.nextafter(
        s + bound, math.inf
    )


def isum(a: IArray) -> Interval:
    return Interval(_sum_dir(a.lo.ravel(), -1), _sum_dir(a.hi.ravel(), +1))


def _gamma_fac(k: int) -> float:
    g = (k + 4) * _EPS
    if g >= 0.5:
        raise OverflowError_("matrix dimension too large for fast rigorous matmul")
    return g / (1.0 - g)


def imatmul(a: IArray, b: IArray) -> IArray:
    """Rigorous interval matrix product via midpoint-radius (Rump's scheme).

    For nonnegative float matrices the BLAS product underestimates the exact
    product by at most the factor gamma_k; all such products below are
    inflated accordingly, plus an absolute underflow cushion.
    """
    am, ar = a.mid(), a.rad()
    bm, br = b.mid(), b.rad()
    # round tiny nonzero radii up to a still-negligible normal float: a valid
    # (larger) radius, and it keeps BLAS off its orders-of-magnitude slower
    # subnormal arithmetic paths -- the floor is high enough that products
    # with small partner entries stay normal too
    ar = np.where((ar != 0.0) & (ar < _RAD_FLOOR), _RAD_FLOOR, ar)
    br = np.where((br != 0.0) & (br < _RAD_FLOOR), _RAD_FLOOR, br)
    k = am.shape[-1]
    g = _gamma_fac(k)

    cm = am @ bm
    abs_am = np.abs(am)
    abs_bm = np.abs(bm)
    p = abs_am @ abs_bm  # bounds |am||bm| up to factor (1-g)
    a_thin = not ar.any()
    b_thin = not br.any()
    if a_thin and b_thin:
        rad = g * p
    elif b_thin:
        rad = ar @ abs_bm + g * p
    elif a_thin:
        rad = abs_am @ br + g * p
    else:
        rad = ar @ (abs_bm + br) + abs_am @ br + g * p
    rad = _up(rad * (1.0 + 6.0 * g) + g * p * g + 4.0 * _TINY)
    lo = _dn(cm - rad)
    hi = _up(cm + rad)
    _chk(lo, hi)
    return IArray(lo, hi, _unsafe=True)


def sin_points(args: IArray) -> IArray:
    """Enclosure of sin over an array of thin intervals.

    Valid for narrow arguments: beyond the endpoint values, an interior
    critical point can exceed them by at most (width/2)^2 / 2 < width^2.
    """
    l1 = np.sin(args.lo)
    l2 = np.sin(args.hi)
    pad = _up(args.width() ** 2)
    lo = np.minimum(l1, l2)
    hi = np.maximum(l1, l2)
    for _ in range(2):  # 2-ulp libm accuracy margin
        lo = _dn(lo)
        hi = _up(hi)
    lo = np.maximum(_dn(lo - pad), -1.0)
    hi = np.minimum(_up(hi + pad), 1.0)
    return IArray(lo, hi, _unsafe=True)
