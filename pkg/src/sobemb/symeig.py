"""Rigorous eigenvalue enclosures for symmetric interval matrices.

Technique: diagonalize the midpoint matrix approximately in floating point,
transform the interval matrix with the (approximately orthogonal) eigenvector
matrix V, and apply Gershgorin to C = V^T A V.  Non-orthogonality of V is
handled through G = V^T V: the eigenvalues of any A_t in the interval matrix
equal those of the symmetric pencil (V^T A_t V, G), i.e. of
S = G^{-1/2} (V^T A_t V) G^{-1/2}, and ||S - V^T A_t V|| is explicitly
bounded via ||G - I||.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotInvertible
from .intervals import Interval
from .ivarray import IArray, _dn, _up, imatmul


@dataclass
class SymMatrix:
    """Symmetric interval matrix; entries symmetrized by hull on construction."""

    entries: IArray

    def __post_init__(self):
        a = self.entries
        if a.lo.ndim != 2 or a.lo.shape[0] != a.lo.shape[1]:
            raise ValueError("SymMatrix requires a square 2-d array")
        lo = np.minimum(a.lo, a.lo.T)
        hi = np.maximum(a.hi, a.hi.T)
        self.entries = IArray(lo, hi, _unsafe=True)

    @property
    def n(self) -> int:
        return self.entries.lo.shape[0]

    @staticmethod
    def from_point(m: np.ndarray) -> "SymMatrix":
        return SymMatrix(IArray(np.asarray(m, dtype=np.float64)))


@dataclass
class EigEnclosure:
    """Gershgorin-style enclosure of the full spectrum of a SymMatrix family."""

    disc_lo: np.ndarray  # per-disc lower endpoints
    disc_hi: np.ndarray  # per-disc upper endpoints
    lam_min: Interval  # brackets the smallest eigenvalue

    def min_abs_lower(self) -> float:
        """Rigorous lower bound on min |eigenvalue| over the whole family."""
        dist = np.where(
            (self.disc_lo <= 0.0) & (self.disc_hi >= 0.0),
            0.0,
            np.minimum(np.abs(self.disc_lo), np.abs(self.disc_hi)),
        )
        return float(np.min(dist))


def eig_enclosures(m: SymMatrix) -> EigEnclosure:
    a = m.entries
    n = m.n
    amid = 0.5 * (a.lo + a.hi)
    amid = 0.5 * (amid + amid.T)
    # the midpoint matrix only seeds the approximate diagonalization (the
    # enclosure below is rigorous for any V); flushing negligible entries
    # avoids painfully slow subnormal paths inside LAPACK
    amid[np.abs(amid) < 1e-200] = 0.0
    w, v = np.linalg.eigh(amid)
    v[np.abs(v) < 1e-200] = 0.0
    vi = IArray(v)

    c = imatmul(vi.T, imatmul(a, vi))
    g = imatmul(vi.T, vi)

    # eps >= ||G - I||_2 via max row sum
    gdev = g - IArray(np.eye(n))
    eps = float(np.max(np.sum(gdev.mag(), axis=1)))
    if eps >= 0.5:
        raise NotInvertible("eigenvector matrix too far from orthogonal")
    # ||G^{-1/2} - I|| <= 1/sqrt(1-eps) - 1
    e1 = _up(1.0 / math.sqrt(1.0 - 2.0 * eps) - 1.0)  # extra slack via 2*eps
    cnorm = float(np.max(np.sum(c.mag(), axis=1)))
    delta = _up(cnorm * (2.0 * e1 + e1 * e1) * (1.0 + 1e-12))

    cmag = c.mag()
    np.fill_diagonal(cmag, 0.0)
    radii = _up(np.sum(cmag, axis=1) * (1.0 + n * 2.0 ** -50) + delta)
    disc_lo = _dn(np.diag(c.lo) - radii)
    disc_hi = _up(np.diag(c.hi) + radii)

    lam_min_lo = float(np.min(disc_lo))
    # Rayleigh upper bound lambda_min <= min_k (x^T A x)/(x^T x), x = V e_k
    ckk = IArray(np.diag(c.lo).copy(), np.diag(c.hi).copy(), _unsafe=True)
    gkk = IArray(np.diag(g.lo).copy(), np.diag(g.hi).copy(), _unsafe=True)
    ratios = ckk / gkk
    lam_min_hi = float(np.min(ratios.hi))
    lam_min_hi = max(lam_min_hi, lam_min_lo)
    return EigEnclosure(disc_lo, disc_hi, Interval(lam_min_lo, lam_min_hi))


def iv_sym_eig_min(m: SymMatrix) -> Interval:
    """Bracket of the smallest eigenvalue of a symmetric interval matrix.

    lo is a rigorous lower bound over every contained real symmetric matrix;
    hi is a rigorous upper bound on the smallest eigenvalue of each of them.
    """
    return eig_enclosures(m).lam_min


def min_abs_eig_lower(m: SymMatrix) -> float:
    return eig_enclosures(m).min_abs_lower()
