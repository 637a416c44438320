"""Floating-point spectral Galerkin-Newton solver for -Laplace u = u^p.

Non-rigorous by design: it produces approximate sine coefficients; every
claim about them is re-derived rigorously by the certification module.

Nonlinear terms are evaluated pseudo-spectrally on an oversampled tensor
sine grid with G = (p+1)N + 1 points per dimension, which integrates the
trigonometric degree (p+1)N exactly (no aliasing into the first N modes).
Residuals are accumulated in extended precision so Newton can reach
tolerances near 1e-13 at large N.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, NoConvergence, SingularJacobian
from .series import DomainRect, Series2D, SineSeries2D

log = logging.getLogger("sobemb.solver")

MAX_GRID = 4096


@dataclass(frozen=True)
class SolverConfig:
    """Settings for the Galerkin-Newton iteration."""

    p: int
    N: int
    newton_tol: float = 1e-13
    max_iter: int = 50
    damping: float = 1.0
    symmetry: bool | None = None  # None: reduce to odd-odd modes iff square

    def __post_init__(self):
        if self.p not in (2, 3, 4, 5):
            raise ValueError(f"exponent p must be in 2..5, got {self.p}")
        if self.N < 1:
            raise ValueError("truncation order N must be >= 1")
        if not self.newton_tol > 0.0:
            raise ValueError("newton_tol must be positive")


# integral of sin^k over one period-half, divided by the length:
# (1/L) * int_0^L sin(pi x / L)^k dx
_SINE_POWER_MEAN = {2: 0.5, 3: 4.0 / (3.0 * math.pi), 4: 3.0 / 8.0,
                    5: 16.0 / (15.0 * math.pi), 6: 5.0 / 16.0}


def initial_guess(p: int, domain: DomainRect) -> Series2D:
    """One-mode series solving the single-mode Galerkin balance.

    With u = c sin(pi x/L1) sin(pi y/L2), testing against the same mode gives
    lambda_11 c / 4 = c^p w^2 where w is the mean of sin^(p+1), hence
    c^(p-1) = lambda_11 / (4 w^2).
    """
    if p not in (2, 3, 4, 5):
        raise ValueError(f"exponent p must be in 2..5, got {p}")
    lam11 = math.pi ** 2 * (1.0 / domain.L1 ** 2 + 1.0 / domain.L2 ** 2)
    w = _SINE_POWER_MEAN[p + 1]
    c = (lam11 / (4.0 * w * w)) ** (1.0 / (p - 1))
    coeffs = np.zeros((1, 1))
    coeffs[0, 0] = c
    return SineSeries2D(domain, coeffs)


def _grid_order(p: int, n: int) -> int:
    g = (p + 1) * n + 1
    if g > MAX_GRID:
        raise CapacityError(f"pseudo-spectral grid order {g} exceeds {MAX_GRID}")
    return g


def _sine_matrix(g: int, modes: np.ndarray, dtype=np.float64) -> np.ndarray:
    """S[k, i] = sin(pi * modes[i] * (k+1) / g), sample points k+1 = 1..g-1."""
    k = np.arange(1, g, dtype=np.longdouble).reshape(-1, 1)
    m = modes.astype(np.longdouble).reshape(1, -1)
    return np.sin(np.pi * k * m / g).astype(dtype)


def _lambda_grid(domain: DomainRect, mx: np.ndarray, my: np.ndarray, dtype):
    lx = (mx.astype(dtype) / dtype(domain.L1)) ** 2
    ly = (my.astype(dtype) / dtype(domain.L2)) ** 2
    return dtype(math.pi) ** 2 * (lx.reshape(-1, 1) + ly.reshape(1, -1))


def _modes_for(n: int, reduced: bool) -> np.ndarray:
    return np.arange(1, n + 1, 2) if reduced else np.arange(1, n + 1)


def _residual_array(a: np.ndarray, p: int, domain: DomainRect,
                    mx: np.ndarray, my: np.ndarray, g: int,
                    dtype=np.longdouble) -> np.ndarray:
    """F_ij = lambda_ij a_ij - (coefficients of u^p), pseudo-spectrally exact."""
    sx = _sine_matrix(g, mx, dtype)
    sy = _sine_matrix(g, my, dtype)
    a = a.astype(dtype)
    vals = sx @ a @ sy.T
    f = vals ** p
    b = (2.0 / g) ** 2 * (sx.T @ f @ sy)
    lam = _lambda_grid(domain, mx, my, dtype)
    return lam * a - b


def galerkin_residual(u: Series2D, p: int) -> float:
    """Discrete Galerkin residual l2-norm of a sine-series iterate."""
    a = u.coeffs.mid()
    n = max(a.shape)
    mx = np.arange(1, a.shape[0] + 1)
    my = np.arange(1, a.shape[1] + 1)
    g = _grid_order(p, n)
    r = _residual_array(a, p, u.domain, mx, my, g)
    return float(np.sqrt(np.sum(r.astype(np.float64) ** 2)))


def _jacobian(a: np.ndarray, p: int, domain: DomainRect,
              mx: np.ndarray, my: np.ndarray, g: int) -> np.ndarray:
    """Dense matrix of the linearization lambda - p u^(p-1) in the mode basis."""
    sx = _sine_matrix(g, mx)
    sy = _sine_matrix(g, my)
    vals = sx @ a @ sy.T
    w = p * vals ** (p - 1)
    # M[(i,j),(k,l)] = (2/g)^2 sum_{m,n} Sx[m,i] Sx[m,k] W[m,n] Sy[n,j] Sy[n,l]
    t = np.einsum("mi,mk,mn->ikn", sx, sx, w, optimize=True)
    m = np.einsum("ikn,nj,nl->ijkl", t, sy, sy, optimize=True)
    m *= (2.0 / g) ** 2
    nx, ny = len(mx), len(my)
    m = m.reshape(nx * ny, nx * ny)
    lam = _lambda_grid(domain, mx, my, np.float64).reshape(-1)
    jac = -m
    jac[np.arange(nx * ny), np.arange(nx * ny)] += lam
    return jac


def galerkin_jacobian(u: Series2D, p: int) -> np.ndarray:
    a = u.coeffs.mid()
    mx = np.arange(1, a.shape[0] + 1)
    my = np.arange(1, a.shape[1] + 1)
    g = _grid_order(p, max(a.shape))
    return _jacobian(a, p, u.domain, mx, my, g)


def newton_solve(cfg: SolverConfig, guess: Series2D) -> Series2D:
    """Damped Newton iteration on the Galerkin system; returns a point series."""
    domain = guess.domain
    n = cfg.N
    reduced = cfg.symmetry
    if reduced is None:
        reduced = domain.L1 == domain.L2
    mx = _modes_for(n, reduced)
    my = _modes_for(n, reduced)
    g = _grid_order(cfg.p, n)

    a = np.zeros((len(mx), len(my)))
    src = guess.coeffs.mid()
    for i, mi in enumerate(mx):
        for j, mj in enumerate(my):
            if mi <= src.shape[0] and mj <= src.shape[1]:
                a[i, j] = src[mi - 1, mj - 1]
    if reduced:
        even_rows = np.arange(1, src.shape[0] + 1) % 2 == 0
        even_cols = np.arange(1, src.shape[1] + 1) % 2 == 0
        if np.any(np.abs(src[even_rows, :]) > 0) or np.any(
            np.abs(src[:, even_cols]) > 0
        ):
            # guess has even-mode content; fall back to the full system
            return newton_solve(
                SolverConfig(cfg.p, cfg.N, cfg.newton_tol, cfg.max_iter,
                             cfg.damping, symmetry=False), guess)
    if not np.any(a):
        raise ValueError("newton_solve requires a nonzero initial guess")

    r = _residual_array(a, cfg.p, domain, mx, my, g)
    rnorm = float(np.sqrt(np.sum(r.astype(np.float64) ** 2)))
    for it in range(cfg.max_iter):
        if rnorm <= cfg.newton_tol:
            break
        jac = _jacobian(a, cfg.p, domain, mx, my, g)
        try:
            step = np.linalg.solve(jac, -r.astype(np.float64).reshape(-1))
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(str(exc)) from exc
        if not np.all(np.isfinite(step)):
            raise SingularJacobian("non-finite Newton step")
        step = step.reshape(a.shape)
        t = cfg.damping
        for _ in range(40):
            trial = a + t * step
            rt = _residual_array(trial, cfg.p, domain, mx, my, g)
            rtnorm = float(np.sqrt(np.sum(rt.astype(np.float64) ** 2)))
            if rtnorm < rnorm or rnorm <= cfg.newton_tol:
                break
            t *= 0.5
        else:
            raise NoConvergence(f"line search stalled at residual {rnorm:.3e}")
        a, r, rnorm = trial, rt, rtnorm
        log.info("newton iteration=%d residual=%.6e step_scale=%.3g", it + 1,
                 rnorm, t)
    if rnorm > cfg.newton_tol:
        raise NoConvergence(
            f"residual {rnorm:.3e} above tolerance {cfg.newton_tol:.1e} "
            f"after {cfg.max_iter} iterations"
        )
    if not np.any(a):
        raise NoConvergence("iteration collapsed to the zero series")

    full = np.zeros((n, n))
    for i, mi in enumerate(mx):
        for j, mj in enumerate(my):
            full[mi - 1, mj - 1] = a[i, j]
    return SineSeries2D(domain, full)
