"""End-to-end orchestration: solve -> certify -> enclose -> compare.

A run sweeps truncation orders N, certifies each solution, and combines the
per-N two-sided enclosures (intersection of sound enclosures is sound) with
the closed-form classical upper bounds.  Reports are deterministic JSON
artifacts apart from an isolated timing block.
"""

from __future__ import annotations

import hashlib
import json
import platform
import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    EnclosureResult,
    best_enclosure,
    corollary_bound,
    enclosure_from_ball,
    outward_decimal,
    plum_bound,
)
from .certify import certify_ball, first_eigenvalue_lower
from .errors import SobembError, SoundnessViolation
from .intervals import Interval
from .series import DomainRect, PositivityHint, Series2D
from .solver import SolverConfig, initial_guess, newton_solve

REPORT_FORMAT = "sobemb-report/1"


@dataclass
class RunConfig:
    """Configuration of a full pipeline run (PDE exponent p; C_{p+1} output)."""

    p: int
    domain: DomainRect
    N: list = field(default_factory=lambda: [10, 20, 30, 34])
    newton_tol: float = 1e-13
    max_iter: int = 50
    symmetry: bool | None = None
    nprime: int | None = None
    quad_cells: int = 512
    rho_max: float = 1e3
    out: str | None = None
    format: str = "json"
    emit_plot_data: bool = False
    plot_grid: int = 64

    def __post_init__(self):
        if isinstance(self.N, int):
            self.N = [self.N]
        self.N = [int(n) for n in self.N]
        self.newton_tol = float(self.newton_tol)
        self.rho_max = float(self.rho_max)
        if self.format not in ("json", "csv"):
            raise ValueError("format must be 'json' or 'csv'")

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "domain": {"L1": self.domain.L1.hex(), "L2": self.domain.L2.hex()},
            "N": self.N,
            "newton_tol": self.newton_tol.hex(),
            "max_iter": self.max_iter,
            "symmetry": self.symmetry,
            "nprime": self.nprime,
            "quad_cells": self.quad_cells,
            "rho_max": self.rho_max.hex(),
            "out": self.out,
            "format": self.format,
            "emit_plot_data": self.emit_plot_data,
            "plot_grid": self.plot_grid,
        }

    @staticmethod
    def from_dict(d: dict) -> "RunConfig":
        return RunConfig(
            p=d["p"],
            domain=DomainRect(
                float.fromhex(d["domain"]["L1"]), float.fromhex(d["domain"]["L2"])
            ),
            N=d["N"],
            newton_tol=float.fromhex(d["newton_tol"]),
            max_iter=d["max_iter"],
            symmetry=d["symmetry"],
            nprime=d["nprime"],
            quad_cells=d["quad_cells"],
            rho_max=float.fromhex(d["rho_max"]),
            out=d["out"],
            format=d["format"],
            emit_plot_data=d["emit_plot_data"],
            plot_grid=d["plot_grid"],
        )

    def digest(self) -> str:
        return hashlib.sha256(
            json.dumps(self.to_dict(), sort_keys=True).encode()
        ).hexdigest()


def _hx(iv: Interval) -> list:
    return [iv.lo.hex(), iv.hi.hex()]


@dataclass
class RunRow:
    """Per-N result row; rigorous fields are outward-rounded intervals."""

    N: int
    status: str  # "certified" | the failure class name
    defect_hm1: Interval | None = None
    defect_l2: Interval | None = None
    K: Interval | None = None
    r_h1: Interval | None = None
    r_inf: Interval | None = None
    neg_sup: float | None = None
    positive: bool = False
    lower: float | None = None
    upper: float | None = None
    error: str | None = None
    seconds: float = 0.0

    def to_dict(self) -> dict:
        d = {"N": self.N, "status": self.status, "positive": self.positive}
        for name in ("defect_hm1", "defect_l2", "K", "r_h1", "r_inf"):
            iv = getattr(self, name)
            d[name] = None if iv is None else _hx(iv)
        d["neg_sup"] = None if self.neg_sup is None else self.neg_sup.hex()
        d["lower"] = None if self.lower is None else self.lower.hex()
        d["upper"] = None if self.upper is None else self.upper.hex()
        d["error"] = self.error
        return d


@dataclass
class RunReport:
    """Full record of a pipeline run."""

    config: RunConfig
    rows: list
    classical: list  # (tag, Interval)
    final: EnclosureResult | None
    solutions: dict = field(default_factory=dict)  # N -> Series2D
    timing: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def fully_certified(self) -> bool:
        return bool(self.rows) and all(r.status == "certified" for r in self.rows)

    @property
    def any_certified(self) -> bool:
        return any(r.status == "certified" for r in self.rows)

    def to_dict(self, include_timing: bool = True) -> dict:
        d = {
            "format": REPORT_FORMAT,
            "config": self.config.to_dict(),
            "config_digest": self.config.digest(),
            "rows": [r.to_dict() for r in self.rows],
            "classical": [[tag, _hx(iv)] for tag, iv in self.classical],
            "error": self.error,
            "meta": {
                "platform": platform.platform(),
                "numpy": np.__version__,
            },
        }
        if self.final is not None:
            d["final"] = {
                "p": self.final.p,
                "lower": self.final.lower.hex(),
                "upper": self.final.upper.hex(),
                "lower_decimal": outward_decimal(self.final.lower, -1),
                "upper_decimal": outward_decimal(self.final.upper, +1),
                "sources": self.final.sources,
            }
        else:
            d["final"] = None
        if include_timing:
            d["timing"] = self.timing
        return d

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2)

    def canonical_json(self) -> str:
        """Deterministic serialization (timing and host metadata stripped)."""
        d = self.to_dict(include_timing=False)
        d.pop("meta")
        return json.dumps(d, sort_keys=True)


def classical_uppers(p: int, domain: DomainRect, rho: Interval | None = None,
                     unchecked: bool = False) -> list:
    """[(tag, Interval)] of classical upper bounds for C_{p+1}."""
    if rho is None:
        rho = first_eigenvalue_lower(domain)
    elif not unchecked:
        raise ValueError(
            "a user-supplied rho requires unchecked=True; validity of the "
            "spectral bound depends on rho being a true lambda_1 lower bound"
        )
    q = p + 1
    return [
        ("corollary", corollary_bound(2, float(q), domain.measure())),
        ("plum", plum_bound(2, float(q), rho)),
    ]


def run_pipeline(cfg: RunConfig) -> RunReport:
    """Execute the sweep; failures at one N are recorded, not fatal."""
    t_start = time.perf_counter()
    timing = {}
    classical = classical_uppers(cfg.p, cfg.domain)
    rows = []
    solutions = {}
    best_lower = None
    best_upper = None

    guess = initial_guess(cfg.p, cfg.domain)
    for n in cfg.N:
        t0 = time.perf_counter()
        row = RunRow(N=n, status="pending")
        try:
            scfg = SolverConfig(p=cfg.p, N=n, newton_tol=cfg.newton_tol,
                                max_iter=cfg.max_iter, symmetry=cfg.symmetry)
            u = newton_solve(scfg, guess)
            guess = u  # warm start for the next N
            solutions[n] = u
            ball = certify_ball(u, cfg.p, nprime=cfg.nprime,
                                rho_max=cfg.rho_max)
            row.defect_hm1 = ball.kantorovich.delta
            row.defect_l2 = ball.delta_l2
            row.K = ball.kantorovich.K
            row.r_h1 = ball.r_h1
            row.r_inf = ball.r_inf
            row.neg_sup = ball.audit.neg_sup
            row.positive = ball.positive
            hint = PositivityHint(ball.audit.neg_sup)
            lower, upper = enclosure_from_ball(
                u, ball.r_h1, cfg.p, positive=ball.positive, cert=hint
            )
            row.lower, row.upper = lower, upper
            row.status = "certified"
            best_lower = lower if best_lower is None else max(best_lower, lower)
            best_upper = upper if best_upper is None else min(best_upper, upper)
        except SobembError as exc:
            row.status = type(exc).__name__
            row.error = str(exc)
        row.seconds = time.perf_counter() - t0
        timing[f"N={n}"] = row.seconds
        rows.append(row)

    final = None
    error = None
    extremal = None
    if best_lower is not None:
        if best_lower > best_upper:
            raise SoundnessViolation(
                "per-N enclosures are disjoint: "
                f"max lower {best_lower!r} > min upper {best_upper!r}"
            )
        extremal = (best_lower, best_upper)
    try:
        final = best_enclosure(extremal, classical, cfg.p + 1, cfg.domain)
    except SobembError as exc:
        error = f"{type(exc).__name__}: {exc}"
    timing["total"] = time.perf_counter() - t_start
    return RunReport(config=cfg, rows=rows, classical=classical, final=final,
                     solutions=solutions, timing=timing, error=error)


def classical_table(n: int, p_list, domain: DomainRect,
                    rho: Interval | None = None, unchecked: bool = False) -> list:
    """Rows [{p, corollary, plum}] of classical upper bounds for C_p."""
    if rho is None:
        rho = first_eigenvalue_lower(domain)
    elif not unchecked:
        raise ValueError("a user-supplied rho requires unchecked=True")
    table = []
    for p in p_list:
        table.append(
            {
                "p": p,
                "corollary": corollary_bound(n, float(p), domain.measure()),
                "plum": plum_bound(n, float(p), rho),
            }
        )
    return table


def emit_plot_data(u: Series2D, m: int, path: str) -> str:
    """CSV of midpoint samples (x, y, u(x, y)) on an m x m uniform grid."""
    if m < 2:
        raise ValueError("plot grid must be at least 2x2")
    dom = u.domain
    xs = dom.L1 / m * (np.arange(m) + 0.5)
    ys = dom.L2 / m * (np.arange(m) + 0.5)
    vals = u.values_on_grid(xs, ys).mid()
    lines = ["x,y,value"]
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            lines.append(f"{x:.17g},{y:.17g},{vals[i, j]:.17g}")
    text = "\n".join(lines) + "\n"
    with open(path, "w") as f:
        f.write(text)
    return path


def report_csv(report: RunReport) -> str:
    """Flat CSV projection of the per-N rows of a report."""
    header = ("N,status,positive,defect_hm1_hi,K_hi,r_h1_hi,r_inf_hi,"
              "neg_sup,lower,upper")
    lines = [header]
    for r in report.rows:
        def fmt(v):
            return "" if v is None else f"{v:.17g}"

        lines.append(",".join([
            str(r.N), r.status, str(r.positive).lower(),
            fmt(None if r.defect_hm1 is None else r.defect_hm1.hi),
            fmt(None if r.K is None else r.K.hi),
            fmt(None if r.r_h1 is None else r.r_h1.hi),
            fmt(None if r.r_inf is None else r.r_inf.hi),
            fmt(r.neg_sup), fmt(r.lower), fmt(r.upper),
        ]))
    return "\n".join(lines) + "\n"


def validate_report_dict(d: dict) -> None:
    """Re-validate the rigorous fields of a loaded report (self-check)."""
    if d.get("format") != REPORT_FORMAT:
        raise SoundnessViolation("unknown report format")
    for row in d["rows"]:
        for name in ("defect_hm1", "defect_l2", "K", "r_h1", "r_inf"):
            pair = row.get(name)
            if pair is not None:
                lo, hi = float.fromhex(pair[0]), float.fromhex(pair[1])
                if not lo <= hi:
                    raise SoundnessViolation(f"row N={row['N']}: {name} lo > hi")
                if name != "defect_hm1" and lo < 0.0 and name in ("r_h1", "r_inf"):
                    raise SoundnessViolation(f"row N={row['N']}: {name} < 0")
        if row["lower"] is not None and row["upper"] is not None:
            if float.fromhex(row["lower"]) > float.fromhex(row["upper"]):
                raise SoundnessViolation(f"row N={row['N']}: lower > upper")
    f = d.get("final")
    if f is not None:
        if float.fromhex(f["lower"]) > float.fromhex(f["upper"]):
            raise SoundnessViolation("final enclosure: lower > upper")
    for tag, pair in d["classical"]:
        if float.fromhex(pair[0]) > float.fromhex(pair[1]):
            raise SoundnessViolation(f"classical bound {tag}: lo > hi")
