"""Shared fixtures: expensive solver/certification artifacts are computed once
per session and reused by unit, property, and acceptance tests."""

import numpy as np
import pytest

from sobemb.pipeline import RunConfig, RunReport, run_pipeline
from sobemb.series import DomainRect
from sobemb.solver import SolverConfig, initial_guess, newton_solve

UNIT_SQUARE = DomainRect(1.0, 1.0)


@pytest.fixture(scope="session")
def unit_square() -> DomainRect:
    return UNIT_SQUARE


@pytest.fixture(scope="session")
def u_p3_n20():
    """Approximate extremal solution of -lap u = u^3 at truncation 20."""
    return newton_solve(SolverConfig(p=3, N=20), initial_guess(3, UNIT_SQUARE))


@pytest.fixture(scope="session")
def u_p3_n10():
    return newton_solve(SolverConfig(p=3, N=10), initial_guess(3, UNIT_SQUARE))


@pytest.fixture(scope="session")
def ball_p3_n20(u_p3_n20):
    from sobemb.certify import certify_ball

    return certify_ball(u_p3_n20, 3)


@pytest.fixture(scope="session")
def report_c4() -> RunReport:
    """The full p=3 sweep that produces the enclosure of C_4."""
    return run_pipeline(RunConfig(p=3, domain=UNIT_SQUARE, N=[10, 20, 30, 34]))


@pytest.fixture(scope="session")
def report_c3() -> RunReport:
    return run_pipeline(RunConfig(p=2, domain=UNIT_SQUARE, N=[40, 56, 72]))


@pytest.fixture(scope="session")
def report_c5() -> RunReport:
    return run_pipeline(RunConfig(p=4, domain=UNIT_SQUARE, N=[12, 16, 20]))


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
