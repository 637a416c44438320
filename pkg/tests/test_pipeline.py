"""Pipeline orchestration: deterministic reports, serialization round trips,
CSV projections, and report self-validation."""

import json

import pytest

from sobemb.errors import SoundnessViolation
from sobemb.intervals import Interval
from sobemb.pipeline import (
    RunConfig,
    classical_table,
    classical_uppers,
    emit_plot_data,
    report_csv,
    run_pipeline,
    validate_report_dict,
)
from sobemb.series import DomainRect

SQ = DomainRect(1.0, 1.0)


def test_runconfig_roundtrip_and_digest():
    cfg = RunConfig(p=3, domain=SQ, N=[8, 12], newton_tol=1e-12, rho_max=10.0)
    d = cfg.to_dict()
    back = RunConfig.from_dict(json.loads(json.dumps(d)))
    assert back == cfg
    assert back.digest() == cfg.digest()
    other = RunConfig(p=3, domain=SQ, N=[8, 13])
    assert other.digest() != cfg.digest()


def test_runconfig_accepts_scalar_sweep():
    cfg = RunConfig(p=3, domain=SQ, N=8)
    assert cfg.N == [8]
    with pytest.raises(ValueError):
        RunConfig(p=3, domain=SQ, N=[8], format="xml")


def test_pipeline_run_is_deterministic():
    """Two identical runs must produce byte-identical canonical reports."""
    cfg = RunConfig(p=3, domain=SQ, N=[8])
    a = run_pipeline(cfg)
    b = run_pipeline(RunConfig(p=3, domain=SQ, N=[8]))
    assert a.canonical_json() == b.canonical_json()
    assert a.fully_certified
    assert a.final is not None and a.final.lower > 0.0


def test_report_structure_and_validation(report_c4):
    d = json.loads(report_c4.to_json())
    assert d["format"] == "sobemb-report/1"
    validate_report_dict(d)  # must not raise
    # corrupting a rigorous field must be caught
    bad = json.loads(report_c4.to_json())
    bad["final"]["lower"], bad["final"]["upper"] = (
        bad["final"]["upper"], bad["final"]["lower"])
    if bad["final"]["lower"] != bad["final"]["upper"]:
        with pytest.raises(SoundnessViolation):
            validate_report_dict(bad)


def test_canonical_json_strips_timing_and_meta(report_c4):
    d = json.loads(report_c4.canonical_json())
    assert "timing" not in d and "meta" not in d
    full = json.loads(report_c4.to_json())
    assert "timing" in full and "meta" in full


def test_report_csv_projection(report_c4):
    text = report_csv(report_c4)
    lines = text.strip().split("\n")
    assert lines[0].startswith("N,status,positive")
    assert len(lines) == 1 + len(report_c4.rows)
    assert all(line.split(",")[1] == "certified" for line in lines[1:])


def test_classical_uppers_rho_guard():
    with pytest.raises(ValueError):
        classical_uppers(3, SQ, rho=Interval(5.0))
    rows = classical_uppers(3, SQ, rho=Interval(5.0), unchecked=True)
    assert {tag for tag, _ in rows} == {"corollary", "plum"}


def test_classical_table_rows():
    table = classical_table(2, [3, 4, 5], SQ)
    assert [row["p"] for row in table] == [3, 4, 5]
    for row in table:
        assert row["corollary"].lo > 0.0
        assert row["plum"].lo > 0.0


def test_emit_plot_data(tmp_path, u_p3_n10):
    path = str(tmp_path / "u.csv")
    emit_plot_data(u_p3_n10, 8, path)
    lines = open(path).read().strip().split("\n")
    assert lines[0] == "x,y,value"
    assert len(lines) == 1 + 64
    with pytest.raises(ValueError):
        emit_plot_data(u_p3_n10, 1, path)
