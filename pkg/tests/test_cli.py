"""Command line interface: subcommands, artifacts, and exit codes."""

import json

import pytest

from sobemb.cli import EXIT_HARD, EXIT_OK, EXIT_PARTIAL, main
from sobemb.series import Series2D


def test_solve_emits_loadable_series(tmp_path):
    out = str(tmp_path / "u.json")
    rc = main(["solve", "--p", "3", "--N", "6", "--out", out])
    assert rc == EXIT_OK
    u = Series2D.from_json(open(out).read())
    assert u.N == 6
    assert abs(u.coeffs.mid()[0, 0]) > 1.0


def test_certify_roundtrip_through_file(tmp_path):
    series = str(tmp_path / "u.json")
    cert = str(tmp_path / "cert.json")
    assert main(["solve", "--p", "3", "--N", "8", "--out", series]) == EXIT_OK
    rc = main(["certify", "--p", "3", "--in", series, "--out", cert])
    assert rc == EXIT_OK
    d = json.loads(open(cert).read())
    assert d["format"] == "sobemb-certificate/1"
    assert d["positive"] is True
    assert float.fromhex(d["r_h1"][1]) < 0.2


def test_enclose_json_and_csv(tmp_path):
    out = str(tmp_path / "report.json")
    rc = main(["enclose", "--p", "3", "--N", "8", "--out", out])
    assert rc == EXIT_OK
    d = json.loads(open(out).read())
    assert d["format"] == "sobemb-report/1"
    assert d["final"] is not None
    csv_out = str(tmp_path / "report.csv")
    rc = main(["enclose", "--p", "3", "--N", "8", "--format", "csv",
               "--out", csv_out])
    assert rc == EXIT_OK
    assert open(csv_out).read().startswith("N,status")


def test_enclose_plot_data(tmp_path):
    out = str(tmp_path / "r.json")
    rc = main(["enclose", "--p", "3", "--N", "8", "--plot-grid", "8",
               "--out", out])
    assert rc == EXIT_OK
    lines = open(out + ".plot.csv").read().strip().split("\n")
    assert len(lines) == 65


def test_classical_table_command(capsys):
    rc = main(["classical", "--p-list", "3,4,5"])
    assert rc == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["format"] == "sobemb-classical/1"
    assert [row["p"] for row in d["rows"]] == [3, 4, 5]
    for row in d["rows"]:
        assert float(row["corollary_decimal"]) > 0.0


def test_classical_rho_requires_unchecked_flag():
    assert main(["classical", "--rho", "5.0"]) == EXIT_HARD


def test_classical_unchecked_rho(capsys):
    rc = main(["classical", "--rho", "19.7", "--unchecked-rho"])
    assert rc == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert len(d["rows"]) == 3


def test_invalid_domain_argument():
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--domain", "banana"])
    assert exc.value.code == 2


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit):
        main([])


def test_partial_exit_code_when_certification_fails(capsys):
    # p=4 at N=12 fails its certification step, but the classical upper
    # bounds still give a valid (one-sided) final record -> partial success
    rc = main(["enclose", "--p", "4", "--N", "12"])
    out = capsys.readouterr().out
    d = json.loads(out)
    statuses = [row["status"] for row in d["rows"]]
    if all(s == "certified" for s in statuses):
        assert rc == EXIT_OK
    else:
        assert rc == EXIT_PARTIAL
