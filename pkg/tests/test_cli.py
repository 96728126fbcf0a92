import json
from pathlib import Path

import pytest

from pauli_lab.cli.main import build_parser, main

SCHEMA = Path(__file__).resolve().parents[1] / "schema" / "report.json"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_parser_accepts_scientific_budget():
    args = build_parser().parse_args(["pval", "--n", "2", "--budget", "2e9"])
    assert args.budget == 2_000_000_000


def test_parser_rejects_unknown_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["chsh"])


def test_count(capsys):
    code, out = run(capsys, "count", "--n", "2", "--k", "1")
    assert code == 0
    env = json.loads(out)
    assert env["report"] == "count"
    assert env["payload"]["closed_form"] == 15
    assert env["payload"]["enumerated"] == 15
    assert env["config"]["seed"] == 12648430


def test_missing_flag_is_a_usage_error(capsys):
    code, out = run(capsys, "count", "--n", "2")
    assert code == 2
    assert out == ""


def test_csv_only_for_tables(capsys):
    code, _ = run(capsys, "count", "--n", "2", "--k", "1", "--format", "csv")
    assert code == 2


def test_spectra_csv(capsys):
    code, out = run(capsys, "spectra", "--graph", "gwp", "--n", "2", "--format", "csv")
    assert code == 0
    assert out == "eigenvalue,multiplicity\n2,1\n-1,2\n"


def test_spectra_closed_form_only_for_shipped_graphs(capsys):
    code, _ = run(capsys, "spectra", "--graph", "sn", "--n", "2", "--mode", "closed-form")
    assert code == 2


def test_enumerate_writes_fixture(capsys, tmp_path):
    fixture = tmp_path / "l22.txt"
    code, out = run(capsys, "enumerate", "--n", "2", "--k", "2", "--out", str(fixture))
    assert code == 0
    assert len(fixture.read_text().splitlines()) == 16
    payload = json.loads(out)["payload"]
    assert payload["enumerated"] == 15
    assert payload["fixture_path"] == str(fixture)


def test_pval_writes_certificate_next_to_report(capsys, tmp_path):
    report = tmp_path / "pval.json"
    code, out = run(capsys, "pval", "--n", "2", "--budget", "1e6", "--out", str(report))
    assert code == 0
    assert out == ""
    payload = json.loads(report.read_text())["payload"]
    assert payload["optimum_exact"] == "12/15"
    assert payload["proof_closed"]
    certificate = tmp_path / "pval_n2.txt"
    assert payload["certificate_path"] == str(certificate)
    lines = certificate.read_text().splitlines()
    assert lines[0] == "n=2"
    assert len(lines) == 13


def test_game_defaults_to_quantum_z1(capsys):
    code, out = run(capsys, "game")
    assert code == 0
    payload = json.loads(out)["payload"]
    assert payload["game"] == "z1"
    assert payload["estimate"]["value"] == pytest.approx(1.0)
    assert payload["estimate"]["exact"] == "1/1"


def test_game_text_output(capsys):
    code, out = run(capsys, "game", "--strategy", "random", "--format", "text")
    assert code == 0
    assert out.startswith("game (pauli_lab ")


def test_unknown_game_strategy(capsys):
    code, _ = run(capsys, "game", "--strategy", "oracle")
    assert code == 2


def test_verify_formulas(capsys):
    code, out = run(capsys, "verify", "--suite", "formulas", "--n-max", "2")
    assert code == 0
    checks = json.loads(out)["payload"]["checks"]
    assert all(c["status"] != "fail" for c in checks)
    assert any(c["status"] == "pass-with-note" for c in checks)


def test_verify_unknown_suite(capsys):
    code, _ = run(capsys, "verify", "--suite", "everything")
    assert code == 2


def test_envelope_matches_schema_keys(capsys):
    schema = json.loads(SCHEMA.read_text())
    _, out = run(capsys, "count", "--n", "1", "--k", "1")
    env = json.loads(out)
    assert set(schema["required"]) <= set(env)
    assert set(env) <= set(schema["properties"])
    assert set(schema["properties"]["config"]["required"]) <= set(env["config"])
