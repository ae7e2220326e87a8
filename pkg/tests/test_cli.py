"""Command-line driver: exit codes, determinism and record format."""
import json

import jsonschema
import pytest

from qtrace import exchange
from qtrace.cli import RECORD_SCHEMA, main, render_report
from qtrace.field import FracFn, frac_eq
from qtrace.trace import example2_F


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_compute_u_m_zero(capsys):
    code, out, _ = run(capsys, "compute", "u_m", "--m", "0")
    assert code == 0
    payload = json.loads(out)
    assert payload["value"].startswith("q^(-1*lam*mu + 0*lam + 0*mu)")
    assert FracFn.from_text(payload["value"].split(" * ", 1)[1]).is_one()


def test_compute_F_example2(capsys):
    code, out, _ = run(capsys, "compute", "F", "--modules", "irrep2", "--order", "4")
    assert code == 0
    closed = json.loads(out)["closed"].split(" * ", 1)[1]
    assert frac_eq(FracFn.from_text(closed), example2_F().body)


def test_compute_Q_fundamental(capsys):
    code, out, _ = run(capsys, "compute", "Q", "--module", "irrep1")
    payload = json.loads(out)
    assert code == 0 and payload["diagonal"]
    assert [e["weight"] for e in payload["eigenvalues"]] == [1, -1]
    assert FracFn.from_text(payload["eigenvalues"][1]["value"]).is_one()


def test_compute_to_file(tmp_path, capsys):
    path = tmp_path / "J.json"
    code, out, _ = run(capsys, "compute", "J", "--modules", "irrep1,irrep1", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["object"] == "J"


@pytest.mark.parametrize("argv", [
    ("compute", "psi", "--modules", "bogus"),
    ("compute", "u", "--m", "-1"),
    ("compute", "u"),
    ("compute", "J", "--modules", "irrep1"),
    ("compute", "psi", "--modules", "irrep2", "--order", "0"),
    ("verify", "nonsense"),
    ("verify", "mr", "--order", "0"),
    ("macdonald", "poly", "--n", "2", "--m", "1", "--mu", "0,2"),
    ("macdonald", "poly", "--n", "2", "--m", "1", "--mu", "a,b"),
    ("report", "/nonexistent/records.jsonl"),
    (),
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_verify_mr_echoes_example3(capsys):
    code, out, _ = run(capsys, "verify", "mr", "--W", "irrep1", "--modules", "irrep2", "--order", "6")
    recs = records(out)
    assert code == 0
    assert all(r["verdict"] == "pass" for r in recs)
    coeffs = next(r for r in recs if r["check_id"] == "mr/example3-coefficients")["details"]["coefficients"]
    assert FracFn.from_text(coeffs["1"]).is_one()


def test_verify_symmetry_reconstruction_metadata(capsys):
    code, out, _ = run(capsys, "verify", "symmetry", "--modules", "irrep1,irrep1", "--order", "6")
    (rec,) = records(out)
    assert code == 0 and rec["verified_order"] == "exact"
    assert rec["details"]["windows"]


def test_records_are_deterministic_and_valid(capsys):
    argv = ("verify", "hypergeom", "--order", "6")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    for rec in records(a):
        jsonschema.validate(rec, RECORD_SCHEMA)
        assert "wall_time" not in rec


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "hypergeom", "verify", "--m", "1", "--timing")
    assert all("wall_time" in r for r in records(out))


def test_failing_suite_exits_1(capsys):
    code, out, err = run(capsys, "limits", "verify")
    assert code == 1
    assert "FIRST FAILURE: limits/qkz/V=irrep1,irrep1" in err
    failed = [r["check_id"] for r in records(out) if r["verdict"] != "pass"]
    assert failed == ["limits/qkz/V=irrep1,irrep1"]


def test_report_formats(tmp_path, capsys):
    path = tmp_path / "r.jsonl"
    recs = [{"check_id": "b", "inputs": {}, "verified_order": "exact", "verdict": "fail"},
            {"check_id": "a", "inputs": {}, "verified_order": 4, "verdict": "pass"}]
    path.write_text("".join(json.dumps(r) + "\n" for r in recs))
    code, out, _ = run(capsys, "report", str(path), "--format", "csv")
    assert code == 1
    assert out.splitlines() == ["check_id,verdict,verified_order,residual", "a,pass,4,", "b,fail,exact,"]
    code, out, _ = run(capsys, "report", str(path), "--format", "json")
    assert [r["check_id"] for r in json.loads(out)] == ["a", "b"]
    assert render_report([recs[1]], "text").splitlines()[-1] == "1/1 passed"


def test_report_empty_is_header_only(tmp_path, capsys):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    code, out, _ = run(capsys, "report", str(path), "--format", "csv")
    assert code == 0 and out == "check_id,verdict,verified_order,residual\n"


def test_macdonald_subcommands(capsys):
    code, out, _ = run(capsys, "macdonald", "poly", "--n", "2", "--m", "0", "--mu", "2,0")
    assert code == 0 and json.loads(out)["monomial_coefficients"]["1,1"] == "[|1@]/[|1@]"
    code, out, _ = run(capsys, "macdonald", "verify-bridge", "--m", "1", "--K", "6")
    assert code == 0 and len(records(out)) == 3


def test_cache_directory(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QTRACE_CACHE_DIR", str(tmp_path))
    exchange._J_CACHE.clear()
    try:
        code, _, _ = run(capsys, "verify", "abrr")
        assert code == 0 and list(tmp_path.glob("J_*.json"))
        exchange._J_CACHE.clear()
        code, _, _ = run(capsys, "verify", "abrr", "--no-cache")
        assert code == 0
    finally:
        exchange.set_disk_cache(None)
        exchange._J_CACHE.clear()


def test_schema_command(capsys):
    code, out, _ = run(capsys, "schema")
    assert code == 0 and json.loads(out)["title"] == "CheckRecord"
