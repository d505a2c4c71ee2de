import csv
import json

import pytest

from latticeholes import harness
from latticeholes.cli import main
from latticeholes.harness import BudgetError, anchored_cases, load_records, run_suite


def test_delta_text(capsys):
    assert main(["delta", "--cells", "(0,0);(1,0)"]) == 0
    out = capsys.readouterr().out
    assert "x2 - x1" in out or "-x1 + x2" in out


def test_delta_json(capsys):
    assert main(["delta", "--cells", "(0,0);(1,0);(0,1)", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["cells"] == [[0, 0], [1, 0], [0, 1]]
    assert len(payload["terms"]) == 6


def test_shift_check(capsys):
    assert main(["shift", "--op", "hk", "--k", "2", "--cells", "(2,0)", "--check", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["check"] is True
    assert payload["terms"] == [["2", [[0, 0]]]]


def test_mkij_json(capsys):
    assert main(["mkij", "--mu", "2,1", "--cell", "0,0", "--k", "1", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dimension"] == payload["bound"] == 6


def test_tableaux_and_selections(capsys):
    assert main(["tableaux", "--mu", "2,1", "--cell", "0,0", "--k", "1", "--list", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 3
    assert main(["selections", "--mu", "3,2", "--cell", "0,0", "--k", "2", "--json"]) == 0
    sels = json.loads(capsys.readouterr().out)["selections"]
    assert len({tuple(s["depths"]) for s in sels}) == len(sels)


def test_basis_verify(capsys, tmp_path):
    out = tmp_path / "b.json"
    assert main(["basis", "--mu", "2,2", "--cell", "0,0", "--k", "1", "--verify", "--json", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["size"] == 6 and payload["verify"]["ok"]


def test_bad_input_exit_code(capsys):
    assert main(["mkij", "--mu", "2,1", "--cell", "5,5", "--k", "1"]) == 2
    assert "error" in capsys.readouterr().err


def test_verify_exit_code_and_report(tmp_path, capsys):
    report = tmp_path / "r.jsonl"
    rc = main(["verify", "bound", "nfact", "--max-size", "3", "--out", str(report), "--csv", str(tmp_path / "r.csv")])
    assert rc == 0
    recs = load_records(report)
    assert {r["status"] for r in recs} == {"pass"}
    assert all("seconds" not in r for r in recs)
    rows = list(csv.reader(open(tmp_path / "r.csv")))
    assert len(rows) == len(recs) + 1
    assert "pass" in capsys.readouterr().out


def test_verify_unknown_check(tmp_path):
    assert main(["verify", "nope", "--out", str(tmp_path / "x.jsonl")]) == 2


def test_bound_tiny_cases_all_pass():
    cases = list(anchored_cases(3))
    assert {tuple(c["mu"]) for c in cases} == {(1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1)}
    recs = run_suite(3, ["bound"])
    assert len(recs) == len(cases)
    assert all(r["status"] == "pass" for r in recs)


def test_counterexample_single_case():
    (rec,) = run_suite(None, ["remark3-counterexample"])
    assert rec["case"] == {"mu": [3, 2]}
    assert rec["status"] == "pass" and rec["values"]["contained"] is False


def test_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run_suite(3, ["nfact", "depth", "ideal-eq"], out=a, seed=7)
    run_suite(3, ["nfact", "depth", "ideal-eq"], out=b, seed=7)
    assert a.read_bytes() == b.read_bytes()


def test_resume_skips_done_records(tmp_path, monkeypatch):
    path = tmp_path / "r.jsonl"
    full = run_suite(3, ["bound", "nfact"], out=path)
    reference = path.read_bytes()
    lines = reference.decode().splitlines(keepends=True)
    path.write_text("".join(lines[:5]) + '{"torn')
    calls = []
    original = harness._execute

    def spy(args):
        calls.append(args[1])
        return original(args)

    monkeypatch.setattr(harness, "_execute", spy)
    again = run_suite(3, ["bound", "nfact"], out=path)
    assert len(calls) == len(full) - 5
    assert path.read_bytes() == reference
    assert again == full


def test_budget_refusal():
    with pytest.raises(BudgetError):
        run_suite(9, ["shift"])
    with pytest.raises(BudgetError):
        run_suite(4, ["bound"], ceiling=10)


def test_conjecture_status_is_finding(monkeypatch):
    monkeypatch.setattr(harness, "dimension_bound", lambda mu, c, k: -1)
    recs = run_suite(2, ["conjecture", "bound"])
    assert {r["status"] for r in recs if r["check"] == "conjecture"} == {"finding"}
    assert {r["status"] for r in recs if r["check"] == "bound"} == {"fail"}
    assert harness.any_failure(recs)


def test_default_report_path_uses_env(monkeypatch, tmp_path):
    monkeypatch.setenv(harness.OUT_ENV, str(tmp_path))
    assert harness.default_report_path(["depth"], 4).parent == tmp_path
