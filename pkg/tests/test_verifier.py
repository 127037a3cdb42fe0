import json

import pytest

from gext.errors import ParseError
from gext.verdict import CheckResult
from gext.verifier import CaseFile, Report, builtin_corpus, corpus_by_id, run_case
from gext.verifier.cli import main
from gext.verifier.faults import apply, coefficient_mutations

CORPUS = builtin_corpus()


@pytest.mark.parametrize("case", CORPUS, ids=lambda c: c.id)
def test_corpus_case_passes(case):
    r = run_case(case)
    assert r.status == "pass", r.dumps()


def test_corpus_ids_unique_and_runs_deterministic():
    assert len({c.id for c in CORPUS}) == len(CORPUS)
    case = corpus_by_id()["X1"]
    a, b = run_case(case).to_json(), run_case(case).to_json()
    a.pop("seconds"), b.pop("seconds")
    assert a == b


def test_expected_failure_is_reported_with_witness():
    r = run_case(corpus_by_id()["X_5"])
    bad = next(c for c in r.checks if c.name == "smooth:Sinf")
    assert bad.status == "fail" and bad.detail
    assert r.status == "pass"
    assert r.flags


@pytest.mark.parametrize("case", CORPUS, ids=lambda c: c.id)
def test_casefile_round_trip(case):
    assert CaseFile.loads(case.dumps()) == case


def test_report_round_trip_and_duplicates():
    r = Report("demo", expected={"b": "fail"})
    r.add(CheckResult("a", "pass", "ok"))
    r.add(CheckResult("b", "fail", "witness"))
    assert r.status == "pass"
    back = Report.from_json(json.loads(r.dumps()))
    assert back.to_json() == r.to_json()
    with pytest.raises(ValueError):
        r.add(CheckResult("a", "fail"))


def test_missing_expected_check_fails():
    r = Report("demo", expected={"never_ran": "pass"})
    r.add(CheckResult("a", "pass"))
    assert r.status == "fail"


def test_inconclusive_does_not_pass():
    r = Report("demo")
    r.add(CheckResult("a", "inconclusive", "cap"))
    assert r.status == "inconclusive" and not r.passed


@pytest.mark.parametrize("cid", ["X0", "X1", "X_2", "cocycle-SL2", "synth-SL2-chain2"])
def test_tiny_budget_never_flips_to_fail(cid):
    r = run_case(corpus_by_id()[cid], budget=3)
    assert r.status in ("pass", "inconclusive")
    assert all(c.status != "fail" or r.expected.get(c.name) == "fail" for c in r.checks)


def test_malformed_case_reports_location():
    text = '{\n  "schema": 1,\n  "id": "x",\n  "kind": oops\n}'
    with pytest.raises(ParseError) as e:
        CaseFile.loads(text)
    assert (e.value.line, e.value.column) == (4, 11)


def test_bad_polynomial_in_case_reports_location():
    d = corpus_by_id()["X0"].to_json()
    d["payload"]["derivation"]["p"] = "x^2 +* y"
    with pytest.raises(ParseError) as e:
        run_case(CaseFile.from_json(d))
    assert (e.value.line, e.value.column) == (1, 6)


def test_every_structural_mutation_is_detected():
    undetected, total = [], 0
    for case in CORPUS:
        for mut in coefficient_mutations(case):
            total += 1
            if run_case(apply(mut)).status == "pass":
                undetected.append(mut.describe())
    assert total > 200
    assert not undetected, undetected


def test_cli_verify_corpus(capsys):
    assert main(["verify", "--corpus"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == len(CORPUS)


def test_cli_corpus_and_verify_file(tmp_path, capsys):
    assert main(["corpus", "--out", str(tmp_path)]) == 0
    files = sorted(tmp_path.glob("*.json"))
    assert len(files) == len(CORPUS)
    capsys.readouterr()
    assert main(["verify", str(files[0]), "--json"]) == 0
    (report,) = json.loads(capsys.readouterr().out)
    assert report["status"] == "pass" and report["checks"]


def test_cli_verify_bad_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": 1,')
    assert main(["verify", str(bad)]) == 2


def test_cli_cech(capsys):
    assert main(["cech", "classify", "--cocycle", "x^-1*y^-1", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["l0"] == 2
    assert main(["cech", "classify", "--m", "2", "--n", "2", "--p", "x+y"]) == 0
    assert main(["cech", "classify"]) == 2


def test_cli_blowup_dot(tmp_path, capsys):
    tower = tmp_path / "t.json"
    tower.write_text(json.dumps([["A2", [0, 0]], ["U1", [0, 0]]]))
    dot = tmp_path / "t.dot"
    assert main(["blowup", "--tower", str(tower), "--dot", str(dot), "--multiplicity"]) == 0
    assert "E1 -- E2" in dot.read_text()


def test_cli_synth_report(tmp_path):
    tower = tmp_path / "t.json"
    tower.write_text(json.dumps([["A2", [0, 0]], ["U1", [0, 0]]]))
    report = tmp_path / "r.json"
    assert main(["synth", "--cocycle", "x^-1*y^-1", "--tower", str(tower),
                 "--report", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["level_trace"] == [2, 1, 0]


def test_cli_modify(tmp_path):
    path = tmp_path / "x1.json"
    path.write_text(corpus_by_id()["X1"].dumps())
    assert main(["modify", "--case", str(path)]) == 0
