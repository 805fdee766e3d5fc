import json

import pytest

from conftest import DATA
from latesched.cli import run_cli
from latesched.documents import parse_result


def test_solve_alg3_fixture_a(tmp_path):
    out = tmp_path / "result.json"
    csv_path = tmp_path / "trace.csv"
    code = run_cli(
        ["solve", "--alg", "3", "--input", str(DATA / "fixture_a.json"), "--output", str(out), "--csv", str(csv_path)]
    )
    assert code == 0
    doc = parse_result(out.read_text())
    assert (doc.data["max_lateness"], doc.data["total_cost"]) == (2, 5)
    assert csv_path.read_text().splitlines()[0] == "h,lambda,delta_min,L,cost"


def test_solve_is_deterministic(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        run_cli(["solve", "--alg", "2", "--input", str(DATA / "fixture_b.json"), "--output", str(p)])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_solve_infeasible_exit_2(capsys):
    assert run_cli(["solve", "--alg", "1", "--input", str(DATA / "fixture_a.json")]) == 2


def test_solve_trace_to_stderr(capsys):
    assert run_cli(["solve", "--alg", "2", "--input", str(DATA / "fixture_a.json"), "--trace"]) == 0
    err = capsys.readouterr().err
    assert "h=0" in err and "terminal: budget-exhausted" in err


def test_analyze_fixture_b(capsys):
    assert run_cli(["analyze", "--input", str(DATA / "fixture_b.json")]) == 0
    out = capsys.readouterr().out
    assert "{J2} overflow J2 r(K)=1 e=J1 delta=5" in out
    assert "(8, 9)" in out


def test_gen_writes_golden(capsys):
    argv = ["gen", "--n", "5", "--seed", "1", "--max-processing", "3", "--horizon", "15",
            "--cost-max", "2", "--budget", "fraction:0.5"]
    assert run_cli(argv) == 0
    assert capsys.readouterr().out == (DATA / "golden_gen_n5_seed1.json").read_text()


def test_verify_passes(capsys):
    assert run_cli(["verify", "--alg", "2", "--trials", "10", "--seed", "7", "--n", "4"]) == 0
    assert "10/10 trials passed" in capsys.readouterr().out


def test_verify_reports_violations(capsys):
    # several of these trials have a level above the compressible optimum
    code = run_cli(["verify", "--alg", "3", "--trials", "20", "--seed", "1", "--n", "4"])
    out = capsys.readouterr().out
    assert code == 3 and "lambda-bound" in out


def test_oracle_and_limit(capsys, monkeypatch):
    assert run_cli(["oracle", "--input", str(DATA / "fixture_b.json")]) == 0
    assert json.loads(capsys.readouterr().out)["max_lateness"] == 1
    assert run_cli(["oracle", "--input", str(DATA / "fixture_a.json"), "--mode", "compressible"]) == 0
    assert json.loads(capsys.readouterr().out)["max_lateness"] == -3
    monkeypatch.setenv("LATESCHED_ORACLE_LIMIT", "2")
    assert run_cli(["oracle", "--input", str(DATA / "fixture_b.json")]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["solve", "--alg", "4", "--input", "x.json"],
        ["gen", "--n", "3"],
        ["verify", "--alg", "1", "--trials", "1", "--seed", "0", "--n", "2"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as info:
        run_cli(argv)
    assert info.value.code == 1


def test_bad_input_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": "latesched-instance/1", "budget": 0, "jobs": []}')
    assert run_cli(["analyze", "--input", str(bad)]) == 1
    assert "jobs" in capsys.readouterr().err
    assert run_cli(["analyze", "--input", str(tmp_path / "missing.json")]) == 1
