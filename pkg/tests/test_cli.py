import json

import pytest

from csltl.cli import EXIT_BUDGET, EXIT_FAILS, EXIT_HOLDS, EXIT_USAGE, SessionConfig, main


def run(capsys, *args):
    code = main([str(a) for a in args])
    return code, capsys.readouterr()


def test_diagnose_correct(capsys, fx):
    code, out = run(capsys, "diagnose", fx / "simple.tccp", fx / "spec_eventually.spec")
    assert code == EXIT_HOLDS
    assert "p/1: Correct" in out.out


def test_diagnose_warning_with_witness(capsys, fx):
    code, out = run(capsys, "diagnose", fx / "simple.tccp", fx / "spec_always.spec")
    assert code == EXIT_FAILS
    assert "Warning" in out.out and "witness" in out.out


def test_valid_tautology(capsys, fx):
    code, out = run(capsys, "valid", fx / "taut.f")
    assert code == EXIT_HOLDS and out.out.startswith("Valid")


def test_sat_and_unsat(capsys, fx, tmp_path):
    code, _ = run(capsys, "sat", fx / "sat_simple.f")
    assert code == EXIT_FAILS
    f = tmp_path / "f.f"
    f.write_text("F `y=1` & ~`y=1`")
    code, out = run(capsys, "sat", f, "--oracle-check")
    assert code == EXIT_HOLDS and "oracle: agree" in out.out


@pytest.mark.parametrize("name", ["diagnose_always", "sat_simple"])
def test_json_golden(capsys, fx, name):
    args = {
        "diagnose_always": ["diagnose", fx / "simple.tccp", fx / "spec_always.spec"],
        "sat_simple": ["sat", fx / "sat_simple.f"],
    }[name]
    code, out = run(capsys, *args, "--format", "json", "--oracle-check")
    got = json.loads(out.out)
    assert isinstance(got.pop("seconds"), float)
    assert got == json.loads((fx / "golden" / f"{name}.json").read_text())


def test_dot_output(capsys, fx, tmp_path):
    dot = tmp_path / "t.dot"
    code, _ = run(capsys, "valid", fx / "taut.f", "--dot", dot)
    text = dot.read_text()
    assert code == EXIT_HOLDS and text.startswith("digraph") and "×" in text


def test_uncovered_flag(capsys, fx):
    code, out = run(capsys, "diagnose", fx / "simple.tccp", fx / "spec_eventually.spec", "--uncovered")
    assert code == EXIT_HOLDS and "heuristic" in out.out


def test_table_system(capsys, fx, tmp_path):
    f = tmp_path / "f.f"
    f.write_text("`d` -> `a`")
    code, _ = run(capsys, "valid", f, "--table", fx / "four.table")
    assert code == EXIT_HOLDS


def test_streams_flag(capsys, tmp_path):
    f = tmp_path / "s.f"
    f.write_text("`C=[near|C1]` & X `C1=[out|C2]` & X ~`C~=out`")
    code, _ = run(capsys, "sat", f, "--streams")
    assert code == EXIT_FAILS


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    bad = tmp_path / "bad.f"
    bad.write_text("`a` &")
    assert run(capsys, "sat", bad)[0] == EXIT_USAGE
    assert run(capsys, "sat", tmp_path / "missing.f")[0] == EXIT_USAGE
    assert run(capsys, "sat", bad, "--budget", "0")[0] == EXIT_USAGE


def test_budget_exit(capsys, tmp_path):
    f = tmp_path / "f.f"
    f.write_text("G F `a` & G F `b`")
    assert run(capsys, "sat", f, "--budget", "3")[0] == EXIT_BUDGET


def test_session_config_validation():
    with pytest.raises(ValueError):
        SessionConfig(node_budget=0)
    with pytest.raises(ValueError):
        SessionConfig(output="dot")
