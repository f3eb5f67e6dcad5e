import json

from ospmin.cli import main, parse_config


def test_usage_error(capsys):
    assert main(["--p", "1", "--q", "4", "--n", "0"]) == 2


def test_unmatched_triples():
    assert main(["--p", "4", "--q", "4"]) == 2


def test_laguerre_classical(capsys):
    assert main(["--suite", "laguerre", "--p", "3", "--q", "5", "--n", "0"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_json_is_deterministic(capsys):
    args = ["--suite", "gkdim", "--suite", "algebra", "--p", "3", "--q", "5", "--n", "0", "--json"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args + ["--jobs", "2"]) == 0
    second = capsys.readouterr().out
    assert first == second
    rep = json.loads(first)
    assert {r["suite"] for r in rep} == {"gkdim", "algebra"}
    for r in rep:
        assert r["triple"] == {"p": 3, "q": 5, "n": 0}
        for c in r["checks"]:
            assert set(c) >= {"name", "indices", "status", "lhs", "rhs", "reference"}


def test_env_jobs(monkeypatch):
    monkeypatch.setenv("OSPMIN_JOBS", "3")
    assert parse_config([]).jobs == 3
    assert parse_config(["--jobs", "1"]).jobs == 1


def test_skipped_rows_carry_reason(capsys):
    assert main(["--suite", "functional", "--p", "3", "--q", "5", "--n", "0", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    for c in rep["checks"]:
        if c["status"] == "SKIPPED":
            assert c.get("reason") or c.get("note")
