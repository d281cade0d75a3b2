import csv
import io
import subprocess
import sys
from pathlib import Path

import pytest

from sequpdate.cli import main
from sequpdate.state_io import read_state

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def logs(tmp_path):
    db = tmp_path / "db.log"
    inc = tmp_path / "inc.log"
    db.write_text("1,a\n2,b\n3,c\n4,d\n5,a\n6,b\n7,c\n8,d\n")
    inc.write_text("10,a\n11,b\n12,e\n")
    return db, inc


def test_mine_example_fixture(tmp_path, capsys):
    out = tmp_path / "s"
    code, _, _ = run(capsys, "mine", "--input", FIXTURES / "example_db.log", "--min-supp", "0.1",
                     "--min-nbd-supp", "0.05", "--window", "1", "--out", out)
    assert code == 0
    state, table = read_state(out)
    assert sorted(table.decode(s)[0] for s in state.level(1)) == ["a", "b", "c", "d"]


def test_add_then_diff_against_remine(tmp_path, capsys, logs):
    db, inc = logs
    s, s2, ref = tmp_path / "s", tmp_path / "s2", tmp_path / "ref"
    assert run(capsys, "mine", "--input", db, "--min-supp", "0.25", "--out", s)[0] == 0
    code, out, _ = run(capsys, "update", "add", "--state", s, "--log", db, "--increment", inc, "--out", s2)
    assert code == 0
    metrics = {r["metric"]: r["value"] for r in rows(out)}
    assert metrics["u_size"] == "11"
    assert run(capsys, "mine", "--input", db, "--input", inc, "--min-supp", "0.25", "--out", ref)[0] == 0
    code, out, _ = run(capsys, "diff", "--a", s2, "--b", ref, "--frequent-only")
    assert code == 0 and rows(out) == []


def test_diff_reports_changes(tmp_path, capsys, logs):
    db, inc = logs
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, "mine", "--input", db, "--min-supp", "0.25", "--out", a)
    run(capsys, "mine", "--input", db, "--input", inc, "--min-supp", "0.25", "--out", b)
    code, out, _ = run(capsys, "diff", "--a", a, "--b", b)
    changes = {(r["change"], r["pattern"]) for r in rows(out)}
    assert ("recounted", "a") in changes
    assert ("removed", "c,d") in changes
    assert ("added", "e") in changes


def test_show(tmp_path, capsys, logs):
    db, _ = logs
    s = tmp_path / "s"
    run(capsys, "mine", "--input", db, "--min-supp", "0.25", "--out", s)
    code, out, _ = run(capsys, "show", "--state", s, "--level", "2", "--csv")
    assert code == 0
    got = rows(out)
    assert got and all(r["length"] == "2" for r in got)
    assert {"set", "pattern", "count", "support"} <= set(got[0])


def test_show_empty_state(tmp_path, capsys):
    empty = tmp_path / "empty.log"
    empty.write_text("")
    s = tmp_path / "s"
    assert run(capsys, "mine", "--input", empty, "--min-supp", "0.5", "--out", s)[0] == 0
    code, out, _ = run(capsys, "show", "--state", s)
    assert code == 0 and out == "set,length,pattern,count,support\n"


def test_delete(tmp_path, capsys, logs):
    db, _ = logs
    s, s2, rest = tmp_path / "s", tmp_path / "s2", tmp_path / "rest"
    run(capsys, "mine", "--input", db, "--min-supp", "0.25", "--min-nbd-supp", "0.1", "--out", s)
    code, out, _ = run(capsys, "update", "delete", "--state", s, "--log", db, "--before", "5", "--out", s2,
                       "--check-recall", "--log-out", rest)
    assert code == 0
    (row,) = rows(out)
    assert row["min_freq"] == "0.125" and row["u_size"] == "4" and row["false_frequent"] == "0"
    assert (rest / "segment-000.log").read_text().startswith("5,a\n")
    assert read_state(s2)[0].db_size == 4


def test_delete_reports_unrecovered(tmp_path, capsys):
    s2 = tmp_path / "s2"
    code, out, err = run(capsys, "update", "delete", "--state", FIXTURES / "dus_adversarial.state",
                         "--log", FIXTURES / "dus_adversarial.log", "--before", "7", "--out", s2,
                         "--check-recall")
    assert code == 0
    assert rows(out)[0]["missing_frequent"] == "1"
    assert "not recovered: <x>" in err


def test_gen(tmp_path, capsys):
    out = tmp_path / "g.log"
    args = ["gen", "--seed", "1", "--alphabet", "5", "--length", "50", "--plant", "a,b,c:0.05",
            "--noise-rate", "0.5"]
    assert run(capsys, *args, "--out", out)[0] == 0
    code, stdout, _ = run(capsys, *args)
    assert code == 0 and stdout == out.read_text()
    assert len(stdout.splitlines()) == 50


def test_bench(tmp_path, capsys):
    base, inc = tmp_path / "base.log", tmp_path / "inc.log"
    run(capsys, "gen", "--seed", "1", "--alphabet", "6", "--length", "400", "--plant", "a,b:0.1", "--out", base)
    run(capsys, "gen", "--seed", "2", "--alphabet", "6", "--length", "50", "--plant", "a,b:0.1",
        "--start", "2000", "--out", inc)
    code, out, _ = run(capsys, "bench", "--base", base, "--increment", inc, "--min-supp", "0.05,0.1",
                       "--min-nbd-supp", "0,0.02", "--window", "5")
    assert code == 0
    got = rows(out)
    assert len(got) == 4 and all(float(r["speedup"]) > 0 for r in got)


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["mine", "--input", "x"],
    ["mine", "--input", "x", "--min-supp", "abc", "--out", "y"],
    ["mine", "--input", "x", "--min-supp", "1.5", "--out", "y"],
    ["mine", "--input", "x", "--min-supp", "0.1", "--window", "-3", "--out", "y"],
    ["gen", "--seed", "1", "--alphabet", "2", "--length", "5", "--plant", "a,q:0.1"],
    ["bench", "--base", "x", "--increment", "y", "--min-supp", "0.1", "--min-nbd-supp", "0.2"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.count("\n") == 1


def test_input_errors(tmp_path, capsys, logs):
    db, inc = logs
    bad = tmp_path / "bad.log"
    bad.write_text("1,a\nnot a line\n")
    assert run(capsys, "mine", "--input", tmp_path / "missing", "--min-supp", "0.5", "--out", tmp_path / "s")[0] == 2
    code, _, err = run(capsys, "mine", "--input", bad, "--min-supp", "0.5", "--out", tmp_path / "s")
    assert code == 2 and "line 2" in err
    # increment earlier than the base
    s = tmp_path / "s"
    run(capsys, "mine", "--input", inc, "--min-supp", "0.5", "--out", s)
    assert run(capsys, "update", "add", "--state", s, "--log", inc, "--increment", db, "--out", tmp_path / "t")[0] == 2
    junk = tmp_path / "junk.state"
    junk.write_text("hello\n")
    assert run(capsys, "show", "--state", junk)[0] == 2


def test_state_errors(tmp_path, capsys, logs):
    db, inc = logs
    s = tmp_path / "s"
    run(capsys, "mine", "--input", db, "--min-supp", "0.25", "--out", s)
    base = ["update", "add", "--state", s, "--log", db, "--increment", inc, "--out", tmp_path / "t"]
    assert run(capsys, *base, "--min-supp", "0.3")[0] == 3
    assert run(capsys, *base, "--window", "5")[0] == 3
    assert run(capsys, *base, "--min-supp", "0.25", "--window", "inf")[0] == 0
    # state does not cover the log it is paired with
    assert run(capsys, "update", "add", "--state", s, "--log", inc, "--increment", inc, "--out", tmp_path / "t")[0] == 3
    v9 = tmp_path / "v9"
    v9.write_text("sequpdate-state 9\n")
    assert run(capsys, "show", "--state", v9)[0] == 3
    tampered = tmp_path / "tampered"
    tampered.write_text(s.read_text().replace("F 0 2\n", "F 0 1\n", 1))
    code, _, err = run(capsys, "show", "--state", tampered)
    assert code == 3 and "<a>" in err


def test_consistency_error_exit_code(tmp_path, capsys, monkeypatch):
    import sequpdate.cli as cli
    from sequpdate.errors import ConsistencyError

    def boom(*a, **k):
        raise ConsistencyError("forced")

    monkeypatch.setattr(cli, "ius_update", boom)
    db = tmp_path / "db.log"
    db.write_text("1,a\n")
    s = tmp_path / "s"
    run(capsys, "mine", "--input", db, "--min-supp", "0.5", "--out", s)
    code, _, err = run(capsys, "update", "add", "--state", s, "--log", db, "--increment", db, "--out", s)
    assert code == 4 and "forced" in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "sequpdate", "show", "--state", str(tmp_path / "nope")],
                          capture_output=True, text=True)
    assert proc.returncode == 2
