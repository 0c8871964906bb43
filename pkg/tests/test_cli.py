import csv
import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from bihole_lab.cli import main
from bihole_lab.generators import complete, empty, full_star
from bihole_lab.graph import read_edge_list, write_edge_list
from bihole_lab.report import BENCH_SCHEMA, TRIAL_SCHEMA

GOLDEN = Path(__file__).parent / "golden"

# (name, argv); run in order inside one scratch directory
GOLDEN_COMMANDS = [
    ("gen", ["gen", "--n", "60", "--delta", "6", "--seed", "3", "--out", "g.txt"]),
    ("gen_small", ["gen", "--n", "8", "--p", "0.3", "--seed", "5", "--out", "small.txt"]),
    ("find_bihole", ["find-bihole", "--input", "g.txt", "--epsilon", "0.5", "--seed", "1"]),
    ("color", ["color", "--input", "g.txt", "--epsilon", "0.5", "--seed", "2"]),
    ("check_colorable", ["check-colorable", "--input", "g.txt"]),
    ("oracle", ["oracle", "--input", "small.txt", "--mode", "chib"]),
    ("coupon", ["coupon", "--q", "5", "--delta", "10", "--trials", "3000", "--seed", "1"]),
    ("bench", ["bench", "--suite", "coupon", "--q", "3", "--trials", "2000", "--seeds", "3"]),
]


def run(argv, cwd, threads="2"):
    env = dict(os.environ, BIHOLE_LAB_THREADS=threads)
    return subprocess.run([sys.executable, "-m", "bihole_lab.cli", *argv], cwd=cwd, env=env,
                          capture_output=True, text=True, timeout=300)


@pytest.fixture(scope="module")
def golden_runs(tmp_path_factory):
    """Every golden command run twice, in two separate directories."""
    outs = []
    for k in range(2):
        d = tmp_path_factory.mktemp(f"golden{k}")
        outs.append({name: run(argv, d, threads=str(k + 1)) for name, argv in GOLDEN_COMMANDS})
    return outs


@pytest.mark.parametrize("name", [n for n, _ in GOLDEN_COMMANDS])
def test_golden_stdout(golden_runs, name):
    first, second = golden_runs[0][name], golden_runs[1][name]
    assert first.returncode == 0, first.stderr
    assert first.stdout == second.stdout
    path = GOLDEN / f"{name}.out"
    if os.environ.get("BIHOLE_LAB_REGEN_GOLDEN"):
        path.write_text(first.stdout, encoding="utf-8")
    assert first.stdout == path.read_text(encoding="utf-8")


def test_reports_validate(golden_runs):
    outs = golden_runs[0]
    for name in ("find_bihole", "color", "oracle", "coupon"):
        jsonschema.validate(json.loads(outs[name].stdout), TRIAL_SCHEMA)
    jsonschema.validate(json.loads(outs["bench"].stdout), BENCH_SCHEMA)


def _main(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_examples(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = _main(["gen", "--n", "3", "--p", "0", "--seed", "1", "--out", "g.txt"], capsys)
    assert code == 0 and (tmp_path / "g.txt").read_text() == "3 3 0\n"
    _main(["gen", "--n", "3", "--p", "1", "--seed", "1", "--out", "k.txt"], capsys)
    assert read_edge_list(tmp_path / "k.txt").edge_count == 9
    code, out, _ = _main(["gen", "--n", "1000", "--delta", "64", "--seed", "1", "--out", "d.txt"], capsys)
    assert json.loads(out)["p"] == 0.064
    code, out, _ = _main(["gen", "--n", "500", "--delta", "64", "--cap", "20", "--seed", "1", "--out", "c.txt"],
                         capsys)
    assert json.loads(out)["max_degree"] <= 20


def test_find_bihole_examples(tmp_path, capsys):
    write_edge_list(empty(10), tmp_path / "e.txt")
    write_edge_list(complete(10), tmp_path / "k.txt")
    wit = tmp_path / "w.txt"
    code, out, _ = _main(["find-bihole", "--input", str(tmp_path / "e.txt"), "--epsilon", "0.5",
                          "--emit-witness", str(wit)], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["metrics"]["target_met"] and rep["outcome"] == "target_met"
    lines = wit.read_text().split("\n")
    assert lines[0].split() == [str(i) for i in range(10)] and len(lines) == 3
    code, out, _ = _main(["find-bihole", "--input", str(tmp_path / "k.txt"), "--epsilon", "0.5"], capsys)
    rep = json.loads(out)
    assert rep["metrics"]["t"] == 0 and not rep["metrics"]["target_met"]
    assert rep["wall_time_ms"] is None
    code, out, _ = _main(["find-bihole", "--input", str(tmp_path / "k.txt"), "--epsilon", "0.5", "--timing"],
                         capsys)
    assert json.loads(out)["wall_time_ms"] >= 0


def test_color_examples(tmp_path, capsys):
    write_edge_list(full_star(4), tmp_path / "s.txt")
    write_edge_list(empty(6), tmp_path / "e.txt")
    code, out, _ = _main(["color", "--input", str(tmp_path / "s.txt"), "--epsilon", "0.5"], capsys)
    assert code == 0 and json.loads(out)["outcome"] == "infeasible"
    trace = tmp_path / "t.json"
    code, out, _ = _main(["color", "--input", str(tmp_path / "e.txt"), "--epsilon", "0.5",
                          "--trace-out", str(trace)], capsys)
    assert code == 0 and json.loads(out)["metrics"]["palette_size"] == 1
    assert json.loads(trace.read_text())["phase_taken"] == "FallbackGlobal"


def test_check_colorable(tmp_path, capsys):
    write_edge_list(full_star(3), tmp_path / "s.txt")
    code, out, _ = _main(["check-colorable", "--input", str(tmp_path / "s.txt")], capsys)
    assert json.loads(out) == {"balanced_colorable": False, "matching_size": 2}


def test_oracle_modes(tmp_path, capsys):
    write_edge_list(full_star(4), tmp_path / "s.txt")
    p = str(tmp_path / "s.txt")
    assert json.loads(_main(["oracle", "--input", p, "--mode", "bihole"], capsys)[1])["metrics"]["optimum"] == 3
    rep = json.loads(_main(["oracle", "--input", p, "--mode", "chib"], capsys)[1])
    assert rep["outcome"] == "infeasible" and rep["metrics"]["optimum"] is None
    assert json.loads(_main(["oracle", "--input", p, "--mode", "matching"], capsys)[1])["metrics"]["optimum"] == 3
    rep = json.loads(_main(["oracle", "--input", p, "--mode", "matching", "--direct"], capsys)[1])
    assert rep["metrics"]["optimum"] == 1


def test_exit_codes(tmp_path, capsys):
    write_edge_list(empty(30), tmp_path / "big.txt")
    (tmp_path / "bad.txt").write_text("2 2 1\n0 9\n")
    (tmp_path / "unbal.txt").write_text("2 3 0\n")
    assert _main([], capsys)[0] == 1
    assert _main(["color", "--input", "x"], capsys)[0] == 1                      # missing --epsilon
    assert _main(["color", "--input", "x", "--epsilon", "2"], capsys)[0] == 1
    assert _main(["gen", "--n", "3", "--delta", "9", "--out", str(tmp_path / "o.txt")], capsys)[0] == 1
    assert _main(["color", "--input", str(tmp_path / "nope.txt"), "--epsilon", "0.5"], capsys)[0] == 2
    code, _, err = _main(["color", "--input", str(tmp_path / "bad.txt"), "--epsilon", "0.5"], capsys)
    assert code == 2 and "line 2" in err
    assert _main(["find-bihole", "--input", str(tmp_path / "unbal.txt"), "--epsilon", "0.5"], capsys)[0] == 2
    assert _main(["check-colorable", "--input", str(tmp_path / "unbal.txt")], capsys)[0] == 2
    assert _main(["oracle", "--input", str(tmp_path / "big.txt"), "--mode", "bihole"], capsys)[0] == 2


def test_bench_thresholds_and_csv(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("BIHOLE_LAB_THREADS", "1")
    out_csv = tmp_path / "b.csv"
    code, out, _ = _main(["bench", "--suite", "coupon", "--q", "2", "--trials", "100000", "--seeds", "2",
                          "--csv", str(out_csv)], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert all(abs(t["metrics"]["mean_T"] - 3) <= 0.15 for t in doc["trials"])
    rows = list(csv.DictReader(out_csv.open()))
    assert [r["seed"] for r in rows] == ["0", "1"] and rows[0]["wall_time_ms"] == ""
    # a bi-hole suite on graphs far too small for the bound fails its threshold
    code, out, _ = _main(["bench", "--suite", "bihole", "--n", "30", "--delta", "20", "--epsilon", "0.1",
                          "--seeds", "3"], capsys)
    assert code == 4 and not json.loads(out)["passed"]


def test_bench_color_soundness(capsys, monkeypatch):
    monkeypatch.setenv("BIHOLE_LAB_THREADS", "2")
    code, out, _ = _main(["bench", "--suite", "color", "--n", "200", "--delta", "8", "--seeds", "50"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["aggregate"]["successes"] == 50
    assert all(t["outcome"] == "colored" for t in doc["trials"])


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("BIHOLE_LAB_THREADS", "many")
    assert _main(["bench", "--suite", "coupon", "--q", "2", "--trials", "10", "--seeds", "2"], capsys)[0] == 2
