from __future__ import annotations

import csv
import json

import pytest
from click.testing import CliRunner

from positroids.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return go


def test_convert_le_to_perm_and_necklace(run):
    r = run("convert", "DD/DD")
    assert r.exit_code == 0 and r.output.strip() == "3 4 1 2"
    r = run("convert", "3 4 1 2", "--from", "perm", "--to", "necklace")
    assert r.output.strip() == "{1,2} {2,3} {3,4} {1,4}"


def test_convert_perm_back_to_le(run):
    r = run("convert", "3 4 1 2", "--from", "perm", "--to", "le")
    assert r.exit_code == 0 and r.output.strip() == "DD\nDD"


def test_bad_input_exits_2(run):
    r = run("convert", "DD/D.")
    assert r.exit_code == 2
    r = run("convert", "{1,2} {3,4}", "--from", "bases", "--n", "4")
    assert r.exit_code == 2


def test_eval(run):
    r = run("eval", "DD/DD", "1|1")
    assert r.exit_code == 0 and r.output.strip() == "a*b + b*c"


def test_bases_target_verify(run):
    r = run("bases", "@round", "--which", "target", "--verify")
    assert r.exit_code == 0
    assert len(r.output.split("\n")[0].split()) == 15


def test_transform_writes_outputs(run, tmp_path):
    out = tmp_path / "t"
    r = run("transform", "@example1", "--out", str(out), "--verify")
    assert r.exit_code == 0
    assert {p.name for p in out.iterdir()} >= {"trace.jsonl", "basis.txt", "summary.json"}
    r = run("transform", "@example1", "--replay", str(out / "trace.jsonl"))
    assert r.exit_code == 0


def test_replay_of_corrupted_trace_exits_1(run, tmp_path):
    out = tmp_path / "t"
    run("transform", "@example1", "--out", str(out))
    lines = (out / "trace.jsonl").read_text().splitlines()
    step = json.loads(lines[3])
    h = step["indices"]
    h["H3"], h["H5"] = h["H5"], h["H3"]
    lines[3] = json.dumps(step)
    (out / "bad.jsonl").write_text("\n".join(lines) + "\n")
    bad = tmp_path / "bad"
    r = run("transform", "@example1", "--replay", str(out / "bad.jsonl"), "--out", str(bad))
    assert r.exit_code == 1
    assert (bad / "reproducer.json").exists()
    (out / "junk.jsonl").write_text("{not json\n")
    assert run("transform", "@example1", "--replay", str(out / "junk.jsonl")).exit_code == 2


def test_transform_refuses_out_of_scope(run):
    from conftest import cells
    from positroids.tpdiagram import is_weakly_connected

    d = next(c for c in cells(5) if not is_weakly_connected(c))
    r = run("transform", d.to_text().replace("\n", "/"), "--n", str(d.n))
    assert r.exit_code == 2


def test_plabic_exports(run, tmp_path):
    dot = tmp_path / "q.dot"
    r = run("plabic", "@a7", "--export-dot", str(dot))
    assert r.exit_code == 0
    assert dot.read_text().startswith("digraph quiver {")
    moves = tmp_path / "m.jsonl"
    r = run("plabic", "DD/DD", "--moves", "20", "--seed", "5", "--moves-out", str(moves))
    assert r.exit_code == 0 and moves.exists()


def test_scan_outputs(run, tmp_path):
    out = tmp_path / "s"
    r = run("scan", "4", "--out", str(out), "--traces")
    assert r.exit_code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["ok"] and report["counts"]["cells"] == 1 + 2 + 5 + 16 + 65
    rows = list(csv.DictReader(open(out / "census.csv")))
    assert [int(x["cells"]) for x in rows] == [1, 2, 5, 16, 65]
    assert (out / "census.png").read_bytes()[:4] == b"\x89PNG"
    assert run("scan", "9").exit_code == 2
