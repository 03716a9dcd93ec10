from __future__ import annotations

import json

import pytest

from hjpar.cli import EXIT_BUDGET, EXIT_NONE, EXIT_OK, EXIT_USAGE, main
from hjpar.colorings import Coloring
from hjpar.core import ConvexSubspace, enumerate_subspace, rank_word


def run(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_exact_hj_prints_two_and_writes_certificate(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(capsys, "exact", "--kind", "hj", "--dim", 1, "--alphabet", 2,
                       "--colors", 2)
    assert code == EXIT_OK and out.strip() == "2"
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert cert["value"] == 2 and cert["bad_coloring"]["length"] == 1
    assert cert["bad_coloring"]["table"] in ([0, 1], [1, 0])


def test_bound_gowers(capsys):
    code, out, _ = run(capsys, "bound", "--kind", "gowers", "--r", 2, "--m", 3)
    assert code == EXIT_OK and out.strip() == "2^(2^(2^(2^(2^12))))"


def test_bound_json(capsys, tmp_path):
    path = tmp_path / "b.json"
    code, out, _ = run(capsys, "bound", "--kind", "grz", "--n", 3, "--x", 2, "-o", path)
    assert code == EXIT_OK and out.strip() == "E_2(38)"
    data = json.loads(path.read_text())
    assert data["exact"] is False and data["expr"]["op"] == "call"


def test_counterexample_check(capsys):
    code, out, _ = run(capsys, "check", "--counterexample", "--m", 3, "--alphabet", 2,
                       "--base", 0)
    assert code == EXIT_OK
    assert "no singleton-block subspace monochromatic" in out


def test_invariant_check_exit_codes(capsys):
    code, _, _ = run(capsys, "check", "--invariant", "--family", "parity", "--length", 3,
                     "--alphabet", 3)
    assert code == EXIT_OK
    code, out, _ = run(capsys, "check", "--invariant", "--family", "table", "--length", 2,
                       "--alphabet", 2, "--values", "0,1,0,1")
    assert code == EXIT_NONE and "violation" in out


@pytest.mark.parametrize("op,extra", [
    ("mono", ["--dim", 2]),
    ("par", ["--size", 2, "--equiv", "alpha", "--alpha", 1]),
    ("par-alpha", ["--size", 2, "--alpha", 0]),
    ("par-full", ["--size", 2]),
    ("hj", ["--dim", 1]),
    ("dim-reduce", ["--dim", 2]),
])
def test_gen_witness_check_roundtrip(capsys, tmp_path, op, extra):
    col, wit = tmp_path / "c.json", tmp_path / "w.json"
    code, _, _ = run(capsys, "gen", "--family", "parity", "--length", 6, "--alphabet", 2,
                     "-o", col)
    assert code == EXIT_OK
    code, _, _ = run(capsys, "witness", "--op", op, "--coloring", col, *extra, "-o", wit)
    assert code == EXIT_OK
    data = json.loads(wit.read_text())
    assert data["format"] == "hjpar/witness@1" and data["witness"] is not None
    assert data["coloring"] == json.loads(col.read_text())
    code, out, _ = run(capsys, "check", "--witness", wit)
    assert code == EXIT_OK, out


def test_set_coloring_ops(capsys, tmp_path):
    for op, extra in (("homogeneous", ["--l", 2, "--target", 3]),
                      ("ram", ["--l", 3, "--target", 3]),
                      ("ram-from-ramsey", ["--l", 2])):
        wit = tmp_path / f"{op}.json"
        code, _, _ = run(capsys, "witness", "--op", op, "--n", 10, "--seed", 7, *extra,
                         "-o", wit)
        assert code == EXIT_OK
        assert run(capsys, "check", "--witness", wit)[0] == EXIT_OK


def test_grid_witness(capsys, tmp_path):
    wit = tmp_path / "g.json"
    code, _, _ = run(capsys, "witness", "--op", "grid", "--family", "constant", "--length", 2,
                     "--alphabet", 4, "--side", 2, "-o", wit)
    assert code == EXIT_OK
    assert json.loads(wit.read_text())["witness"] == {"difference": 1, "offsets": [0, 0],
                                                      "side": 2}
    assert run(capsys, "check", "--witness", wit)[0] == EXIT_OK


def test_tampered_witness_is_rejected(capsys, tmp_path):
    wit = tmp_path / "w.json"
    run(capsys, "witness", "--op", "mono", "--family", "random", "--length", 4,
        "--alphabet", 2, "--seed", 1, "-o", wit)
    data = json.loads(wit.read_text())
    c = Coloring.from_json(data["coloring"])
    table = [int(x) for x in c.table]
    first = enumerate_subspace(ConvexSubspace.from_json(data["witness"]), 2)[0]
    table[rank_word(first, 2)] ^= 1
    data["coloring"] = {**c.to_json(dense=True), "table": table}
    wit.write_text(json.dumps(data))
    code, out, _ = run(capsys, "check", "--witness", wit)
    assert code == EXIT_NONE and "not monochromatic" in out


def test_no_witness_exit_code(capsys):
    code, out, _ = run(capsys, "witness", "--op", "mono", "--family", "table", "--length", 1,
                       "--alphabet", 2, "--values", "0,1")
    assert code == EXIT_NONE and json.loads(out)["witness"] is None


def test_pipeline_failure_is_reported(capsys):
    code, out, _ = run(capsys, "witness", "--op", "hj", "--family", "random", "--length", 6,
                       "--alphabet", 2, "--seed", 0)
    data = json.loads(out)
    assert code == EXIT_NONE and "stage" in data["failure"]
    assert data["trace"]["format"] == "hjpar/trace@1"


def test_budget_exit_code(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("HJPAR_MAX_NODES", "50")
    out = tmp_path / "p.json"
    code, _, err = run(capsys, "exact", "--kind", "w", "--h", 1, "--m", 3, "--colors", 2,
                       "-o", out)
    assert code == EXIT_BUDGET and "budget" in err
    assert json.loads(out.read_text())["status"] == "budget_exceeded"


@pytest.mark.parametrize("args", [
    ["exact", "--kind", "nope"],
    ["exact", "--kind", "hj", "--dim", "1"],
    ["exact", "--kind", "hj", "--dim", "1", "--alphabet", "2", "--colors", "2",
     "--max-nodes", "0"],
    ["bound", "--kind", "hj", "--dim", "1", "--alphabet", "3", "--colors", "2"],
    ["witness", "--op", "mono"],
    ["check"],
    ["gen", "--family", "constant", "--length", "2", "--alphabet", "2", "--value", "5"],
    [],
])
def test_usage_errors(capsys, args):
    assert main(args) == EXIT_USAGE
    assert capsys.readouterr().err


def test_same_path_twice_is_refused(capsys, tmp_path):
    p = tmp_path / "x.json"
    run(capsys, "gen", "--family", "constant", "--length", 2, "--alphabet", 2, "-o", p)
    code, _, err = run(capsys, "witness", "--op", "mono", "--coloring", p, "-o", p)
    assert code == EXIT_USAGE and "distinct" in err


def test_report_writes_tables_and_figures(capsys, tmp_path):
    cert, wit = tmp_path / "cert.json", tmp_path / "wit.json"
    run(capsys, "exact", "--kind", "w", "--h", 1, "--m", 3, "--colors", 2, "-o", cert)
    run(capsys, "witness", "--op", "mono", "--family", "parity", "--length", 4,
        "--alphabet", 2, "-o", wit)
    code, out, _ = run(capsys, "report", cert, wit, "--out-dir", tmp_path / "rep")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 2 and lines[0].split("\t")[2] == "value=9"
    for stem in ("cert", "wit"):
        assert (tmp_path / "rep" / f"{stem}.csv").exists()
        assert (tmp_path / "rep" / f"{stem}.png").stat().st_size > 0
    rows = (tmp_path / "rep" / "cert.csv").read_text().splitlines()
    assert rows[0] == "n,bad_coloring_found,nodes,prunes" and rows[-1].startswith("9,0,")
