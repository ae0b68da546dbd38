import json
import subprocess
import sys

import jsonschema
import pytest

from gammagraph.cli import load_schema, run


def read(path):
    return json.loads(path.read_text())


def validate(doc, name):
    jsonschema.Draft202012Validator(load_schema(name)).validate(doc)


def test_projective_roundtrip(tmp_path, capsys):
    p = tmp_path / "p.json"
    assert run(["gen", "projective", "--n", "3", "--group", "2", "--g", "1", "--k", "3", "--out", str(p)]) == 0
    validate(read(p), "graph")
    capsys.readouterr()
    assert run(["ep", "--input", str(p), "--family", "nonzero", "--mode", "report", "--no-timing"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[1].split(",")[2:5] == ["1", "2", "3"]
    assert run(["check", "bipartite", str(p)]) == 0
    assert capsys.readouterr().out.startswith("false")
    for mode in ("packing", "half", "hitting"):
        out = tmp_path / f"{mode}.json"
        assert run(["ep", "solve", str(p), "--mode", mode, "--out", str(out)]) == 0
        validate(read(out), "ep_result")
    assert read(tmp_path / "packing.json")["nu"] == 1


def test_generated_documents_match_schemas(tmp_path):
    cases = [
        (["gen", "wall", "--r", "3", "--s", "3", "--group", "3", "--seed", "1"], "wall", None),
        (["gen", "linkage", "--r", "2", "--purity", "crossing", "--weights", "1,2,1", "--group", "3"], "linkage", "linkage"),
        (["gen", "model", "--t", "6", "--group", "3", "--seed", "2", "--trees", "random"], "model", None),
        (["gen", "dnl", "--n", "3", "--m", "4", "--ell", "2"], "graph", None),
        (["gen", "graph", "--n", "6", "--edges", "9", "--group", "4", "--seed", "5", "--bipartite"], "graph", None),
    ]
    for k, (argv, schema, key) in enumerate(cases):
        out = tmp_path / f"{k}.json"
        assert run(argv + ["--out", str(out)]) == 0
        doc = read(out)
        validate(doc[key] if key else doc, schema)
    out = tmp_path / "ch.json"
    assert run(["gen", "chain", "--group", "3", "--length", "6", "--seed", "3", "--p", "3", "--out", str(out)]) == 0
    validate(read(out)["chain"], "chain")
    validate(read(out)["host"], "graph")


def test_downstream_commands(tmp_path, capsys):
    w, l, m, c = (tmp_path / f"{x}.json" for x in "wlmc")
    run(["gen", "wall", "--r", "3", "--s", "3", "--group", "3", "--weight", "1", "--out", str(w)])
    run(["gen", "linkage", "--r", "3", "--purity", "series", "--weights", "1,2", "--group", "3", "--out", str(l)])
    run(["gen", "model", "--t", "6", "--group", "3", "--seed", "1", "--out", str(m)])
    run(["gen", "chain", "--group", "3", "--length", "6", "--seed", "4", "--p", "3", "--out", str(c)])
    capsys.readouterr()
    assert run(["check", "wall", str(w)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "facially_odd=true bipartite=false"
    assert run(["linkage", "classify", str(l)]) == 0
    assert capsys.readouterr().out.startswith("series")
    out = tmp_path / "pack.json"
    assert run(["linkage", "pack", str(l), "--k", "2", "--out", str(out)]) == 0
    assert len(read(out)["cycles"]) == 2
    assert run(["model", "classify", str(m)]) == 0
    assert capsys.readouterr().out.startswith("gamma_odd")
    out = tmp_path / "chain.json"
    assert run(["chain", "wall", str(w), "--l", "1", "--out", str(out)]) == 0
    validate(read(out)["chain"], "chain")
    out = tmp_path / "target.json"
    assert run(["chain", "target", str(c), "--p", "3", "--a", "1", "--out", str(out)]) == 0
    assert sorted(read(out)["cycles"]) == ["0", "1", "2"]
    # shift reduction needs involution labels, so a Z3 host is a domain error
    assert run(["decomp", "shift", str(m)]) == 1
    g = tmp_path / "g.json"
    run(["gen", "graph", "--n", "7", "--edges", "11", "--group", "2,2", "--seed", "3", "--bipartite", "--out", str(g)])
    out = tmp_path / "shift.json"
    assert run(["decomp", "shift", str(g), "--out", str(out)]) == 0
    assert read(out)["reduced"] is True


def test_exit_codes(tmp_path, capsys):
    assert run(["gen", "bogus"]) == 2
    assert run(["check", "bipartite", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["decomp", "blocks", str(bad)]) == 2
    assert run(["gen", "wall", "--r", "2", "--s", "2", "--group", "3", "--weight", "0"]) == 1
    assert run(["gen", "projective", "--n", "3", "--group", "3"]) == 1
    assert run(["gen", "wall", "--group", "x"]) == 2
    c = tmp_path / "c.json"
    run(["gen", "chain", "--group", "5", "--length", "4", "--seed", "3", "--out", str(c)])
    assert run(["chain", "target", str(c), "--p", "5"]) == 1


def test_repro_bundle(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["repro", "counterexamples", "--out", str(a)]) == 0
    assert run(["repro", "counterexamples", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    validate(read(a), "repro_bundle")


def test_outputs_are_deterministic(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"m{k}.json"
        run(["gen", "model", "--t", "7", "--group", "5", "--weights", "random", "--trees", "random",
             "--seed", "9", "--out", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "gammagraph", "gen", "dnl", "--n", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    validate(json.loads(res.stdout), "graph")
    res = subprocess.run([sys.executable, "-m", "gammagraph"], capture_output=True, text=True, check=False)
    assert res.returncode == 2
