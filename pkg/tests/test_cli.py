import json
import subprocess
import sys
from fractions import Fraction

import pytest

from splitsplines.cli import main
from splitsplines.fixtures import builtin, spoke_split
from splitsplines.meshio import (MeshFormatError, dump_mesh, load_mesh, mesh_from_dict, mesh_to_dict,
                                 parse_rational)
from splitsplines.refine import standard_simplex


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


TWO = {"ambient_dim": 2, "vertices": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]], "cells": [[0, 1, 2], [1, 2, 3]]}
OVERLAP = {"ambient_dim": 2, "vertices": [["0", "0"], ["2", "0"], ["0", "2"], ["1", "0"], ["3", "0"], ["1", "2"]],
           "cells": [[0, 1, 2], [3, 4, 5]]}


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("0.1") == Fraction(1, 10)
    assert parse_rational(7) == 7
    for bad in ("1/0", "abc", 0.5, None):
        with pytest.raises(MeshFormatError):
            parse_rational(bad)


def test_mesh_dict_errors():
    with pytest.raises(MeshFormatError):
        mesh_from_dict({"vertices": [["0", "0"]]})
    with pytest.raises(MeshFormatError):
        mesh_from_dict({"ambient_dim": 2, "vertices": [["0", "0", "1"]], "cells": []})
    with pytest.raises(MeshFormatError):
        mesh_from_dict({"ambient_dim": 2, "vertices": [["0", "0"]], "cells": [[0, 1, 2]]})


def test_round_trip(tmp_path):
    for name in ("alfeld", "facet", "double-alfeld"):
        m = builtin(name, 3)
        dump_mesh(m, tmp_path / "m.json")
        assert load_mesh(tmp_path / "m.json") == m
        assert mesh_to_dict(load_mesh(tmp_path / "m.json")) == mesh_to_dict(m)


def test_validate(tmp_path, capsys):
    assert main(["validate", write(tmp_path / "two.json", TWO)]) == 0
    assert main(["validate", write(tmp_path / "bad.json", OVERLAP)]) == 1
    assert "improper intersection" in capsys.readouterr().out
    bad = dict(TWO, vertices=[["1/0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]])
    assert main(["validate", write(tmp_path / "zero.json", bad)]) == 2
    assert "zero denominator" in capsys.readouterr().err
    assert main(["validate", str(tmp_path / "missing.json")]) == 2


def test_dim_rows(tmp_path, capsys):
    a2 = tmp_path / "a2.json"
    dump_mesh(builtin("alfeld", 2), a2)
    assert main(["dim", str(a2), "--r", "1", "--d", "3", "--scheme", "alfeld"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["k,r,d,oracle,euler,formula", "2,1,3,12,12,12"]
    assert main(["dim", "facet:T2", "--r", "1", "--d", "2", "--scheme", "facet", "--format", "json"]) == 0
    (row,) = json.loads(capsys.readouterr().out)
    assert row["oracle"] == row["euler"] == row["formula"] == 9
    assert main(["dim", "T2", "--r", "5", "--d", "2", "--method", "oracle"]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "2,5,2,6,,"


def test_dim_disagreement_and_input_errors(capsys):
    assert main(["dim", "alfeld:T2", "--r", "1", "--d-range", "0:3", "--scheme", "facet"]) == 1
    assert "disagree" in capsys.readouterr().err
    assert main(["dim", "alfeld:T2", "--r", "1", "--d", "3", "--method", "formula"]) == 2
    assert main(["dim", "alfeld:T2", "--r", "1"]) == 2
    assert main(["dim", "alfeld:T2", "--r", "x", "--d", "1"]) == 2


def test_dim_parallel(capsys):
    assert main(["dim", "alfeld:T2", "--r", "0,1", "--d-range", "0:4", "--scheme", "alfeld", "--jobs", "2"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert [tuple(r.split(",")[1:3]) for r in rows] == [(str(r), str(d)) for r in (0, 1) for d in range(5)]


def test_subdivide(tmp_path, capsys):
    out = tmp_path / "a3.json"
    assert main(["subdivide", "T3", "--scheme", "alfeld", "-o", str(out)]) == 0
    assert len(load_mesh(out).cells) == 4
    side = json.loads((tmp_path / "a3.json.record.json").read_text())
    assert side["steps"][0]["new_vertices"] == [["1", "1", "1"]]
    out = tmp_path / "f2.json"
    assert main(["subdivide", "T2", "--scheme", "facet", "-o", str(out)]) == 0
    assert load_mesh(out) == builtin("facet", 2)
    out = tmp_path / "aa3.json"
    assert main(["subdivide", "T3", "--scheme", "double-alfeld", "--subset", "0", "-o", str(out)]) == 0
    assert len(load_mesh(out).cells) == 7
    assert main(["subdivide", "T2", "--scheme", "alfeld", "--point", "3,0"]) == 2
    assert "not strictly interior" in capsys.readouterr().err


def test_check_split(tmp_path, capsys):
    for aligned, expect in ((True, {1: 0, 2: 0, 3: 0}), (False, {1: 0, 2: 1, 3: 1})):
        rec = spoke_split(aligned)
        coarse, piece = tmp_path / "coarse.json", tmp_path / "piece.json"
        dump_mesh(rec.coarse, coarse)
        dump_mesh(rec.piece, piece)
        cell = mesh_to_dict(rec.coarse)["cells"].index(sorted(
            sorted(rec.coarse.vertices).index(p) for p in rec.coarse.points(rec.cell)))
        for r, code in expect.items():
            assert main(["check-split", str(coarse), "--cell", str(cell), str(piece), "--r", str(r)]) == code
            text = capsys.readouterr().out
            assert ("witness face" in text) == bool(code)


def test_homology_and_basis(capsys):
    assert main(["homology", "alfeld:T2", "--r", "1", "--d", "3"]) == 0
    assert capsys.readouterr().out.splitlines() == ["k,r,d,H0,H1,H2", "2,1,3,0,0,12"]
    assert main(["basis", "alfeld:T2", "--r", "1", "--d", "3", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["dimension"] == 12


def test_verify_subset_and_injection(capsys):
    assert main(["verify", "--k", "2", "--criteria", "2,4"]) == 0
    assert main(["verify", "--k", "2", "--criteria", "1", "--perturb", "A_formula", "--format", "json"]) == 1
    capsys.readouterr()
    assert main(["verify", "--k", "2", "--criteria", "2", "--perturb", "A_formula", "--format", "json"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert not data["passed"] and data["criteria"][0]["name"] == "spot values"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "splitsplines", "dim", "T2", "--r", "1", "--d", "2",
                           "--method", "oracle"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[1] == "2,1,2,6,,"
