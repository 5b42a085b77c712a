import json
import os
import subprocess
import sys

import pytest

from treebraid.cli import run
from treebraid.fixtures import H, Y3

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture
def y3_file(tmp_path):
    p = tmp_path / "y3.tree"
    p.write_text(Y3 + "\n")
    return str(p)


@pytest.fixture
def h_file(tmp_path):
    p = tmp_path / "h.tree"
    p.write_text(H + "\n")
    return str(p)


def _json(capsys, argv, code=0):
    assert run(argv) == code
    return json.loads(capsys.readouterr().out)


def test_homology_autosubdivides(capsys, h_file):
    assert _json(capsys, ["homology", "--tree", h_file, "--n", "5"])["betti"] == [1, 20, 5]


def test_no_subdivide_fails(capsys, h_file):
    assert run(["homology", "--tree", h_file, "--n", "5", "--no-subdivide"]) == 1


def test_subdivide(capsys, h_file):
    out = _json(capsys, ["subdivide", "--tree", h_file, "--n", "5"])
    assert out["vertices"] == 21


def test_classify(capsys, y3_file):
    out = _json(capsys, ["classify", "--tree", y3_file, "--n", "3", "--cell", "{v:*, v:l1, e:c>r1}"])
    assert out["kind"] == "critical"
    assert run(["classify", "--tree", y3_file, "--n", "3", "--cell", "{v:*, e:c>r1}"]) == 1


def test_generators(capsys, y3_file):
    out = _json(capsys, ["generators", "--tree", y3_file, "--n", "3", "--critical-only"])
    assert [g["name"] for g in out["generators"]] == [
        "[ec>r1 | C*:0, Cl1:1, Cr2:1]", "[ec>r1 | C*:0, Cl1:2, Cr2:0]", "[ec>r1 | C*:1, Cl1:1, Cr2:0]"]


def test_product_signs(capsys, h_file):
    base = ["product", "--tree", h_file, "--n", "5"]
    a = _json(capsys, base + ["(A,0,1,~4)", "(B,3,1,~1)"])
    b = _json(capsys, base + ["(B,3,1,~1)", "(A,0,1,~4)"])
    assert [t["coef"] for t in a["terms"]] == [1]
    assert [t["coef"] for t in b["terms"]] == [-1]
    assert a["upper_bound"] == a["terms"][0]["picture"]
    assert _json(capsys, base + ["(A,0,1,~4)", "(A,0,1,~4)"])["terms"] == []


def test_verify_and_conjecture(capsys, y3_file):
    rep = _json(capsys, ["verify", "--tree", y3_file, "--n", "3", "--samples", "10"])
    assert rep["ok"]
    assert _json(capsys, ["conjecture", "--tree", y3_file, "--n", "3"])["dims"] == [1, 3]


def test_presentation(capsys, y3_file):
    out = _json(capsys, ["presentation", "--tree", y3_file, "--n", "3"])
    assert out["quotient_ranks"] == [1, 3, 0, 0]


def test_usage_errors(capsys, y3_file, tmp_path):
    assert run(["frobnicate", "--tree", y3_file, "--n", "3"]) == 1
    assert "tree grammar" in capsys.readouterr().err
    assert run(["stats", "--tree", str(tmp_path / "missing.tree"), "--n", "3"]) == 1
    assert run(["stats", "--tree", y3_file, "--n", "0"]) == 1
    bad = tmp_path / "bad.tree"
    bad.write_text("*(a,")
    assert run(["stats", "--tree", str(bad), "--n", "2"]) == 1
    assert run(["product", "--tree", y3_file, "--n", "3", "[nonsense]"]) == 1


def test_json_is_deterministic(h_file):
    cmd = [sys.executable, "-m", "treebraid.cli", "product", "--tree", h_file, "--n", "5",
           "(A,0,1,~4)", "(B,2,1,~2)"]
    outs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1] and outs[0]


def test_shipped_trees_parse(capsys):
    for name in ("y3", "h", "caterpillar", "path4", "fork28"):
        assert run(["stats", "--tree", os.path.join(ROOT, "trees", f"{name}.tree"), "--n", "2"]) == 0
    capsys.readouterr()
