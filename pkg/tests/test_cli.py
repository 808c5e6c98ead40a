import json
import subprocess
import sys
from pathlib import Path

import pytest

from wplequiv.cli import SCHEMA, main, run

GOLDEN = Path(__file__).parent / "golden"

PHI_2222 = {
    "hom": {
        "domain": [2, 2, 2, 2],
        "codomain": [2, 2, 2, 2],
        "matrix": [[0, 0, 0, 0, 1], [0, 0, 0, 0, 1], [1, 1, 0, 0, 0], [0, 0, 1, 1, 0]],
    },
    "images": [
        "-(2+sqrt(3))*z1^2+z2^2",
        "(2+sqrt(3))*z1^2+z2^2",
        "2*sqrt(2+sqrt(3))*z1*z2",
        "sqrt(-2)*z3*z4",
    ],
    "mu": ["7+4*sqrt(3)"],
}


def ok(*argv):
    res = run(list(argv))
    assert res.exit_code == 0, res.diagnostics
    doc = json.loads(res.render())
    assert doc["schema"] == SCHEMA
    return doc["result"]


def test_normal_form():
    out = ok("normal-form", "-p", "2,3,4", "--coeffs=-1,0,0")
    assert out["residues"] == [1, 0, 0] and out["shift"] == -1


def test_torsion_and_classify():
    assert len(ok("torsion", "-p", "4,6,7,10")["elements"]) == 4
    assert ok("classify", "-p", "6,3,2")["type"] == "tubular"
    assert ok("classify", "-p", "2,3,5")["type"] == "domestic"


def test_subgroups():
    out = ok("subgroups", "-p", "2,3,4")
    assert [s["kind"] for s in out["subgroups"]] == ["trivial", "cyclic"]


def test_derive_and_check_roundtrip():
    out = ok("derive", "-p", "2,3,4", "--kernel", "cyclic:1,3,2")
    assert out["kernel"] == "x1-2x3" and sorted(out["codomain"]) == [2, 3, 3]
    chk = ok("check-admissible", "--hom", json.dumps(out["hom"]))
    assert chk["structural"] and chk["window"] and chk["agree"]


def test_check_admissible_rejects_bad_hom():
    bad = {"domain": [2, 2], "codomain": [2, 2], "matrix": [[1, 0, 0], [1, 0, 0]]}
    chk = ok("check-admissible", "--hom", json.dumps(bad))
    assert not chk["structural"] and not chk["window"]


def test_enumerate():
    out = ok("enumerate", "-p", "2,3,4")
    assert out["nontrivial"] == 1
    assert [r["codomain_multiset"] for r in out["records"] if r["kernel"] != "0"] == [[2, 3, 3]]


def test_compose_and_decompose():
    dec = ok("decompose", "-p", "2,2,4", "--kernel", "klein:1,2,3")
    assert dec["middle"] == [4, 4]
    comp = ok("compose", "--hom1", json.dumps(dec["first"]["hom"]), "--hom2", json.dumps(dec["second"]["hom"]))
    assert comp["admissible"] and comp["kernel_orders_multiply"]


def test_check_phi(tmp_path):
    path = tmp_path / "phi.json"
    path.write_text(json.dumps(PHI_2222), encoding="utf-8")
    out = ok("check-phi", "--phi", str(path), "--lambda", "3")
    assert out == {"compatible": True, "relations": True, "surjective_small_degree": True, "mode": "exact"}
    wrong = dict(PHI_2222, images=PHI_2222["images"][:2] + ["sqrt(2+sqrt(3))*z1*z2", PHI_2222["images"][3]])
    out = ok("check-phi", "--phi", json.dumps(wrong), "--lambda", "3")
    assert out["compatible"] and not out["relations"]


def test_tubular_commands():
    out = ok("tubular", "gamma", "--lambda=-1")
    assert out["orbit"] == ["-1", "-1", "1/2", "1/2", "2", "2"]
    out = ok("tubular", "edge", "--src", "6,3,2", "--kernel", "cyclic:1,2,3", "--dst", "2,2,2,2;(1+sqrt(-3))/2")
    assert out["edge"] is True and out["kernel"] == "2x1-x2"
    out = ok("tubular", "edge", "--src", "4,4,2", "--kernel", "cyclic:1,2,2", "--dst", "2,2,2,2;3")
    assert out["edge"] is False


@pytest.mark.parametrize(
    "name, depth",
    [("domestic", 2), ("tubular_anchors", 1), ("tubular_chain", 2)],
)
def test_graph_matches_golden(name, depth):
    res = run(["graph", "--seeds", str(GOLDEN / f"{name}.seeds"), "--format", "dot", "--param-depth", str(depth)])
    assert res.exit_code == 0
    assert res.render() == (GOLDEN / f"{name}.dot").read_text(encoding="utf-8")


def test_graph_json(tmp_path):
    seeds = tmp_path / "s.txt"
    seeds.write_text("# domestic\n2,3,4\n", encoding="utf-8")
    out = ok("graph", "--seeds", str(seeds))
    assert [n["id"] for n in out["nodes"]] == ["w4_3_2", "w3_3_2", "w2_2_2", "w2_2", "w"]


def test_output_is_byte_stable():
    argv = ["enumerate", "-p", "4,6,7,10"]
    assert run(argv).render() == run(argv).render()


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["nonsense"],
        ["classify", "-p", "2,3,x"],
        ["check-admissible", "--hom", "{not json"],
        ["check-admissible", "--hom", '{"domain": [2]}'],
        ["graph", "--seeds", "/nonexistent/seeds.txt"],
        ["derive", "-p", "2,3,4", "--kernel", "cyclic:1"],
    ],
)
def test_usage_errors_exit_2(argv):
    res = run(argv)
    assert res.exit_code == 2 and res.render() == ""
    assert res.diagnostics[0].startswith("usage:")


@pytest.mark.parametrize(
    "argv, error",
    [
        (["derive", "-p", "2,2", "--kernel", "x1"], "InfiniteSubgroup"),
        (["tubular", "gamma", "--lambda=1"], "DegenerateParameter"),
        (["tubular", "edge", "--src", "2,3,4", "--kernel", "0", "--dst", "3,3,3"], "TubularError"),
        (["decompose", "-p", "2,2,4", "--kernel", "0"], "NoSplit"),
    ],
)
def test_domain_errors_exit_1(argv, error):
    res = run(argv)
    assert res.exit_code == 1
    assert res.diagnostics[0].startswith(error + ":")


def test_main_writes_streams(capsys):
    assert main(["classify", "-p", "2,3,5"]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["result"]["type"] == "domestic" and captured.err == ""
    assert main(["tubular", "gamma", "--lambda=0"]) == 1
    captured = capsys.readouterr()
    assert captured.out == "" and "DegenerateParameter" in captured.err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "wplequiv", "classify", "-p", "4,6,7,10"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["type"] == "wild"
