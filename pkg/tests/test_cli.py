import json
import subprocess
import sys

import jsonschema
import pytest

from ecgraph import cli
from ecgraph.report import REPORT_SCHEMA
from ecgraph.syntax import parse_graph
from helpers import FIXTURES, GRAPH_FILES

F = str(FIXTURES)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_counterexample(capsys):
    code, out, _ = run(capsys, "analyze", f"{F}/counterexample.ecg", "--json")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT_SCHEMA)
    assert list(rep) == ["graph", "coloring_number", "row_finite", "simplicity_necessary",
                         "exactness", "nuclearity", "k_theory"]
    assert rep["coloring_number"] == 2
    assert rep["exactness"]["verdict"] == "unknown"
    assert rep["simplicity_necessary"]["pass"] is False


def test_analyze_bicolored_loops(capsys):
    code, out, _ = run(capsys, "analyze", f"{F}/two_loops_bicolor.ecg", "--json")
    rep = json.loads(out)
    assert code == 0
    assert rep["exactness"]["verdict"] == "not_exact"
    assert rep["exactness"]["witness"]["vertex"] == "v"


def test_analyze_human(capsys):
    code, out, _ = run(capsys, "analyze", f"{F}/l2.ecg")
    assert code == 0
    assert "necessary conditions hold (not sufficient)" in out
    assert "row finite: yes (v@1=2)" in out
    assert "\033[" not in out


def test_malformed_input(capsys, tmp_path):
    bad = tmp_path / "bad.ecg"
    bad.write_text("graph G {\n  vertex v;\n  edge a: v -> w;\n}\n")
    code, out, err = run(capsys, "analyze", str(bad))
    assert code == 2 and out == ""
    assert f"{bad}:3:16: unknown vertex w" in err
    code, _, err = run(capsys, "ktheory", str(tmp_path / "missing.ecg"))
    assert code == 2 and "missing.ecg" in err


def test_analyze_directory_batch(capsys):
    code, out, _ = run(capsys, "analyze", F, "--json")
    assert code == 0
    reps = json.loads(out)
    assert [r["graph"] for r in reps] == [parse_graph(p.read_text()).name for p in GRAPH_FILES]
    for r in reps:
        jsonschema.validate(r, REPORT_SCHEMA)


def test_batch_continues_past_bad_files(capsys, tmp_path):
    (tmp_path / "a.ecg").write_text("graph A { vertex v; }")
    (tmp_path / "b.ecg").write_text("graph B { vertex")
    (tmp_path / "c.ecg").write_text("graph C { vertex v; edge e: v -> v; }")
    code, out, err = run(capsys, "analyze", str(tmp_path), "--json")
    assert code == 2
    assert [r["graph"] for r in json.loads(out)] == ["A", "C"]
    assert "b.ecg" in err


@pytest.mark.parametrize("path", GRAPH_FILES, ids=lambda p: p.stem)
def test_exit_codes_on_corpus(capsys, path):
    for sub in ("analyze", "ktheory", "color-number"):
        code, out, _ = run(capsys, sub, str(path), "--json")
        assert code == 0
        json.loads(out)


@pytest.mark.parametrize(
    "name, k0, k1",
    [("o2_om", {"rank": 0, "torsion": []}, {"rank": 1, "torsion": []}),
     ("m3_product", {"rank": 1, "torsion": []}, {"rank": 0, "torsion": []}),
     ("l2", {"rank": 0, "torsion": []}, {"rank": 0, "torsion": []})],
)
def test_ktheory(capsys, name, k0, k1):
    code, out, _ = run(capsys, "ktheory", f"{F}/{name}.ecg", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["k0"] == k0 and rep["k1"] == k1


def test_ktheory_human(capsys):
    _, out, _ = run(capsys, "ktheory", f"{F}/o2_om.ecg")
    assert out == "graph O2O4\n  K0: 0\n  K1: Z\n    [p(v)] = ()\n"


def test_verify_phi_psi(capsys):
    code, out, _ = run(capsys, "verify-hom", f"{F}/o2_o3.ecg", f"{F}/o2_o2.ecg",
                       "--map", f"{F}/phi_m3.hom", "--inverse", f"{F}/psi_m3.hom")
    assert code == 0
    assert out.rstrip().endswith("all relations hold")
    code, out, _ = run(capsys, "verify-hom", f"{F}/o2_o3.ecg", f"{F}/o2_o2.ecg",
                       "--map", f"{F}/phi_m3.hom", "--inverse", f"{F}/psi_m3.hom", "--json")
    rep = json.loads(out)
    assert rep["holds"] and rep["inverse"]["holds"] and rep["mutually_inverse"]["holds"]


def test_verify_tau(capsys):
    code, out, _ = run(capsys, "verify-hom", f"{F}/counterexample.ecg", f"{F}/h.ecg",
                       "--map", f"{F}/tau.hom")
    assert code == 1
    assert "image of S(x2) reduces to 0" in out
    assert "FAILS    source:x2" in out


def test_verify_missing_assignment(capsys, tmp_path):
    m = tmp_path / "m.hom"
    m.write_text("hom id: L2 -> L2 { vertex v => p(v); edge a => S(a); }")
    code, _, err = run(capsys, "verify-hom", f"{F}/l2.ecg", f"{F}/l2.ecg", "--map", str(m))
    assert code == 2 and "missing assignment for edge b" in err


def test_free_product(capsys):
    code, out, _ = run(capsys, "free-product", f"{F}/m3_left.ecg", f"{F}/m3_right.ecg",
                       "--share", "v1,v2,v3")
    g = parse_graph(out)
    assert code == 0 and len(g.vertices) == 3 and g.colors == (1, 2)
    code, out, _ = run(capsys, "free-product", f"{F}/l3.ecg", "--share", "v")
    assert code == 0 and parse_graph(out) == parse_graph((FIXTURES / "l3.ecg").read_text())


def test_free_product_collision(capsys):
    code, _, err = run(capsys, "free-product", f"{F}/l2.ecg", f"{F}/l2.ecg", "--share", "v")
    assert code == 2 and "edge id collision" in err


def test_color_number(capsys):
    assert run(capsys, "color-number", f"{F}/gn3.ecg")[1] == "3\n"


def test_styling(capsys, monkeypatch):
    monkeypatch.setattr(sys.stdout, "isatty", lambda: True)
    monkeypatch.delenv("ECG_COLOR", raising=False)
    _, out, _ = run(capsys, "analyze", f"{F}/l2.ecg")
    assert "\033[32m" in out
    monkeypatch.setenv("ECG_COLOR", "0")
    _, out, _ = run(capsys, "analyze", f"{F}/l2.ecg")
    assert "\033[" not in out


def test_internal_breach_exit_code(capsys, monkeypatch):
    def boom(*a, **k):
        raise AssertionError("fold produced torsion in a kernel")

    monkeypatch.setattr(cli, "analysis_report", boom)
    code, _, err = run(capsys, "analyze", f"{F}/l2.ecg")
    assert code == 3 and "internal invariant breach" in err


def test_byte_identical_runs():
    cmd = [sys.executable, "-m", "ecgraph", "analyze", F, "--json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True, env={"LC_ALL": "C", "PATH": ""}).stdout
    assert a == b and a
