import json
import shutil
import subprocess
import sys

import pytest

from vinberg_lab.analysis import Budget, Status, classify_lattice
from vinberg_lab.cli import golden_dir, main
from vinberg_lab.enumeration import PRINTED_MATRICES
from conftest import diag


def write(tmp_path, name, gram, label=None):
    doc = {"gram": [list(r) for r in gram]}
    if label:
        doc["name"] = label
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def dgram(*d):
    return diag(*d).gram


def test_invariants(tmp_path, capsys):
    code, doc = run_cli(capsys, "invariants", write(tmp_path, "l2.json", dgram(-7, 1, 1, 1)))
    assert code == 0
    assert doc["discriminant"] == -7 and doc["invariant_factors"] == [1, 1, 1, 7]
    assert doc["maximal"] and doc["schema_version"] == 1
    g24 = next(r[2] for r in PRINTED_MATRICES if r[0] == "G24")
    code, doc = run_cli(capsys, "invariants", write(tmp_path, "g24.json", g24))
    assert doc["invariant_factors"] == [1, 1, 6, 12] and len(doc["maximal_extensions"]) == 1
    assert doc["maximal_extensions"][0]["discriminant"] == -18
    code, doc = run_cli(capsys, "invariants", write(tmp_path, "id.json", dgram(1, 1, 1, 1)))
    assert doc["unimodular"] and doc["maximal"]


@pytest.mark.parametrize("text", ["{", '{"gram": [[1, 2], [3, 4]]}', '{"rows": []}', '{"gram": [[0]]}'])
def test_malformed_input(tmp_path, capsys, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    for cmd in ("invariants", "anisotropy", "vinberg"):
        assert main([cmd, str(path)]) == 2
    assert main(["invariants", str(tmp_path / "missing.json")]) == 2
    assert main(["frobnicate"]) == 2


def test_anisotropy(tmp_path, capsys):
    code, doc = run_cli(capsys, "anisotropy", write(tmp_path, "l1.json", dgram(-15, 1, 1, 1)))
    assert code == 0 and doc["global"] == "anisotropic"
    assert set(doc["places"]) == {"2", "3", "5", "inf"}
    code, doc = run_cli(capsys, "anisotropy", write(tmp_path, "l10.json", dgram(-1, 3, 3, 2)))
    assert doc["global"] == "anisotropic"
    code, doc = run_cli(capsys, "anisotropy", write(tmp_path, "iso.json", dgram(-1, 1, 1, 1)))
    assert doc["global"] == "isotropic"
    assert main(["anisotropy", write(tmp_path, "r3.json", dgram(-1, 1, 1))]) == 3


def test_vinberg_and_diagram(tmp_path, capsys):
    src = write(tmp_path, "l5.json", dgram(-3, 5, 1, 1), "L(5)")
    dot = tmp_path / "l5.dot"
    code, doc = run_cli(capsys, "vinberg", src, "--basic-point", "1,0,0,0", "--dot", str(dot))
    assert code == 0
    assert len(doc["roots"]) == 7 and doc["status"] == "FINITE_VOLUME"
    assert doc["verdict"] == "REFLECTIVE_NOT_ONE_TWO" and doc["bad_reflections_finite"] is False
    assert dot.read_text() == doc["dot"]
    transcript = tmp_path / "l5.transcript.json"
    transcript.write_text(json.dumps(doc))
    comb = tmp_path / "comb.json"
    code = main(["diagram", str(transcript), "--dot", str(tmp_path / "again.dot"), "--combinatorics", str(comb)])
    assert code == 0
    assert (tmp_path / "again.dot").read_text() == doc["dot"]
    assert len(json.loads(comb.read_text())["vertices"]) == 10
    bad = tmp_path / "bad.transcript.json"
    bad.write_text('{"lattice": [[1]]}')
    assert main(["diagram", str(bad)]) == 2


def test_vinberg_statuses(tmp_path, capsys):
    code, doc = run_cli(capsys, "vinberg", write(tmp_path, "l2.json", dgram(-7, 1, 1, 1)), "--norms", "1,2")
    assert code == 0 and doc["verdict"] == "ONE_TWO_REFLECTIVE"
    code, doc = run_cli(capsys, "vinberg", write(tmp_path, "l3.json", dgram(-23, 1, 1, 1)))
    assert code == 4 and doc["verdict"] == "INCONCLUSIVE" and doc["status"] == "BUDGET_EXHAUSTED"
    assert main(["vinberg", write(tmp_path, "def.json", dgram(1, 1, 1, 1))]) == 3
    assert main(["vinberg", write(tmp_path, "r3.json", dgram(-1, 1, 1))]) == 3


def test_classify_enumerate_is_deterministic(tmp_path, capsys):
    code, first = run_cli(capsys, "classify", "--stage", "enumerate")
    code2, second = run_cli(capsys, "classify", "--stage", "enumerate")
    assert code == code2 == 0 and first == second
    assert first["schema_version"] == 1 and first["stage"] == "enumerate"


def test_classify_check_passes_and_detects_drift(tmp_path, capsys):
    assert main(["classify", "--stage", "enumerate", "--check", "--out", str(tmp_path / "o")]) == 0
    capsys.readouterr()
    golden = tmp_path / "golden"
    shutil.copytree(golden_dir(), golden)
    doc = json.loads((golden / "enumerate.json").read_text())
    doc["rows"][0]["discriminant"] = 0
    (golden / "enumerate.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    assert main(["classify", "--stage", "enumerate", "--check", "--golden", str(golden)]) == 1


def test_classify_full_against_golden(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("VINBERG_LAB_THREADS", "2")
    out = tmp_path / "full"
    assert main(["classify", "--stage", "full", "--out", str(out), "--check"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["one_two_reflective"] == ["L(1)", "L(2)"]
    assert summary["reflective_not_one_two"] == ["L(5)", "L(10)"]
    assert "A. Mark" in " ".join(summary["inconclusive"]["L(3)"])
    for name in ("L(5)", "L(10)"):
        assert (out / f"{name}.dot").read_text() == (golden_dir() / f"{name}.dot").read_text()


def test_report_status_invariants():
    for d in [(-7, 1, 1, 1), (-15, 1, 1, 1), (-3, 5, 1, 1), (-1, 3, 3, 2), (-23, 1, 1, 1)]:
        rep = classify_lattice(diag(*d), Budget()).to_dict()
        last = rep["runs"][-1]
        if rep["status"] == Status.ONE_TWO_REFLECTIVE.value:
            assert last["finite_volume"]
            assert set(last["norms"]) <= {1, 2} or last["bad_reflections_finite"]
        elif rep["status"] == Status.REFLECTIVE_NOT_ONE_TWO.value:
            assert last["finite_volume"] and last["bad_reflections_finite"] is False
            assert not set(last["norms"]) <= {1, 2}
        else:
            assert all(r["status"] == "BUDGET_EXHAUSTED" for r in rep["runs"])


def test_console_script(tmp_path):
    exe = shutil.which("vinberg-lab")
    cmd = [exe] if exe else [sys.executable, "-m", "vinberg_lab.cli"]
    res = subprocess.run(cmd + ["anisotropy", write(tmp_path, "l2.json", dgram(-7, 1, 1, 1))],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["global"] == "anisotropic"
