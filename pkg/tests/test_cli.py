import json

import pytest

from gradedsusy.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gamma_verify(capsys):
    code, out, _ = _run(capsys, "gamma", "--m", "3", "--verify")
    assert code == 0 and json.loads(out)["pairs_checked"] == 21


def test_gamma_bad_index(capsys):
    code, _, err = _run(capsys, "gamma", "--m", "2", "--j", "9")
    assert code == 2 and "out of range" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
    assert _run(capsys, "spectrum", "--kind", "cl4", "--beta", "1")[0] == 2
    assert _run(capsys, "spectrum", "--kind", "cl4", "--beta", "0.5")[0] == 2
    assert _run(capsys, "verify-all")[0] == 2


def test_model_file_roundtrip(tmp_path, capsys):
    path = tmp_path / "m.json"
    assert _run(capsys, "model", "build", "--kind", "cl4", "--json", str(path))[0] == 0
    code, out, _ = _run(capsys, "verify", "jacobi", "--model", str(path))
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass"
    assert [c["name"] for c in rep["checks"]] == ["closure", "jacobi"]
    assert _run(capsys, "verify", "gamma", "--model", str(path))[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert _run(capsys, "verify", "closure", "--model", str(bad))[0] == 2


def test_verify_all_cl2n_reducible(capsys):
    code, out, _ = _run(capsys, "verify-all", "--kind", "cl2n")
    rep = json.loads(out)
    assert code == 0
    graph = next(c for c in rep["checks"] if c["name"] == "coupling graph")
    assert graph["reducible"] and len(graph["components"]) == 2


def test_verify_all_deterministic_across_threads(capsys):
    a = _run(capsys, "verify-all", "--kind", "cl4")[1]
    b = _run(capsys, "verify-all", "--kind", "cl4", "--threads", "2")[1]
    assert a == b
    rep = json.loads(a)
    assert rep["model"]["generators"] == 20 and rep["status"] == "pass"


def test_verify_hermiticity_n4_fails(capsys):
    assert _run(capsys, "verify", "hermiticity", "--kind", "cl4", "--n", "4")[0] == 1
    assert _run(capsys, "verify", "hermiticity", "--kind", "cl4", "--n", "4", "--phase", "pairwise")[0] == 0


def test_structure_constants(capsys):
    code, out, _ = _run(capsys, "structure-constants", "--kind", "cl4", "--format", "text")
    assert code == 0 and "{Q_001, Q_001} = 2 H_000" in out


def test_spectrum_json(tmp_path, capsys):
    path = tmp_path / "s.json"
    assert _run(capsys, "spectrum", "--kind", "cl4", "--beta", "2", "--levels", "2", "--json", str(path))[0] == 0
    rep = json.loads(path.read_text())
    assert rep["beta"] == "2" and rep["branch"] == "+"
    assert [(l["energy"], l["degeneracy"]) for l in rep["levels"]] == [("5/2", 4), ("7/2", 4), ("9/2", 4)]
    assert rep["rejected_branch"]["energies"] == ["-3/2"]


def test_scqm_commands(capsys):
    code, out, _ = _run(capsys, "scqm", "verify-oscillator", "--kind", "cl4")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, out, _ = _run(capsys, "scqm", "build", "--kind", "cl4")
    assert code == 0 and len(json.loads(out)["creation"]) == 4


def test_env_thread_fallback(monkeypatch, capsys):
    monkeypatch.setenv("GRADEDSUSY_THREADS", "2")
    code, out, _ = _run(capsys, "verify", "closure", "--kind", "cl4")
    assert code == 0
