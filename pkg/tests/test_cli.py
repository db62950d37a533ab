import json

import pytest

from orbitfold.cli import dumps, main, run


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_fold(capsys):
    code, doc = _run(capsys, "fold", "--algebra", "A3", "--perm", "2,1,0")
    assert code == 0 and doc["fold"]["folded_cartan"] == [[2, -2], [-1, 2]]
    assert doc["provenance"]["inputs"]["perm"] == "2,1,0"


def test_twine_verify(capsys):
    code, doc = _run(capsys, "twine", "--algebra", "A2", "--perm", "1,0", "--hw", "1,1", "--depth", "4", "--verify-oracle")
    assert code == 0 and doc["oracle_diff"] == []


def test_coset(capsys):
    code, doc = _run(capsys, "coset", "--h", "A1", "--levels", "1,1", "--qorder", "4", "--resolve", "--verlinde")
    assert code == 0
    assert sorted(f["conformal_weight"] for f in doc["fields"]) == ["0", "1/16", "1/2"]
    for f in doc["fields"]:
        assert f["character"]["truncation_order"] == 4


def test_classify_validate(capsys):
    code, doc = _run(capsys, "classify", "--algebra", "[[2,-3],[-3,2]]")
    assert code == 0 and doc["kind"] == "indefinite" and doc["hyperbolic"]
    code, doc = _run(capsys, "validate", "--algebra", "[[2,-1],[0,2]]")
    assert code == 2


def test_usage_errors(capsys):
    assert main(["fold", "--algebra", "A3"]) == 2
    assert main(["nonsense"]) == 2
    assert main(["char", "--algebra", "A2", "--hw", "1,x"]) == 2
    assert main(["char", "--algebra", "A2", "--hw", "1,1", "--depth", "-1"]) == 2
    assert main(["fold", "--algebra", "A1aff", "--perm", "1,0"]) == 2


def test_invariant_failure_exit_code(capsys):
    code, doc = _run(capsys, "smatrix", "--algebra", "A1aff", "--level", "2", "--tol", "1e-18")
    assert code == 1
    assert doc["checks"]["tolerance_induced"]


def test_round_trip(tmp_path, capsys):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    assert main(["fold", "--algebra", "C4aff", "--perm", "4,3,2,1,0", "--out", str(first)]) == 0
    assert main(["fold", "--algebra", str(first), "--out", str(second)]) == 0
    a, b = json.loads(first.read_text()), json.loads(second.read_text())
    a.pop("provenance"), b.pop("provenance")
    assert dumps(a) == dumps(b)
    # the folded block is itself a valid algebra
    third = tmp_path / "c.json"
    third.write_text(json.dumps(a["folded"]))
    code, doc = _run(capsys, "classify", "--algebra", str(third))
    assert code == 0 and doc["algebra"]["norms"] == a["folded"]["norms"]


def test_char_affine(capsys):
    code, doc = _run(capsys, "char", "--algebra", "A1aff", "--hw", "1,0", "--max-grade", "5", "--qorder", "6")
    assert code == 0 and doc["virasoro"]["coefficients"] == [1, 3, 4, 7, 13, 19]


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("ORBITFOLD_THREADS", "2")
    code, doc = _run(capsys, "coset", "--h", "A1", "--levels", "1,2", "--qorder", "3")
    assert code == 0 and len(doc["branching"]) == len(doc["orbits"])
