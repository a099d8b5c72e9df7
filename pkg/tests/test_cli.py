import json
import subprocess
import sys

import pytest

from hecke_tqft.cli import main
from hecke_tqft.corpus import CORPUS, a2_family, g2_family, run_corpus, symmetric_completion
from hecke_tqft.laurent import QView, parse_poly


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def test_invariant_examples(capsys):
    code, out, _ = run(capsys, "invariant", "--type", "A2", "--genus", "0", "--punctures", "3", "--method", "all")
    assert code == 0
    assert out == "q^3 + 2*q^2 + 10*q + 10 + 10*q^-1 + 2*q^-2 + q^-3"
    assert run(capsys, "invariant", "--type", "A1", "--genus", "1", "--punctures", "1")[1] == "q + 2 + q^-1"
    code, out, _ = run(capsys, "invariant", "--type", "A3", "--punctures", "3", "--method", "schur")
    assert out.startswith("q^6 + 3*q^5 + 5*q^4 + 33*q^3 + 67*q^2 + 108*q + 142 + ")


def test_invariant_var_and_json(capsys):
    _, out, _ = run(capsys, "invariant", "--type", "A1", "--punctures", "3", "--var", "v")
    assert out == "v^2 + 2 + v^-2"
    _, out, _ = run(capsys, "invariant", "--type", "A1", "--punctures", "3", "--format", "json")
    data = json.loads(out)
    assert data["value"] == "q + 2 + q^-1"
    assert QView.from_json(data["poly"]) == parse_poly("q + 2 + q^-1", QView)


def test_surface_file(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"type": "A2", "genus": 0, "punctures": 1,
                                "boundaries": [{"labels": [{"basis": "kl", "word": "12"}]}]}))
    code, out, _ = run(capsys, "invariant", "--surface", str(path), "--method", "all")
    assert code == 0 and out == "q + 4 + q^-1"


def test_output_is_deterministic(capsys):
    argv = ("invariant", "--type", "B2", "--genus", "1", "--punctures", "1", "--method", "all", "--format", "json")
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_formal_sphere_via_cli(capsys):
    assert run(capsys, "invariant", "--type", "B2", "--punctures", "2")[1] == "8"
    assert run(capsys, "invariant", "--type", "B2", "--punctures", "2", "--method", "polygon")[0] == 1


def test_exit_codes(capsys):
    assert run(capsys, "structure-constants", "--type", "A1", "--x", "7", "--y", "1", "--z", "1")[0] == 1
    assert run(capsys, "invariant", "--type", "E8", "--punctures", "3")[0] == 2
    assert run(capsys, "invariant", "--type", "X5", "--punctures", "3")[0] == 2
    assert run(capsys, "invariant", "--surface", "/nonexistent.json")[0] == 1


def test_disagreement_exit_code(monkeypatch, capsys):
    import hecke_tqft.surfaces as surfaces
    from hecke_tqft.laurent import LaurentPoly

    real = surfaces.invariant_schur
    monkeypatch.setattr(surfaces, "invariant_schur", lambda *a, **k: real(*a, **k) + LaurentPoly(1))
    assert run(capsys, "invariant", "--type", "A1", "--punctures", "3", "--method", "all")[0] == 3


def test_schur_tables(capsys):
    _, out, _ = run(capsys, "schur", "--type", "A1")
    rows = [line.split("\t") for line in out.splitlines()]
    assert rows[0][:3] == ["(2)", "dim=1", "q + 1"]
    assert rows[1][:3] == ["(1,1)", "dim=1", "1 + q^-1"]
    _, out, _ = run(capsys, "schur", "--type", "I2(5)", "--format", "json")
    assert any(not r["positive"] for r in json.loads(out))
    closed = run(capsys, "schur", "--type", "B2", "--format", "json")[1]
    generic = run(capsys, "schur", "--type", "B2", "--method", "generic", "--format", "json")[1]
    assert json.loads(closed) == json.loads(generic)


def test_structure_constants(capsys):
    assert run(capsys, "structure-constants", "--type", "A1", "--x", "1", "--y", "1", "--z", "1")[1] == "-v + v^-1"
    assert run(capsys, "structure-constants", "--type", "A1", "--x", "e", "--y", "e", "--z", "1")[1] == "0"
    assert run(capsys, "structure-constants", "--type", "A2", "--x", "12", "--y", "21", "--z", "e")[1] == "1"
    assert run(capsys, "structure-constants", "--type", "A2", "--x", "12", "--y", "12", "--z", "e")[1] == "0"


def test_kl_command(capsys):
    _, out, _ = run(capsys, "kl", "--type", "A1", "--w", "1")
    assert out.splitlines() == ["e\tv", "1\t1"]
    assert run(capsys, "kl", "--type", "A3", "--w", "2132", "--z", "e")[1] == "v^4 + v^2"
    data = json.loads(run(capsys, "kl", "--type", "A2", "--w", "121", "--format", "json")[1])
    assert data["basis"] == "standard" and len(data["terms"]) == 6


def test_verify_corpus(capsys):
    code, out, _ = run(capsys, "verify", "--paper-corpus")
    assert code == 0
    assert out.splitlines()[-1] == f"{len(CORPUS)}/{len(CORPUS)} entries passed"


def test_verify_reports_corpus_failure(monkeypatch, capsys):
    import dataclasses

    import hecke_tqft.corpus as corpus

    broken = dataclasses.replace(corpus.CORPUS[0], expected="q + 3 + q^-1")
    monkeypatch.setattr(corpus, "CORPUS", (broken,))
    monkeypatch.setattr(corpus.run_corpus, "__defaults__", ((broken,),))
    assert run(capsys, "verify", "--paper-corpus")[0] == 4


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hecke_tqft", "invariant", "--type", "A1", "--punctures", "4"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "q^2 + 2*q + 2 + 2*q^-1 + q^-2"


def test_corpus_entries_are_tagged_and_pass():
    for entry in CORPUS:
        assert entry.note
    assert all(r.passed for r in run_corpus())


def test_symmetric_completion():
    assert symmetric_completion(parse_poly("q^2 + 3*q + 5", QView)) == parse_poly("q^2 + 3*q + 5 + 3*q^-1 + q^-2", QView)
    with pytest.raises(ValueError):
        symmetric_completion(parse_poly("q^2 + 3*q", QView))


def test_closed_family_formulas_at_small_m():
    assert a2_family(0, 3) == parse_poly("q^3 + 2*q^2 + 10*q + 10 + 10*q^-1 + 2*q^-2 + q^-3", QView)
    lead = {e: c for e, c in g2_family(0, 3).terms() if e >= 0}
    assert lead == {6: 1, 5: 2, 4: 2, 3: 2, 2: 2, 1: 72, 0: -18}
