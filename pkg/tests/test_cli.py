import json

import pytest

from intersub import fileio as io
from intersub.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def exported(tmp_path, capsys):
    for name in ("square-gbit", "fivedim-es-ext", "qubit-trine", "qubit-four-halves"):
        assert call(capsys, "catalog", "export", name, "--out", str(tmp_path / name))[0] == 0
    return tmp_path


def test_degree_from_files(capsys, exported):
    d = exported / "square-gbit"
    code, doc = call(capsys, "degree", "--measurement", str(d / "measurement-A.json"))
    assert code == 0 and doc["value"] == "1"
    assert doc["witnesses"]["report"]["witness_joint"]["labels"]
    assert doc["dimension_convention"] == "linear = affine-hull + 1"


def test_degree_with_separate_model(capsys, exported):
    d = exported / "fivedim-es-ext"
    code, doc = call(
        capsys, "cis-degree", "--model", str(d / "model.json"), "--measurement", str(d / "measurement-A.json")
    )
    assert code == 0 and doc["value"] == "0"
    assert doc["witnesses"]["report"]["witness_partition"] == [["1", "4"], ["2", "3"]]


def test_catalog_commands(capsys):
    code, doc = call(capsys, "catalog", "show", "fivedim-es-ext")
    assert code == 0
    props = {e["property"]: e for e in doc["witnesses"]["entry"]["expected"]}
    assert props["extremal"]["value"] is True and props["extremal"]["source"] == "stated"
    code, doc = call(capsys, "catalog", "list")
    assert "qubit-trine" in doc["witnesses"]["entries"]
    assert call(capsys, "catalog", "show", "nope")[0] == 2


def test_quantum_commands(capsys, exported):
    trine = exported / "qubit-trine" / "povm-A.json"
    halves = exported / "qubit-four-halves" / "povm-A.json"
    assert call(capsys, "quantum", "is-pvm", "--povm", str(trine))[1]["value"] is False
    assert call(capsys, "quantum", "extremal", "--povm", str(trine))[1]["value"] is True
    assert call(capsys, "quantum", "intersubjective", "--povm", str(halves))[1]["value"] is True
    assert call(capsys, "quantum", "extremal", "--catalog", "qubit-four-halves")[1]["value"] is False
    assert call(capsys, "quantum", "qubit-degree", "3/5", "0", "0")[1]["value"] == "9/25"


def test_other_commands(capsys):
    assert call(capsys, "sharpness", "--catalog", "square-gbit")[1]["value"] == "1"
    assert call(capsys, "extremal", "--catalog", "square-gbit")[1]["value"] is False
    assert call(capsys, "extremal", "--catalog", "square-gbit", "--which", "B")[1]["value"] is True
    assert call(capsys, "classical-check", "--catalog", "classical-3")[1]["value"] is True
    assert call(capsys, "rays", "--catalog", "square-gbit")[1]["value"] == 4
    assert call(capsys, "coin-toss", "3/4", "1/8", "1/8")[1]["value"] == "1/2"
    assert call(capsys, "classical-degree", "--catalog", "classical-3")[1]["value"] == "1"
    assert call(capsys, "tomo-check", "--catalog", "fivedim-es-ext", "--sharp-set")[1]["value"] is True
    doc = call(capsys, "distinguish", "--catalog", "square-gbit")[1]
    assert doc["witnesses"]["states"] == {"+": ["1", "1"], "-": ["-1", "-1"]}
    doc = call(capsys, "construct", "three-outcome", "--catalog", "square-gbit")[1]
    assert doc["value"] is True and doc["witnesses"]["cis_degree"]["value"] == "0"
    doc = call(capsys, "construct", "many-outcome", "--catalog", "classical-3")[1]
    assert doc["value"] == "classical"


def test_sharp_effect_and_discriminate(capsys, tmp_path, square):
    eff = {"model": "square-gbit", "linear": ["1/2", 0], "constant": "1/2"}
    (tmp_path / "e.json").write_text(json.dumps(eff))
    assert call(capsys, "sharp-effect", "--effect", str(tmp_path / "e.json"))[1]["value"] is True
    ens = {"model": "square-gbit", "states": [{"point": [1, 1], "prob": "1/2"}, {"point": [-1, -1], "prob": "1/2"}]}
    (tmp_path / "ens.json").write_text(json.dumps(ens))
    assert call(capsys, "discriminate", "--ensemble", str(tmp_path / "ens.json"))[1]["value"] == "1"


def test_random_commands_are_seeded(capsys):
    a = call(capsys, "random", "model", "--seed", "4", "--dim", "3")[1]
    b = call(capsys, "random", "model", "--seed", "4", "--dim", "3")[1]
    assert a == b
    doc = call(capsys, "random", "measurement", "--catalog", "square-gbit", "--seed", "2", "--mixed")[1]
    assert io.measurement_from_dict(doc["witnesses"]["measurement"])


def test_quiet_flag_anywhere(capsys):
    for argv in (("--quiet", "coin-toss", "1/2", "1/2"), ("coin-toss", "1/2", "1/2", "--quiet")):
        code = run(list(argv))
        assert code == 0 and capsys.readouterr().out.strip() == '"0"'


def test_exit_codes(capsys, tmp_path):
    with pytest.raises(SystemExit) as e:
        run(["bogus"])
    assert e.value.code == 2
    assert call(capsys, "degree", "--measurement", str(tmp_path / "none.json"))[0] == 2
    bad = {"name": "x", "dim": 1, "vertices": [[0], [1], ["1/2"]]}
    (tmp_path / "bad.json").write_text(json.dumps(bad))
    assert call(capsys, "rays", "--model", str(tmp_path / "bad.json"))[0] == 2
    assert call(capsys, "construct", "many-outcome", "--catalog", "direct-sum-es")[0] == 3
    assert call(capsys, "degree", "--catalog", "fivedim-es-ext", "--max-outcomes", "3")[0] == 3
    assert call(capsys, "coin-toss", "0.5", "0.25")[0] == 2


def test_selftest_reports_every_criterion(capsys, monkeypatch):
    from intersub import acceptance
    from intersub.acceptance import Result

    fake = tuple((lambda k=k: Result(k, f"c{k}")) for k in range(1, 11))
    monkeypatch.setattr(acceptance, "CRITERIA", fake)
    code = run(["selftest"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0 and doc["value"] is True
    assert len(doc["witnesses"]) == 10
