from __future__ import annotations

import json
from pathlib import Path

import pytest

from clipcone import corpus
from clipcone.cli import main
from clipcone.instance import InstanceError, load, parse, to_dict

INSTANCES = Path(__file__).resolve().parent.parent / "instances"

U2 = {
    "schema": 1,
    "name": "u2",
    "gram": [[0, 1, 0], [1, 0, 0], [0, 0, -2]],
    "factors": [{"kind": "lorentz", "coords": [0, 1, 2], "h": [1, 1, 0]}],
    "roots": [[0, 0, 1]],
    "witness": [2, 1, -1],
}


def write(tmp_path, data, name="inst.json"):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_validate_ok(tmp_path, capsys):
    code, rep = run(capsys, "validate", write(tmp_path, U2))
    assert code == 0 and rep["ok"]
    assert rep["instance"] == "u2" and len(rep["instance_sha256"]) == 64
    assert rep["roots"][0]["e"] == [0, 0, 1]


def test_validate_klt_fails_with_coefficient(tmp_path, capsys):
    code, rep = run(capsys, "validate", write(tmp_path, corpus.klt_instance()))
    assert code == 1 and not rep["ok"]
    assert "4/3" in json.dumps(rep)


def test_input_errors(tmp_path, capsys):
    assert main(["validate", write(tmp_path, "{not json")]) == 2
    assert main(["validate", write(tmp_path, {**U2, "schema": 7})]) == 2
    assert main(["validate", write(tmp_path, {**U2, "witness": [1, 2]})]) == 2
    assert main(["validate", str(tmp_path / "missing.json")]) == 2
    assert main(["domain", write(tmp_path, U2), "--samples", "0"]) == 2
    assert "input error" in capsys.readouterr().err


def test_bad_thread_setting(tmp_path, monkeypatch):
    monkeypatch.setenv("CLIPCONE_THREADS", "many")
    assert main(["validate", write(tmp_path, U2)]) == 2
    monkeypatch.setenv("CLIPCONE_THREADS", "0")
    assert main(["validate", write(tmp_path, U2)]) == 2
    monkeypatch.setenv("CLIPCONE_THREADS", "3")
    assert main(["validate", write(tmp_path, U2)]) == 0


def test_descend_identity(capsys):
    code, rep = run(capsys, "descend", str(INSTANCES / "swap_a2_identity.json"), "--samples", "100")
    assert code == 0 and rep["ok"] and rep["group_order"] == 1


def test_descend_precondition_failure(tmp_path, capsys):
    # flipping the last coordinate sends the witness out of the clipped cone
    data = {**U2, "group": {"generators": [[[1, 0, 0], [0, 1, 0], [0, 0, -1]]]}}
    code, rep = run(capsys, "descend", write(tmp_path, data))
    assert code == 1 and not rep["ok"]
    assert rep["error"]["type"] == "PreconditionFailure" and rep["error"]["hypothesis"]


def test_reduce_point(tmp_path, capsys):
    code, rep = run(capsys, "reduce", write(tmp_path, U2), "--point", "2,1,1", "--point", "4,1,1/2")
    assert code == 0
    assert rep["traces"][0]["word"] == [0] and rep["traces"][0]["end"] == ["2", "1", "-1"]
    assert rep["traces"][1]["end"] == ["4", "1", "-1/2"]


def test_reduce_point_outside(tmp_path, capsys):
    code, rep = run(capsys, "reduce", write(tmp_path, U2), "--point=-1,-1,0")
    assert code == 1 and rep["error"]["type"] == "NotInPlusCone"


def test_domain_word_length_zero(tmp_path, capsys):
    # no cuts: the domain is the whole cone, so it is not inside the chamber
    code, rep = run(capsys, "domain", write(tmp_path, U2), "--word-length", "0", "--samples", "50")
    assert code == 1
    assert rep["facets"] == [] and rep["disjointness"]["max_multiplicity"] == 1
    assert rep["pi_samples"] == 50 > rep["pi_samples_in_chamber"]


def test_domain_default(tmp_path, capsys):
    code, rep = run(capsys, "domain", write(tmp_path, U2), "--samples", "200")
    assert code == 0 and rep["pi_samples"] == rep["pi_samples_in_chamber"] > 0


def test_walls(capsys):
    code, rep = run(capsys, "walls", str(INSTANCES / "swap_a2_walls.json"))
    assert code == 0 and rep["descended"] == [[0, 0, 1, 1]]


def test_angles_thirteen_gon(capsys):
    code, rep = run(capsys, "angles", str(INSTANCES / "thirteen_gon.json"))
    assert code == 1 and rep["violations"]


def test_out_file_and_determinism(tmp_path, capsys):
    path = write(tmp_path, U2)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["reduce", path, "--samples", "30", "--seed", "2", "--out", str(a)]) == 0
    assert main(["reduce", path, "--samples", "30", "--seed", "2", "--out", str(b)]) == 0
    assert capsys.readouterr().out == ""
    assert a.read_bytes() == b.read_bytes()
    assert main(["reduce", path, "--samples", "30", "--timing"]) == 0
    assert "timing_ms" in json.loads(capsys.readouterr().out)


def test_selftest(capsys):
    code, rep = run(capsys, "selftest", "--samples", "50")
    assert code == 0 and all(rep["results"].values())


def test_instance_round_trip():
    for inst in corpus.descent_corpus()[:4]:
        back = parse(to_dict(inst.name, inst.cone, inst.action))
        cone, rej = back.clipped()
        assert not rej and [r.vector for r in cone.roots] == [r.vector for r in inst.cone.roots]


def test_shipped_instances_load():
    files = sorted(INSTANCES.glob("*.json"))
    assert len(files) >= 10
    for f in files:
        assert load(f).name == f.stem


def test_schema_rejects_unknown_keys():
    with pytest.raises(InstanceError, match="schema violation"):
        parse({**U2, "extra": 1})
    with pytest.raises(InstanceError):
        parse({**U2, "factors": [{"kind": "cube", "coords": [0, 1, 2]}]})
