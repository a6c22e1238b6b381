import json

import pytest

from buildsets.cli import main
from buildsets.io import split_labels
from buildsets.errors import ValidationError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_enumerate_count(capsys):
    code, out = run(capsys, "building-sets", "enumerate", "--lattice", "B3", "--format", "text", "--no-timing")
    assert code == 0 and "count: 12\n" in out


def test_closure_rounds(capsys):
    code, out = run(capsys, "building-sets", "closure", "--lattice", "B3", "--set", "12,23", "--no-timing")
    rep = json.loads(out)
    assert code == 0 and rep["rounds"] == 1
    assert rep["members"] == ["1", "2", "3", "12", "23", "123"]


def test_check_no(capsys):
    code, out = run(capsys, "building-sets", "check", "--lattice", "B3", "--set", "1,2", "--format", "text")
    assert code == 0 and "building set: no" in out and '"3"' in out


def test_extreme_and_chain(capsys):
    code, out = run(capsys, "building-sets", "extreme", "--lattice", "B3", "--no-timing")
    assert json.loads(out)["extreme"] == ["12", "13", "23"]
    code, out = run(capsys, "building-sets", "chain", "--lattice", "B3", "--no-timing")
    rep = json.loads(out)
    assert code == 0 and rep["length"] == 4 and rep["steps"][-1] == ["1", "2", "3"]


def test_validate_file(tmp_path, capsys):
    p = tmp_path / "b2.json"
    p.write_text(json.dumps({"elements": ["0", "a", "b", "1"],
                             "cover_relations": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]]}))
    code, out = run(capsys, "validate", "--input", str(p), "--format", "text", "--no-timing")
    assert code == 0 and "meet-semilattice: yes" in out and "lattice: yes" in out


def test_validate_antisymmetry(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"elements": ["a", "b"], "leq": [["a", "b"], ["b", "a"]]}))
    code, out = run(capsys, "validate", "--input", str(p))
    rep = json.loads(out)
    assert code == 2 and rep["witness"] == {"x": "a", "y": "b"}


def test_validate_not_meet_semilattice(tmp_path, capsys):
    p = tmp_path / "v.json"
    p.write_text(json.dumps({"elements": ["a", "b", "c"], "cover_relations": [["a", "c"], ["b", "c"]]}))
    code, _ = run(capsys, "validate", "--input", str(p))
    assert code == 2


@pytest.mark.parametrize("text", ["{not json", "[1, 2]", '{"elements": ["a"]}',
                                  '{"elements": ["a"], "leq": [], "cover_relations": []}'])
def test_parse_errors(tmp_path, capsys, text):
    p = tmp_path / "x.json"
    p.write_text(text)
    code, _ = run(capsys, "validate", "--input", str(p))
    assert code == 1


def test_missing_file(capsys):
    assert run(capsys, "validate", "--input", "/nonexistent/file.json")[0] == 1


def test_usage_error_is_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["building-sets", "nope"])
    assert exc.value.code == 1


def test_matroid_and_embedding_files(tmp_path, capsys):
    m = tmp_path / "u23.json"
    m.write_text(json.dumps({"ground": ["1", "2", "3"],
                             "flats": [[], ["1"], ["2"], ["3"], ["1", "2", "3"]]}))
    code, out = run(capsys, "validate", "--input", str(m), "--no-timing")
    assert code == 0 and json.loads(out)["simple"] == "yes"
    e = tmp_path / "emb.json"
    e.write_text(json.dumps({"source": "u23.json", "target": "B3",
                             "map": {"0": "0", "1": "1", "2": "2", "3": "3", "123": "123"}}))
    code, out = run(capsys, "embed", "verify", "--input", str(e), "--no-timing")
    rep = json.loads(out)
    assert code == 0 and rep["holds"] and rep["restricted"] == 8
    code, out = run(capsys, "embed", "consistent", "--input", str(e), "--no-timing")
    assert json.loads(out)["consistent"] == "yes"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"source": "u23.json", "target": "B3",
                               "map": {"0": "0", "1": "1", "2": "1", "3": "3", "123": "123"}}))
    assert run(capsys, "embed", "validate", "--input", str(bad))[0] == 2


def test_building_set_file(tmp_path, capsys):
    p = tmp_path / "bs.json"
    p.write_text(json.dumps({"lattice": "B3", "members": ["1", "2", "3", "12", "123"]}))
    code, out = run(capsys, "nested", "complex", "--input", str(p), "--no-timing")
    assert code == 0 and json.loads(out)["building_set"] == ["1", "2", "3", "12", "123"]


def test_embed_inconsistent(capsys):
    code, out = run(capsys, "embed", "consistent", "--embedding", "C2-B2", "--no-timing")
    assert code == 0 and json.loads(out)["consistent"] == "no"
    code, _ = run(capsys, "embed", "verify", "--embedding", "C2-B2", "--no-timing")
    assert code == 4


def test_nested_commands(capsys):
    code, out = run(capsys, "nested", "complex", "--lattice", "B3", "--set", "1,2,3", "--no-timing")
    assert json.loads(out)["faces"] == 8
    code, out = run(capsys, "nested", "check", "--lattice", "B3", "--face", "1,2", "--format", "text")
    assert code == 0 and "nested: no" in out
    code, out = run(capsys, "nested", "check", "--lattice", "B3", "--face", "1,12", "--format", "text")
    assert "nested: yes" in out and "factors: yes" in out


def test_not_a_building_set_is_exit_2(capsys):
    assert run(capsys, "nested", "complex", "--lattice", "B3", "--set", "1,2")[0] == 2


def test_fan_commands(capsys):
    code, out = run(capsys, "fan", "build", "--lattice", "U23", "--no-timing")
    assert json.loads(out)["cones"] == 8
    code, out = run(capsys, "fan", "unimodular", "--lattice", "Pi4", "--format", "text", "--no-timing")
    assert "unimodular: 18" in out or "unimodular: 64/64" in out
    code, out = run(capsys, "fan", "subfan", "--lattice", "U24", "--format", "text")
    assert code == 0 and "subfan: yes" in out
    code, out = run(capsys, "fan", "subfan", "--lattice", "U23", "--outer-set", "1,2,3,123", "--format", "text")
    assert "subfan: yes" in out
    code, out = run(capsys, "fan", "corollary", "--lattice", "U23", "--format", "text")
    assert code == 0 and "cones: 8, unimodular: 8/8, subfan: yes" in out
    code, out = run(capsys, "fan", "build", "--lattice", "B3", "--set", "1,2,3")
    assert code == 2 and json.loads(out)["error"] == "TopFlatMissing"
    code, out = run(capsys, "fan", "build", "--lattice", "B3", "--set", "1,2,3", "--allow-no-top", "--no-timing")
    assert code == 0 and json.loads(out)["kind"] == "nestohedral"
    assert run(capsys, "fan", "build", "--lattice", "C3")[0] == 2


def test_verify_examples(capsys):
    code, out = run(capsys, "verify", "--suite", "restriction", "--embedding", "U23-B3", "--format", "text")
    assert code == 0 and "8 building sets restricted, 1 distinct image" in out
    code, out = run(capsys, "verify", "--suite", "fans", "--lattice", "U23", "--format", "text")
    assert code == 0 and "cones: 8, unimodular: 8/8, subfan: yes" in out
    code, out = run(capsys, "verify", "--suite", "convex-geometry", "--lattice", "Pi4", "--no-timing")
    rep = json.loads(out)
    assert code == 0 and rep["results"][0]["counts"] == {"family": 8, "extensions": 10000}
    code, out = run(capsys, "verify", "--suite", "convex-geometry", "--lattice", "Pi4",
                    "--max-extensions", "7", "--no-timing")
    assert json.loads(out)["results"][0]["counts"]["extensions"] == 7


def test_verify_falsified_exit_4(capsys):
    code, out = run(capsys, "verify", "--suite", "restriction", "--embedding", "C2-B2", "--no-timing")
    assert code == 4 and not json.loads(out)["holds"]


def test_verify_custom_input(tmp_path, capsys):
    p = tmp_path / "l.json"
    p.write_text(json.dumps({"elements": ["0", "a", "b"], "cover_relations": [["0", "a"], ["0", "b"]]}))
    code, out = run(capsys, "verify", "--input", str(p), "--no-timing")
    rep = json.loads(out)
    assert code == 0 and rep["total"] == 7


def test_verify_jobs_same_results(capsys):
    _, a = run(capsys, "verify", "--suite", "nested", "--no-timing")
    _, b = run(capsys, "verify", "--suite", "nested", "--no-timing", "--jobs", "2")
    ra, rb = json.loads(a), json.loads(b)
    ra.pop("command"), rb.pop("command")
    assert ra == rb


def test_export(tmp_path, capsys):
    code, out = run(capsys, "export", "hasse-dot", "--lattice", "B2")
    assert out.count("->") == 4
    code, out = run(capsys, "export", "complex-json", "--lattice", "B3", "--set", "1,2,3")
    assert len(json.loads(out)["faces"]) == 8
    target = tmp_path / "fan.json"
    code, out = run(capsys, "export", "fan-json", "--lattice", "U23", "--out", str(target), "--no-timing")
    assert code == 0 and len(json.loads(target.read_text())["cones"]) == 8
    code, out = run(capsys, "export", "fan-text", "--lattice", "U23")
    assert out.startswith("AMBIENT_DIM")
    code, _ = run(capsys, "export", "fan-json", "--lattice", "U23", "--out", str(tmp_path / "no" / "x"))
    assert code == 1


def test_timing_field(capsys):
    _, out = run(capsys, "building-sets", "enumerate", "--lattice", "B2")
    assert "timing" in json.loads(out)
    _, out = run(capsys, "building-sets", "enumerate", "--lattice", "B2", "--no-timing")
    assert "timing" not in json.loads(out)


def test_split_labels():
    assert split_labels("12,23") == ["12", "23"]
    assert split_labels("{12,13},{34}") == ["{12,13}", "{34}"]
    with pytest.raises(ValidationError):
        split_labels("1,,2")


def test_brace_labels_on_pi4(capsys):
    code, out = run(capsys, "building-sets", "check", "--lattice", "Pi4", "--set", "{12},{13}", "--no-timing")
    assert code == 0 and json.loads(out)["building set"] == "no"


def test_unknown_builtin(capsys):
    assert run(capsys, "validate", "--lattice", "Q7")[0] == 1
