import json
from importlib import resources

import jsonschema
import pytest

from evenlat.cli import main
from evenlat.discform import discriminant_form, level, two_elementary_invariants
from evenlat.expr import lattice


def schema(name):
    text = resources.files("evenlat.classify").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_info_row(capsys):
    code, out, _ = run(capsys, "info", "2U+E8+2A1", "--json")
    assert code == 0
    data = json.loads(out)
    lat = lattice("2U+E8+2A1")
    d = discriminant_form(lat)
    assert data["signature"] == [12, 2]
    assert data["det"] == lat.det
    assert data["length"] == d.length and data["exponent"] == d.exponent
    assert data["level"] == level(d)
    _, _, a, delta = two_elementary_invariants(lat)
    assert data["two_elementary"] == {"a": a, "delta": delta}


def test_info_text(capsys):
    code, out, _ = run(capsys, "info", "2U+E8+2A1")
    assert code == 0 and "signature  (12,2)" in out


def test_info_gram(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"gram": [[2, -1], [-1, 2]], "name": "A2"}))
    jsonschema.validate(json.loads(p.read_text()), schema("gram"))
    code, out, _ = run(capsys, "info", "--gram", str(p), "--json")
    assert code == 0 and json.loads(out)["det"] == 3


def test_roots(capsys):
    code, out, _ = run(capsys, "roots", "E8(2)")
    assert code == 0 and "no 2-roots" in out
    code, out, _ = run(capsys, "roots", "E7+D4", "--json")
    data = json.loads(out)
    assert [c["coxeter_number"] for c in data["components"]] == [18, 6]
    assert data["coxeter_condition"] is False


def test_disc(capsys):
    code, out, _ = run(capsys, "disc", "3A2", "--json")
    data = json.loads(out)
    assert data["orders"] == [3, 3, 3] and data["q"] == ["2/3"] * 3


def test_genus(capsys):
    code, out, _ = run(capsys, "genus", "2U+E8+3A1", "2U+E7+D4", "--json")
    assert code == 0 and json.loads(out)["genus_equal"] is True


def test_over(capsys):
    code, out, _ = run(capsys, "over", "3A2", "--max-index", "3", "--json")
    assert code == 0 and len(json.loads(out)["overlattices"]) == 4


def test_split(capsys):
    code, out, _ = run(capsys, "split", "A1(-1)+2A3", "--what", "U", "--json")
    data = json.loads(out)
    assert code == 0 and data["splits"] and data["witness_ok"]
    code, out, _ = run(capsys, "split", "2U+E8", "--what", "A1", "--json")
    data = json.loads(out)
    assert not data["splits"] and data["proven"]


def test_norm2(capsys):
    code, out, _ = run(capsys, "norm2", "E6'(3)", "--json")
    data = json.loads(out)
    assert data["holds"] and data["cosets"] == 243


@pytest.mark.parametrize("argv", [
    ["info", "E9"], ["info", "2U+"], ["info"], ["info", "--seed", "1", "U"], ["roots", "U"],
    ["verify", "thm9.9"], ["frobnicate"], ["split", "U", "--what", "E8"],
    ["info", "U", "--gram", "x.json"], ["over", "A1", "--max-index", "0"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_verify_report_schema(capsys, tmp_path):
    p = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "thm4.1", "--json", str(p))
    assert code == 0
    report = json.loads(p.read_text())
    jsonschema.validate(report, schema("report"))
    assert report["summary"]["fail"] == 0
    assert "PASS" in out


def test_manifest_schema():
    text = resources.files("evenlat.classify").joinpath("data", "claims.json").read_text()
    jsonschema.validate(json.loads(text), schema("manifest"))


def test_quiet(capsys):
    code, out, _ = run(capsys, "info", "U", "--quiet")
    assert code == 0 and out == ""
