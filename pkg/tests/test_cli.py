import csv
import io
import json
from importlib import resources

import jsonschema
import pytest

from essmon.cli import main

SCHEMAS = resources.files("essmon") / "schemas"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out)


def validate(command, payload):
    schema = json.loads((SCHEMAS / f"{command}.schema.json").read_text())
    jsonschema.validate(payload, schema)


def test_essential_example(capsys):
    code, data = run_json(capsys, "essential", "--type", "A2", "--sequence", "reduced:1,2,1",
                          "--order", "oplex:height", "--lambda", "1,0")
    assert code == 0
    assert len(data["exponents"]) == 3 and data["dim_check"] is True
    validate("essential", data)


def test_dominance_example(capsys):
    code, data = run_json(capsys, "sequence-check", "--type", "A2", "--sequence", "custom:a1,a1,a2")
    assert code == 1
    assert data["dominance"]["status"] == "likely_not_dominant"
    validate("sequence-check", data)


def test_g2_roots(capsys):
    code, data = run_json(capsys, "roots", "--type", "G2")
    assert code == 0
    validate("roots", data)
    code, out, _ = run(capsys, "roots", "--type", "G2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 6 and "3a+2b" in [r[0] for r in rows]


@pytest.mark.parametrize("argv,command", [
    (["sequence-check", "--type", "C2", "--sequence", "good", "--order", "oprlex:homogeneous"], "sequence-check"),
    (["straighten", "--type", "A2", "--sequence", "reduced:1,2,1", "--word", "2@1,1@2"], "straighten"),
    (["essential", "--type", "C2", "--sequence", "good", "--order", "rlex:homogeneous", "--lambda", "1,0",
      "--dump-gram"], "essential"),
    (["gamma", "--type", "A2", "--sequence", "good", "--order", "rlex:homogeneous", "--box", "1,1"], "gamma"),
    (["polytope", "--type", "A2", "--family", "fflv", "--lambda", "1,1"], "polytope"),
    (["polytope", "--type", "A3", "--family", "gt"], "polytope"),
    (["polytope", "--type", "C2", "--family", "sp4", "--lambda", "1,1"], "polytope"),
    (["polytope", "--type", "A2", "--family", "string-trunc", "--lambda", "1,1"], "polytope"),
    (["compare", "--type", "A2", "--family", "fflv", "--order", "oprlex:homogeneous", "--lambda", "1,1"], "compare"),
    (["compare", "--type", "C2", "--family", "sp4", "--sequence", "pbw:a1,a1+a2,2a1+a2,a2",
      "--order", "lex:custom=1,1,1,2", "--lambda", "1,1"], "compare"),
    (["structure-constants", "--type", "A2", "--sequence", "good", "--order", "rlex:homogeneous",
      "--lambda", "1,0", "--mu", "0,1"], "structure-constants"),
    (["valuation-check", "--type", "A2", "--sequence", "lusztig:", "--order", "lex:zero", "--lambda", "1,1"],
     "valuation-check"),
    (["verify-all", "--criteria", "1,4", "--format", "json"], "verify-all"),
])
def test_outputs_validate_against_schemas(capsys, argv, command):
    code, data = run_json(capsys, *argv)
    assert code == 0
    validate(command, data)


def test_every_command_has_a_schema():
    from essmon.cli import COMMANDS
    for name in COMMANDS:
        assert (SCHEMAS / f"{name}.schema.json").is_file()


def test_verification_failure_exits_one(capsys):
    code, data = run_json(capsys, "compare", "--type", "A3", "--family", "fflv", "--order", "rlex:homogeneous",
                          "--lambda", "0,1,0")
    assert code == 1 and not data["equal"]
    validate("compare", data)


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["roots", "--bogus"],
    ["roots"],
    ["roots", "--type", "D2"],
    ["essential", "--type", "A2", "--sequence", "good", "--order", "lex:zero"],
    ["essential", "--type", "A2", "--sequence", "good", "--order", "lex:zero", "--lambda", "1"],
    ["essential", "--type", "A2", "--sequence", "reduced:1,1,2", "--order", "lex:zero", "--lambda", "1,0"],
    ["essential", "--type", "A2", "--sequence", "good", "--order", "oplex:zero", "--lambda", "1,0"],
    ["straighten", "--type", "A2", "--sequence", "good", "--word", "7@1"],
    ["polytope", "--type", "C2", "--family", "gt"],
    ["polytope", "--type", "A2", "--family", "gt", "--format", "csv"],
    ["verify-all", "--criteria", "99"],
    [],
])
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_csv_output_is_sorted_points(capsys):
    code, out, _ = run(capsys, "polytope", "--type", "C2", "--family", "fflv", "--lambda", "0,1", "--out", "csv")
    rows = [tuple(int(x) for x in r) for r in csv.reader(io.StringIO(out))]
    assert code == 0 and len(rows) == 5 and rows == sorted(rows)
    assert not out.startswith("#")


def test_out_path(capsys, tmp_path):
    target = tmp_path / "roots.json"
    code, out, _ = run(capsys, "roots", "--type", "A2", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["roots"]


def test_output_is_deterministic(capsys):
    argv = ["gamma", "--type", "C2", "--sequence", "good", "--order", "rlex:homogeneous", "--box", "1,1"]
    first = run(capsys, *argv)
    second = run(capsys, *argv + ["--jobs", "2"])
    assert first == second
