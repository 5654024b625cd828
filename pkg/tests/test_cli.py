import json
import subprocess
import sys

import pytest

from onesided.cli import main, run

SQRT2 = {"min_poly": ["-2", "0", "1"], "interval": ["1", "2"]}
SQRT23 = {"min_poly": ["1", "0", "-10", "0", "1"], "interval": ["3", "4"]}
# sqrt2 = (t^3 - 9t)/2 and sqrt3 = (11t - t^3)/2 in the basis 1, t, t^2, t^3
S2 = ["0", "-9/2", "0", "1/2"]
S3 = ["0", "11/2", "0", "-1/2"]


def _encoded(rep):
    from onesided.jsonio import dumps
    return json.loads(dumps(rep))


def check(command, doc):
    code, rep = run(command, doc)
    return code, _encoded(rep)


def verify(doc, rep_certificate, **extra):
    d = dict(doc, certificate=rep_certificate, **extra)
    return check("verify-cert", d)


def test_decide_fails_example():
    doc = {"generators_H": [["1", "-1"]]}
    code, rep = check("decide", doc)
    assert code == 3 and rep["verdict"] == "FailsB"
    c = rep["certificate"]
    assert c["delta"]["coeffs"] == ["1"] and c["eps0"]["coeffs"] == ["1/2"]
    code, v = verify(doc, c)
    assert code == 0 and v["valid"]


def test_decide_holds_and_positivity_roundtrip():
    doc = {"generators_H": [["2", "-1"], ["-1", "2"]]}
    code, rep = check("decide", doc)
    assert code == 0 and rep["certificate"]["type"] == "positivity"
    assert verify(doc, rep["certificate"])[0] == 0


def test_gordan_and_farkas():
    code, rep = check("gordan", {"matrix": [["1", "1"]]})
    assert code == 0 and rep["certificate"]["alternative"] == 2 and rep["certificate"]["x"] == [1]
    doc = {"matrix": [["1", "-1"]], "b": ["-1", "-1"]}
    code, rep = check("farkas", doc)
    assert code == 0 and rep["certificate"]["alternative"] == 1
    assert verify(doc, rep["certificate"])[0] == 0
    doc = {"matrix": [["1", "-1", "0"], ["0", "1", "-1"]]}
    code, rep = check("gordan", doc)
    assert verify(doc, rep["certificate"])[0] == 0


def test_reducible_field_is_input_error():
    doc = {"field": {"min_poly": ["-4", "0", "1"], "interval": ["0", "3"]}, "generators_H": [["1", "-1"]]}
    code, rep = check("decide", doc)
    assert code == 2
    assert rep["error"]["kind"] == "NotIrreducible" and rep["error"]["pointer"] == "/field/min_poly"


def test_bad_literal_pointer():
    code, rep = check("decide", {"generators_H": [["x", "1"]]})
    assert code == 2 and rep["error"]["pointer"] == "/generators_H/0/0"


def test_float_literal_rejected():
    code, rep = check("decide", {"generators_H": [[0.5, 1]]})
    assert code == 2 and rep["error"]["pointer"].startswith("/generators_H/0/0")


def test_ragged_matrix_pointer():
    code, rep = check("decide", {"generators_H": [["1", "0"], ["1"]]})
    assert code == 2 and rep["error"]["pointer"] == "/generators_H/1"


def test_witness_and_budget():
    doc = {"field": SQRT2, "generators_H": [["1", "-1"], [["0", "1"], ["0", "-1"]]],
           "h": [1, 0], "m": 2, "epsilon": "1/10"}
    code, rep = check("witness", doc)
    assert code == 0 and rep["verdict"] == "Witness"
    assert verify(doc, rep["certificate"])[0] == 0
    tampered = dict(rep["certificate"], coeffs=[0, 0])
    code, v = verify(doc, tampered)
    assert code == 3 and not v["valid"]
    code, rep = check("witness", dict(doc, epsilon="1/1000000000", budget=0))
    assert code in (0, 4)
    code, rep = check("witness", {"generators_H": [["1", "-1"]], "h": [1], "m": 2, "epsilon": "1/10"})
    assert code == 3 and rep["certificate"]["type"] == "failure"


def test_transport_via_cli():
    doc = {"generators_H": [["1", "0"], ["0", "1"]], "h": [3, 5], "m": 2, "n_target": 3, "epsilon": "1/2"}
    code, rep = check("witness", doc)
    assert code == 0 and rep["certificate"]["m"] == 3


def test_face_density_property_a():
    code, rep = check("face", {"generators_H": [["1", "-1", "0"]]})
    assert code == 0 and rep["face_support"] == [1, 2, 3]
    code, rep = check("density", {"values": ["2", "3"]})
    assert rep["kind"] == "Discrete" and rep["delta"]["coeffs"] == ["1"]
    code, rep = check("density", {"field": SQRT2, "values": ["1", ["0", "1"]]})
    assert rep["kind"] == "Dense"
    code, rep = check("property-a", {"generators_H": [["1", "-1"]]})
    assert code == 3 and rep["verdict"] == "Fails"


def _holey_doc():
    return {"field": SQRT23, "generators_G": [["1", "0"], ["0", "1"], [S2, S3]], "H_in_G": [[-1, 1, 0]]}


def test_unperforated_and_refinable():
    doc = _holey_doc()
    code, rep = check("unperforated", doc)
    assert code == 3
    assert rep["purity"] == "TorsionFree" and rep["convexity"] == "ConvexByTrivialIntersection"
    assert rep["verdict"] == "Perforated" and "perforation" in rep
    code, rep = check("refinable", dict(doc, trace=["1", "0"]))
    assert code == 3 and rep["verdict"] == "NotRefinable"
    code, rep = check("refinable", dict(doc, trace=["1", S2]))
    assert code == 0 and rep["verdict"] == "Refinable"


def test_unperforated_errors():
    doc = dict(_holey_doc(), H_in_G=[[2, -2, 0]])
    code, rep = check("unperforated", doc)
    assert code == 2 and rep["error"]["kind"] == "NotPure"
    doc = dict(_holey_doc(), H_in_G=[[1, 1, 0]])
    code, rep = check("unperforated", doc)
    assert code == 2 and rep["error"]["pointer"] == "/assume_convex"
    doc = {"generators_G": [["1", "0"], ["0", "1"]], "H_in_G": [[1, -1]]}
    code, rep = check("unperforated", doc)
    assert code == 2 and rep["error"]["pointer"] == "/generators_G"


def test_trace_steps_flag():
    code, rep = run("gordan", {"matrix": [["1", "1"]]}, trace_steps=True)
    assert rep["trace_steps"]
    code, rep = run("gordan", {"matrix": [["1", "1"]]})
    assert "trace_steps" not in rep and "timing_seconds" not in rep
    code, rep = run("gordan", {"matrix": [["1", "1"]]}, timing=True)
    assert "timing_seconds" in rep


def _cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "onesided.cli", *args], capture_output=True, text=True, cwd=cwd)


def test_subprocess_determinism_and_output_file(tmp_path):
    prob = tmp_path / "p.json"
    prob.write_text(json.dumps(_holey_doc()))
    a = _cli("unperforated", str(prob))
    b = _cli("unperforated", str(prob))
    assert a.returncode == b.returncode == 3
    assert a.stdout == b.stdout and a.stdout
    out = tmp_path / "r.json"
    c = _cli("unperforated", str(prob), "-o", str(out))
    assert c.returncode == 3 and out.read_text() == a.stdout


def test_certificate_flag(tmp_path):
    prob = tmp_path / "p.json"
    prob.write_text(json.dumps({"generators_H": [["1", "-1", "0"]]}))
    rep = tmp_path / "r.json"
    assert main(["decide", str(prob), "-o", str(rep)]) == 3
    assert main(["verify-cert", str(prob), "--certificate", str(rep), "-o", str(tmp_path / "v.json")]) == 0
    assert json.loads((tmp_path / "v.json").read_text())["valid"] is True


def test_missing_file_and_bad_json(tmp_path, capsys):
    assert main(["decide", str(tmp_path / "nope.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["decide", str(bad)]) == 2
    out = capsys.readouterr().out
    assert "JSONDecodeError" in out


@pytest.mark.parametrize("command", ["decide", "face", "property-a"])
def test_empty_generators_need_ambient(command):
    code, rep = check(command, {"generators_H": []})
    assert code == 2 and rep["error"]["pointer"] == "/ambient_n"
    code, rep = check(command, {"generators_H": [], "ambient_n": 2})
    assert code in (0, 3)


def _report_validator():
    import importlib.resources
    import jsonschema
    text = importlib.resources.files("onesided").joinpath("schemas/report.schema.json").read_text()
    return jsonschema.Draft202012Validator(json.loads(text))


def test_reports_match_report_schema():
    val = _report_validator()
    holey = _holey_doc()
    cases = [
        ("decide", {"generators_H": [["1", "-1"]]}),
        ("decide", {"generators_H": [["2", "-1"], ["-1", "2"]]}),
        ("decide", {"generators_H": [["x", "1"]]}),
        ("witness", {"field": SQRT2, "generators_H": [["1", "-1"], [["0", "1"], ["0", "-1"]]],
                     "h": [1, 0], "m": 2, "epsilon": "1/10"}),
        ("witness", {"generators_H": [["1", "-1"]], "h": [1], "m": 2, "epsilon": "1/10"}),
        ("face", {"generators_H": [["1", "-1", "0"]]}),
        ("face", {"generators_H": [["1", "1"]]}),
        ("density", {"values": ["2", "3"]}),
        ("density", {"field": SQRT2, "values": ["1", ["0", "1"]]}),
        ("property-a", {"generators_H": [["1", "-1"]]}),
        ("gordan", {"matrix": [["1", "1"]]}),
        ("gordan", {"matrix": [["1", "-1"]]}),
        ("farkas", {"matrix": [["1", "-1"]], "b": ["-1", "-1"]}),
        ("farkas", {"matrix": [["1", "1"]], "b": ["1", "2"]}),
        ("unperforated", holey),
        ("unperforated", dict(holey, H_in_G=[[2, -2, 0]])),
        ("refinable", dict(holey, trace=["1", "0"])),
        ("refinable", dict(holey, trace=["1", S2])),
    ]
    for command, doc in cases:
        code, rep = check(command, doc)
        errors = [e.message for e in val.iter_errors(rep)]
        assert not errors, (command, errors)
        if "certificate" in rep and rep["certificate"] is not None and code != 2:
            code, v = verify(doc, rep["certificate"])
            assert not list(val.iter_errors(v))
    code, rep = run("gordan", {"matrix": [["1", "1"]]}, trace_steps=True, timing=True)
    assert not list(val.iter_errors(_encoded(rep)))
    assert list(val.iter_errors({"command": "decide", "exit_code": 1}))


def test_docs_schemas_match_package():
    import importlib.resources
    from pathlib import Path
    docs = Path(__file__).resolve().parent.parent / "docs" / "schemas"
    if not docs.is_dir():
        pytest.skip("docs not present")
    for name in ("problem.schema.json", "report.schema.json"):
        pkg = importlib.resources.files("onesided").joinpath("schemas", name).read_text()
        assert json.loads((docs / name).read_text()) == json.loads(pkg)
