import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from posetdyn.catalog import FIXTURE_NAMES, load_fixture, resolve_input
from posetdyn.cli import main
from posetdyn.errors import InputFormatError
from posetdyn.io import gamma_to_json, parse_document, poset_to_json, to_dot
from posetdyn.gamma import build_gamma

GOLDEN = Path(__file__).parent / "golden"

LABELING = {"type": "object", "additionalProperties": {"type": "integer"}}
IDEAL = {"type": "array"}
SCHEMAS = {
    "poset": {
        "type": "object",
        "required": ["elements", "covers"],
        "properties": {
            "elements": {"type": "array"},
            "covers": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
            "restriction": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "integer"}}},
            "q": {"type": "integer"},
        },
    },
    "gamma": {
        "type": "object",
        "required": ["elements", "covers", "ghosts", "mode"],
        "properties": {"mode": {"enum": ["strict", "weak"]}, "ghosts": LABELING},
    },
    "orbits": {
        "type": "object",
        "required": ["action", "total", "orbits"],
        "properties": {"orbits": {"type": "array", "items": {
            "type": "object", "required": ["length", "representative"]}}},
    },
    "compare": {
        "type": "object",
        "required": ["compare", "equal", "reports"],
        "properties": {"equal": {"type": "boolean"}},
    },
    "promote": {
        "type": "object",
        "required": ["input", "result"],
        "properties": {
            "input": LABELING, "result": LABELING,
            "trace": {"type": "array", "items": {
                "type": "object", "required": ["op", "labeling"],
                "properties": {"op": {"type": "string"}, "labeling": LABELING}}},
        },
    },
    "labelings": {
        "type": "object", "required": ["count", "labelings"],
        "properties": {"count": {"type": "integer"}, "labelings": {"type": "array", "items": LABELING}},
    },
    "rowmotion": {
        "type": "object", "required": ["carrier", "length", "orbit"],
        "properties": {"orbit": {"type": "array", "items": IDEAL}},
    },
    "verify": {
        "type": "object", "required": ["ok", "results"],
        "properties": {"results": {"type": "array", "items": {
            "type": "object", "required": ["input", "check", "status", "detail"],
            "properties": {"status": {"enum": ["PASS", "FAIL", "SKIP"]}}}}},
    },
}


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def run_json(schema, *argv):
    code, text = run(*argv)
    doc = json.loads(text)
    jsonschema.validate(doc, SCHEMAS[schema])
    return code, doc


def test_gamma_json():
    code, doc = run_json("gamma", "gamma", "fig1", "--check")
    assert code == 0
    assert len(doc["elements"]) == 11 and len(doc["covers"]) == 13
    assert doc["check"] == {"ideals": 58, "labelings": 58, "ok": True}


def test_gamma_dot_golden():
    code, text = run("gamma", "fig1", "--format", "dot")
    assert code == 0
    assert text == (GOLDEN / "fig1_gamma.dot").read_text()
    assert text.count("[shape=plaintext]") == 5
    assert '"a,1" -> "b,3";' in text


def test_export_dot_golden():
    code, text = run("export", "fig2", "--format", "dot")
    assert code == 0 and text == (GOLDEN / "fig2_poset.dot").read_text()


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_export_round_trip(name):
    code, doc = run_json("poset", "export", name)
    assert code == 0
    again = parse_document(doc)
    orig = load_fixture(name)
    assert again.poset.elements == orig.poset.elements
    assert set(again.poset.covers) == set(orig.poset.covers)
    assert poset_to_json(again.poset) == poset_to_json(orig.poset)


def test_gamma_round_trip():
    doc = load_fixture("fig1")
    G = build_gamma(doc.poset, doc.restriction)
    payload = json.loads(json.dumps(gamma_to_json(G)))
    again = parse_document(payload)
    assert again.poset.elements == G.elements
    assert set(again.poset.covers) == set(G.poset.covers)
    assert to_dot(again.poset) == to_dot(G.poset)


def test_promote_trace_json():
    code, doc = run_json("promote", "promote", "fig2", "--trace", "--method", "both")
    assert code == 0
    assert doc["result"] == {"a": 2, "b": 5, "c": 4, "d": 5, "e": 1}
    assert [s["op"] for s in doc["trace"]] == ["start", "rho_1", "rho_2", "rho_3", "rho_4"]
    assert doc["agree"] is True


def test_promote_fig11_jdt():
    code, doc = run_json("promote", "promote", "fig11", "--method", "jdt")
    assert code == 0
    assert list(doc["result"].values()) == [4, 2, 3, 6, 6, 5, 6, 8, 7, 8]
    assert doc["sliding_subposet"] == ["a1", "a3", "b1", "b2", "b4", "c1", "c3"]


def test_promote_explicit_labeling():
    code, doc = run_json("promote", "promote", "fig2", "--labeling", json.dumps({"a": 1, "b": 3, "c": 3, "d": 5, "e": 2}))
    assert code == 0 and doc["result"]["b"] == 5


def test_labelings_staircase():
    code, doc = run_json("labelings", "labelings", "staircase3")
    assert code == 0 and doc["count"] == 14


def test_orbits_and_compare():
    code, doc = run_json("orbits", "orbits", "grid:2x3")
    assert code == 0 and doc["total"] == 10
    code, doc = run_json("compare", "orbits", "fig4", "--compare", "row", "togpro")
    assert code == 0 and doc["equal"] is True
    code, doc = run_json("compare", "orbits", "fig10", "--compare", "row", "togpro")
    assert code == 1 and doc["equal"] is False
    code, doc = run_json("compare", "orbits", "fig2", "--compare", "incpro", "togpro")
    assert code == 0 and doc["equal"] is True


def test_rowmotion_orbit():
    code, doc = run_json("rowmotion", "rowmotion", "grid:2x2", "--ideal", "[[1, 1]]")
    assert code == 0 and doc["length"] == 4 and doc["orbit"][0] == [[1, 1]]
    code, _ = run("rowmotion", "chain:3", "--ideal", "[2]")
    assert code == 3


def test_verify_json():
    code, doc = run_json("verify", "verify", "bijection", "equivariance", "fig1", "--format", "json")
    assert code == 0 and doc["ok"]
    assert {r["status"] for r in doc["results"]} == {"PASS"}


def test_verify_reports_fig10_conjugacy_failure():
    code, doc = run_json("verify", "verify", "conjugacy", "fig10", "--format", "json")
    assert code == 1 and doc["results"][0]["status"] == "FAIL"


def test_verify_text():
    code, text = run("verify", "resonance", "bkjdt", "fig2")
    assert code == 0
    assert text.splitlines()[0].startswith("PASS resonance")


def test_exit_code_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("gamma", str(bad))[0] == 3
    assert run("gamma", str(tmp_path / "missing.json"))[0] == 3
    cyc = tmp_path / "cyc.json"
    cyc.write_text(json.dumps({"elements": ["a", "b"], "covers": [["a", "b"], ["b", "a"]], "q": 3}))
    assert run("gamma", str(cyc))[0] == 3
    assert run("gamma", "fig1", "--q", "3", "--restriction", "x.json")[0] == 3
    assert run("nosuchverb")[0] == 3


def test_exit_code_inconsistent(tmp_path):
    R = tmp_path / "r.json"
    R.write_text(json.dumps({"a": [1], "b": [1], "c": [1], "d": [1], "e": [1]}))
    assert run("gamma", "fig1", "--restriction", str(R))[0] == 2
    assert run("gamma", "fig1", "--q", "2")[0] == 2


def test_exit_code_budget():
    assert run("orbits", "grid:3x3", "--budget", "5")[0] == 4


def test_resolve_inputs():
    assert resolve_input("chain:4").poset.n == 4
    assert resolve_input("grid:2x2x2").poset.n == 8
    assert resolve_input("random:6", seed=3).poset.n == 6
    assert resolve_input("random:6", seed=3).poset.covers == resolve_input("random:6", seed=3).poset.covers
    with pytest.raises(InputFormatError):
        resolve_input("grid:axb")
    with pytest.raises(InputFormatError):
        parse_document({"elements": ["a"], "restriction": {"z": [1]}})


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "posetdyn", "gamma", "fig1", "--format", "text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("11 elements, 13 covers")
