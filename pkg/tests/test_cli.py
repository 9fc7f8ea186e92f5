import json
import math

import pytest

from shiftlab.cli import main, parse_points, parse_vector
from shiftlab.errors import ShiftlabError

HARD_SQUARE = {"alphabet": {"size": 2}, "name": "hard-square",
               "rule": {"type": "forbidden_patterns", "window": [[0, 0], [1, 0], [0, 1]],
                        "patterns": [[1, 1, 0], [1, 0, 1], [1, 1, 1]]}}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json", "--no-timing")
    return code, json.loads(out)


def test_parsers():
    assert parse_points("(0,0), (1,-2)") == [(0, 0), (1, -2)]
    assert parse_vector("-1,1") == (-1, 1)
    with pytest.raises(ShiftlabError):
        parse_points("(0,0) junk")


def test_polygon_human(capsys):
    code, out, _ = run(capsys, "polygon", "--builtin", "ledrappier", "--vertices", "(0,0),(1,0),(0,1)")
    assert code == 0
    assert out.splitlines()[0] == "coding polygon: true"


def test_rays_candidates(capsys):
    code, doc = run_json(capsys, "rays", "--builtin", "ledrappier", "--height", "3", "--radius", "8")
    assert code == 0
    assert doc["result"] == {"candidates": [[1, 0], [-1, 1], [0, -1]]}


def test_entropy_value(capsys):
    code, doc = run_json(capsys, "entropy", "--builtin", "ledrappier", "--dir", "1,0")
    assert code == 0 and doc["status"] == "Converged"
    assert doc["result"]["value"] == pytest.approx(math.log(2), abs=0.02)


def test_count_and_nivat(capsys):
    code, doc = run_json(capsys, "count", "--builtin", "ledrappier", "--rect", "3x2")
    assert code == 0 and doc["result"]["count"] == "16"
    code, doc = run_json(capsys, "nivat", "--builtin", "ledrappier", "--rect", "2x2")
    assert doc["status"] == "BoundFails"


def test_certificate_roundtrip(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, doc = run_json(capsys, "codes", "--builtin", "ledrappier", "--A", "(0,0),(1,0)",
                         "--target", "0,1", "--certificate", str(cert))
    assert code == 0 and doc["status"] == "Forced" and cert.exists()
    code, out, _ = run(capsys, "codes", "--replay", str(cert))
    assert code == 0 and out.startswith("CertificateVerified")


def test_not_forced_has_witness(capsys):
    code, doc = run_json(capsys, "codes", "--builtin", "ledrappier", "--A", "(0,0)", "--target", "1,0")
    assert code == 0 and doc["status"] == "NotForcedLocally"


def test_json_deterministic(capsys):
    argv = ["rays", "--builtin", "ledrappier", "--height", "2", "--radius", "6", "--json", "--no-timing"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_timing_present_by_default(capsys):
    code, out, _ = run(capsys, "count", "--builtin", "ledrappier", "--rect", "2x2", "--json")
    assert "wall_seconds" in json.loads(out)["timing"]


def test_budget_exhaustion(capsys, tmp_path):
    spec = tmp_path / "hs.json"
    spec.write_text(json.dumps(HARD_SQUARE), encoding="utf-8")
    code, doc = run_json(capsys, "entropy", str(spec), "--dir", "1,0", "--budget", "20000")
    assert code == 2 and doc["status"] == "BudgetExceeded"
    assert doc["partial_trace"] and doc["partial_trace"][0]["n"] == 8


def test_budget_from_environment(capsys, tmp_path, monkeypatch):
    spec = tmp_path / "hs.json"
    spec.write_text(json.dumps(HARD_SQUARE), encoding="utf-8")
    monkeypatch.setenv("SHIFTLAB_BUDGET", "50")
    code, doc = run_json(capsys, "count", str(spec), "--rect", "8x8")
    assert code == 2 and doc["parameters"]["budget"] == 50
    code, doc = run_json(capsys, "count", str(spec), "--rect", "8x8", "--budget", "100000")
    assert code == 0


def test_trivial_sphere(capsys):
    code, out, _ = run(capsys, "sphere", "--builtin", "one-letter", "--vertices", "(0,0),(1,0),(0,1)")
    assert code == 0 and out.strip() == "entropy norm is trivial"


def test_errors_exit_one(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"alphabet": {"modulus": 4},
                               "rule": {"type": "linear", "terms": [{"offset": [0, 0], "coeff": 1}]}}))
    code, out, err = run(capsys, "count", str(bad), "--rect", "2x2")
    assert code == 1 and out == "" and "modulus must be prime" in err
    code, doc = run_json(capsys, "count", str(bad), "--rect", "2x2")
    assert code == 1 and doc["location"] == "/alphabet/modulus"
    code, _, err = run(capsys, "count", "--builtin", "ledrappier", "--rect", "2by2")
    assert code == 1 and "rectangle" in err


def test_closing_and_recode(capsys, tmp_path):
    code, out, _ = run(capsys, "closing", "--builtin", "ledrappier", "--ray=-1,1")
    assert code == 0 and out.startswith("Closing(1)")
    target = tmp_path / "dom.json"
    code, _, _ = run(capsys, "recode", "--builtin", "ledrappier", "--window", "(0,0),(1,0)",
                     "--output", str(target))
    assert code == 0
    code, doc = run_json(capsys, "count", str(target), "--rect", "2x2")
    # the recoded 2x2 block stands for a 3x2 block of the source
    assert doc["result"]["count"] == "16"


def test_lightcone(capsys):
    code, doc = run_json(capsys, "lightcone", "--builtin", "ledrappier-spacetime", "--k-max", "4")
    assert code == 0
    code, out, _ = run(capsys, "lightcone", "--builtin", "ledrappier-spacetime", "--k-max", "4")
    assert any(line.startswith("alpha+:") for line in out.splitlines())
