import csv
import io
import json
import math

import jsonschema
import numpy as np
import pytest
from hypothesis import given, strategies as st

from rcircles import serialize as ser
from rcircles.cli import RunConfig, UsageError, circle_params, main
from rcircles.suites import build_model

MODELS = ["sphere:2", "grassmann:R:2", "grassmann:C:2", "grassmann:H:2", "isotropic:c_hermitian:2",
          "isotropic:h_skew_hermitian:2", "classical:U:2", "classical:SO:2", "classical:Sp:1", "quadric:5"]
E1E2 = {"u": [1.0, 0.0, 0.0, 0.0], "v": [0.0, 1.0, 0.0, 0.0]}
E2E1 = {"u": [0.0, 1.0, 0.0, 0.0], "v": [1.0, 0.0, 0.0, 0.0]}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sphere_orthonormal_triple_record_count(capsys):
    code, out, _ = run(capsys, "circle", "--model", "sphere:2", "--points", "[[1,0,0],[0,1,0],[0,0,1]]",
                       "--samples", "8")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, ser.CIRCLE_SCHEMA)
    assert len(doc["samples"]) == 9
    assert doc["samples"][-1] == {"t": "inf", "point": [0.0, 0.0, 1.0]}


def test_quadric_first_sample_is_e1_e2(capsys):
    triple = json.dumps([E1E2, {"u": [0.6, 0, 0.8, 0], "v": [0, 0, 0, 1]}, E2E1])
    code, out, _ = run(capsys, "circle", "--model", "quadric:4", "--points", triple)
    assert code == 0
    doc = json.loads(out)
    assert doc["samples"][0]["t"] == 0.0
    assert doc["samples"][0]["point"] == E1E2


@pytest.mark.parametrize("model", MODELS)
@pytest.mark.parametrize("command", ["circle", "geodesic", "prevalent"])
def test_json_schema_and_determinism(tmp_path, model, command):
    files = [tmp_path / f"{k}.json" for k in range(2)]
    for f in files:
        assert main([command, "--model", model, "--seed", "11", "--samples", "6", "--out", str(f)]) == 0
    a, b = (f.read_bytes() for f in files)
    assert a == b
    doc = json.loads(a.decode("utf-8"))
    jsonschema.validate(doc, ser.SCHEMAS[command])
    if command == "geodesic":
        assert doc["max_gap"] < 1e-8


@pytest.mark.parametrize("model", MODELS)
def test_points_roundtrip_through_cli(tmp_path, capsys, model):
    code, out, _ = run(capsys, "circle", "--model", model, "--seed", "5", "--samples", "3")
    assert code == 0
    first = json.loads(out)
    src = tmp_path / "pts.json"
    src.write_text(json.dumps(first["defining_points"]), encoding="utf-8")
    code, out2, _ = run(capsys, "circle", "--model", model, "--points", f"@{src}", "--samples", "3")
    assert code == 0
    second = json.loads(out2)
    m = build_model(model)
    for r1, r2 in zip(first["samples"], second["samples"]):
        assert r1["t"] == r2["t"]
        d = m.distance(ser.decode_point(m, r1["point"]), ser.decode_point(m, r2["point"]))
        assert d < 1e-9


def test_csv_header_and_columns(capsys):
    code, out, _ = run(capsys, "circle", "--model", "grassmann:C:2", "--samples", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["index", "t", "point"]
    assert len(rows) == 6 and rows[-1][1] == "inf"
    jsonschema.validate(json.loads(rows[1][2]), ser.MATRIX_SCHEMA)
    code, out, _ = run(capsys, "angles", "--format", "csv")
    assert list(csv.reader(io.StringIO(out)))[0] == ser.CSV_HEADERS["angles"]


def test_angles_examples(capsys):
    code, out, _ = run(capsys, "angles", "--points", json.dumps([E1E2, E2E1]))
    doc = json.loads(out)
    jsonschema.validate(doc, ser.ANGLES_SCHEMA)
    assert code == 0 and doc["opposite"] is True
    assert doc["alpha"] == pytest.approx(0.0, abs=1e-12) and doc["beta"] == pytest.approx(math.pi, abs=1e-12)
    code, out, _ = run(capsys, "angles", "--points", json.dumps([E1E2, E1E2]))
    doc = json.loads(out)
    assert (doc["alpha"], doc["beta"], doc["opposite"]) == (0.0, 0.0, False)


def test_check_reports(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["check", "prevalence-equiv", "--trials", "3", "--seed", "1", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, ser.REPORT_SCHEMA)
    assert doc["passed"] and doc["trials"] == len(doc["results"])
    code, _, _ = run(capsys, "check", "circle-geodesic", "--trials", "1", "--tol-eq", "1e-20")
    assert code != 0


def test_exit_codes(capsys):
    assert run(capsys, "check", "nope")[0] == 2
    assert run(capsys, "circle", "--points", "[[1,0,0]")[0] == 2
    assert run(capsys, "circle", "--points", "[[1,0],[0,1,0],[0,0,1]]")[0] == 2
    assert run(capsys, "circle", "--model", "torus:2")[0] == 2
    assert run(capsys, "circle", "--samples", "1")[0] == 2
    assert run(capsys, "angles", "--points", '[{"u": [1, 0, 0], "v": [0, 1, 0]}, {"u": [1, 0, 0], "v": [0, 1, 0]}]')[0] == 2
    code, _, err = run(capsys, "circle", "--points", "[[1,0,0],[0,1,0],[1,0,0]]")
    assert code == 3 and "p, q" in err
    code, _, err = run(capsys, "circle", "--model", "quadric:4", "--points", json.dumps([E1E2, E2E1, E2E1]))
    assert code == 3 and "P1, Q" in err
    assert run(capsys, "--help")[0] == 0


def test_prevalent_with_explicit_input(capsys):
    m = build_model("grassmann:R:2")
    P, Q = m.standard_pair()
    doc = {"p": ser.encode_point(m, P), "q": ser.encode_point(m, Q),
           "y": ser.encode_algebra_element(m, m.qperp_block(np.diag([1.0, 0.0])))}
    code, out, _ = run(capsys, "prevalent", "--model", "grassmann:R:2", "--points", json.dumps(doc))
    res = json.loads(out)
    assert code == 0 and res["agree"] and not res["is_prevalent"]


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig("circle", samples=1)
    with pytest.raises(UsageError):
        RunConfig("circle", fmt="xml")


@given(st.integers(2, 200))
def test_circle_params(N):
    ts = circle_params(N)
    assert len(ts) == N + 1 and ts[0] == 0.0 and math.isinf(ts[-1])
    assert all(math.isfinite(t) for t in ts[:-1]) and len(set(ts)) == N + 1


@given(st.sampled_from(["R", "C", "H"]), st.integers(0, 2**32 - 1))
def test_matrix_encoding_roundtrip(F, seed):
    from rcircles.scalars import random_matrix
    M = random_matrix(np.random.default_rng(seed), 3, 2, F)
    enc = ser.encode_matrix(M, F)
    jsonschema.validate(enc, ser.MATRIX_SCHEMA)
    assert (enc["rows"], enc["cols"]) == (3, 2)
    field, back = ser.decode_matrix(json.loads(json.dumps(enc)))
    assert field.value == F and np.array_equal(back, M)


def test_documented_schema_file_is_current():
    from pathlib import Path
    doc = json.loads((Path(__file__).parent.parent / "docs" / "schema.json").read_text(encoding="utf-8"))
    assert doc["commands"] == json.loads(json.dumps(ser.SCHEMAS))
    assert doc["csv_headers"] == ser.CSV_HEADERS
