"""End-to-end tests of the command-line interface."""

import json
import math

import numpy as np
import pytest

from cpsurf.cli import main
from cpsurf.surface import canonical_chart


def run(args, capsys):
    code = main(args)
    return code, capsys.readouterr().out


def test_verify_golden_cp2(capsys):
    code, out = run(["verify", "--n", "3", "--composition", "1"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"]
    assert abs(rep["curvature"]["A"] - 4.0) < 1e-9
    assert abs(rep["curvature"]["K"] - 2.0) < 1e-9
    names = {c["name"] for c in rep["checks"]}
    assert {"idempotency", "euler_lagrange", "canonical_quadratic",
            "conformality"} <= names


def test_verify_golden_cp3(capsys):
    code, out = run(["verify", "--n", "4", "--composition", "1,2"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"]
    assert abs(rep["curvature"]["A"] - 6.0) < 1e-9
    assert abs(rep["curvature"]["K"] - 4.0 / 3.0) < 1e-9


def test_verify_custom_input_nonconstant(tmp_path, capsys):
    cfg = tmp_path / "f.json"
    cfg.write_text(json.dumps([[1], [0, 1], [0, 0, 0, 1]]))
    code, out = run(["verify", "--input", str(cfg)], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"]
    assert not rep["curvature"]["constant"]
    assert rep["curvature"]["spread"] > 1e-2


def test_sample_csv_schema(capsys):
    code, out = run(["sample", "--n", "2", "--composition", "0",
                     "--grid-res", "5", "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "# N=2 r=1 C=1"
    assert lines[1] == "xi_re,xi_im,X_1,X_12_plus,X_12_minus"
    assert len(lines) == 2 + 25
    for line in lines[2:]:
        vals = np.array([float(t) for t in line.split(",")])
        assert abs(vals[2:] @ vals[2:] - 1.0) < 1e-12


def test_sample_degenerate_resolution(capsys):
    code, out = run(["sample", "--n", "3", "--composition", "0",
                     "--grid-res", "2", "--format", "csv"], capsys)
    assert code == 0
    assert len(out.strip().split("\n")) == 2 + 4


def test_sample_row_at_origin(capsys):
    # P_1 at xi=0 projects onto the middle basis vector: diag (0, 1, 0)
    code, out = run(["sample", "--n", "3", "--composition", "1",
                     "--grid-radius", "1", "--grid-res", "3"], capsys)
    assert code == 0
    rep = json.loads(out)
    rows = np.array(rep["rows"])
    at0 = rows[np.all(rows[:, :2] == 0.0, axis=1)][0]
    chart = canonical_chart(3, 1)
    want = chart.A @ np.array([0.0, 1.0]) + chart.b
    assert np.max(np.abs(at0[2:4] - want)) < 1e-12
    assert np.max(np.abs(at0[4:])) < 1e-12


def test_sample_deterministic_bytes(tmp_path, capsys):
    args = ["sample", "--n", "3", "--composition", "0,1",
            "--grid-res", "7", "--seed", "3"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--threads", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sample_rejects_weighted(capsys):
    code, _ = run(["sample", "--n", "3", "--composition", "0,1",
                   "--weights", "1,2"], capsys)
    assert code == 2


def test_integrate_path_independent(capsys):
    code, out = run(["integrate", "--n", "4", "--composition", "0,1",
                     "--endpoint", "1"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["harmonic"] and rep["path_independent"]
    assert rep["max_disagreement"] < 1e-8


def test_report_writes_summary_and_figures(tmp_path, capsys):
    out = tmp_path / "rep.txt"
    code, _ = run(["report", "--n", "3", "--composition", "1",
                   "--out", str(out)], capsys)
    assert code == 0
    text = out.read_text()
    assert "overall: pass" in text
    assert "K = 2" in text
    for suffix in ("_curvature.png", "_metric.png", "_coords.png"):
        assert (tmp_path / ("rep" + suffix)).exists()


def test_config_errors_exit_2(capsys):
    assert run(["verify", "--n", "3", "--composition", "9"], capsys)[0] == 2
    assert run(["verify", "--n", "1"], capsys)[0] == 2
    assert run(["verify", "--n", "3", "--composition", "0,1",
                "--weights", "1"], capsys)[0] == 2
    assert run(["verify", "--input", "/nonexistent.json"], capsys)[0] == 2
    assert run(["sample", "--n", "3", "--grid-res", "1"], capsys)[0] == 2


def test_verify_deterministic_bytes(tmp_path):
    args = ["verify", "--n", "3", "--composition", "1", "--seed", "7"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
