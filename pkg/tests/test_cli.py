from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from nablalaplace.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_transform_grid_csv(capsys):
    code, out, _ = run(["transform", "--signal", "step", "--a", "1.5"], capsys)
    assert code == 0
    r = rows(out)
    assert list(r[0]) == ["re_s", "im_s", "re_X", "im_X"]
    assert len(r) == 32
    for row in r:
        s = complex(float(row["re_s"]), float(row["im_s"]))
        X = complex(float(row["re_X"]), float(row["im_X"]))
        assert abs(X - 1 / s) < 1e-9 * abs(1 / s)


def test_transform_from_signal_file(tmp_path, capsys):
    path = tmp_path / "x.csv"
    path.write_text("# base=0.0\nk,re,im\n1,1.0,0.0\n2,0.5,0.0\n")
    code, out, _ = run(["transform", "--input", str(path), "--s", "0.5,0"], capsys)
    assert code == 0
    assert float(rows(out)[0]["re_X"]) == pytest.approx(1.25)


def test_invert_writes_series_and_contour_report(tmp_path, capsys):
    code, out, _ = run(
        ["invert", "--transform", "ml", "--alpha", "0.5", "--lambda=-0.5,0", "--a", "3", "--horizon", "20",
         "--out", str(tmp_path)],
        capsys,
    )
    assert code == 0
    r = rows((tmp_path / "invert.csv").read_text())
    assert list(r[0]) == ["k", "re_x", "im_x"]
    assert float(r[0]["k"]) == 4.0
    assert float(r[0]["re_x"]) == pytest.approx(1 / 1.5)
    meta = json.loads((tmp_path / "invert_contour.json").read_text())
    assert set(meta) == {"rho", "N", "converged"}


def test_invert_json_has_contour_schema(capsys):
    code, out, _ = run(["invert", "--transform", "step", "--horizon", "4", "--format", "json"], capsys)
    data = json.loads(out)
    assert {"rho", "N", "converged", "value"} <= set(data)
    np.testing.assert_allclose(np.array(data["value"])[:, 0], 1.0, atol=1e-12)


def test_dml_and_simulate_agree(capsys):
    args = ["--alpha", "0.5", "--lambda=-0.5", "--a", "3", "--horizon", "30"]
    _, dml_out, _ = run(["dml", *args], capsys)
    _, sim_out, _ = run(["simulate", "--kind", "caputo", *args], capsys)
    d = np.array([float(r["re_x"]) for r in rows(dml_out)])
    x = np.array([float(r["re_x"]) for r in rows(sim_out)])
    np.testing.assert_allclose(d, x, atol=1e-10)


def test_stability_json_schema(tmp_path, capsys):
    code, out, _ = run(["stability", "--rhos", "0.9,1.1", "--thetas", "0", "--horizon", "200", "--out", str(tmp_path)],
                       capsys)
    assert code == 0
    data = json.loads((tmp_path / "stability.json").read_text())
    assert [d["class"] for d in data] == ["unstable", "stable"]
    for d in data:
        assert {"rho", "theta", "class", "max_abs", "final_abs"} <= set(d)


def test_realize_csv(capsys):
    code, out, _ = run(["realize", "--alpha", "0.5", "--horizon", "10", "--nodes", "256"], capsys)
    assert code == 0
    r = rows(out)
    assert max(float(x["rel_err"]) for x in r) < 5e-3


def test_config_file_defaults_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# Caputo example\nalpha = 0.5\nlambda = -0.5, 0\nhorizon = 6\nkind = caputo\n")
    _, out, _ = run(["simulate", "--config", str(cfg)], capsys)
    assert len(rows(out)) == 6
    _, out, _ = run(["simulate", "--config", str(cfg), "--horizon", "2"], capsys)
    assert len(rows(out)) == 2


@pytest.mark.parametrize(
    "text, needle",
    [
        ("alpha = 0.5\nbogus = 1\n", ":2: unknown key 'bogus'"),
        ("alpha = half\n", ":1: bad value for alpha"),
        ("alpha 0.5\n", ":1: expected 'key = value'"),
        ("\n\nkind = euler\n", ":3: kind must be one of"),
        ("horizon = -3\n", ":1: bad value for horizon"),
    ],
)
def test_config_errors_name_file_and_line(tmp_path, capsys, text, needle):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    code, _, err = run(["simulate", "--config", str(cfg)], capsys)
    assert code == 2
    assert str(cfg) + needle in err


def test_library_errors_become_exit_code_2(capsys):
    code, _, err = run(["dml", "--alpha", "0.5", "--lambda", "1.5"], capsys)
    assert code == 2
    assert "DivergenceError" in err


def test_verify_single_property(tmp_path, capsys):
    code, out, _ = run(["verify", "T6", "--trials", "5", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert out.splitlines()[0].split() == ["id", "trials", "max_abs", "max_rel", "tol", "result"]
    report = json.loads((tmp_path / "verify_report.json").read_text())
    assert report["all_passed"] is True
    assert report["reports"][0]["property_id"] == "T6"


def test_verify_failure_sets_exit_code(tmp_path, capsys):
    code, out, _ = run(["verify", "L14", "--out", str(tmp_path)], capsys)
    report = json.loads((tmp_path / "verify_report.json").read_text())
    assert (code == 0) == report["all_passed"]


def test_example_ex1(tmp_path, capsys):
    code, out, _ = run(["example", "ex1", "--out", str(tmp_path)], capsys)
    assert code == 0
    summary = json.loads(out)
    assert summary["pass"] is True
    assert (tmp_path / "ex1_step_transform.csv").exists()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "nablalaplace", "dml", "--alpha", "0.5", "--lambda", "0.2", "--horizon", "2"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout.splitlines()[0] == "k,re_x,im_x"
