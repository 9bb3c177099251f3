import csv
import json

import pytest

from diamond_wiretap import cli
from diamond_wiretap.analysis import error_prob_mc, estimate_rate
from diamond_wiretap.dof import ds_full


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _run(*argv):
    return cli.main([str(a) for a in argv])


def test_dof_table_grid(tmp_path):
    out = tmp_path / "t.csv"
    assert _run("dof-table", "--alphas", "0,0.5,1", "--out", out) == 0
    rows = _rows(out)
    assert len(rows) == 9
    assert list(rows[0]) == cli.COLUMNS["dof-table"]
    for r in rows:
        assert float(r["ds_upper"]) == ds_full(float(r["alpha1"]), float(r["alpha2"]))
    manifest = json.loads(out.with_suffix(".json").read_text())
    assert manifest["command"] == "dof-table" and manifest["rows"] == 9
    assert manifest["version"].startswith("0.1.0")


def test_dof_table_grid_range(tmp_path):
    out = tmp_path / "t.csv"
    assert _run("dof-table", "--grid", "0,1.5,0.01", "--symmetric", "--M", 4, "--out", out) == 0
    rows = _rows(out)
    assert len(rows) == 151 and rows[-1]["alpha1"] == "1.5"


def test_plan_scheme5_corner(tmp_path):
    out = tmp_path / "p.csv"
    assert _run("plan", "--csi", "no_eve", "--alpha1", 1, "--alpha2", 1, "--out", out) == 0
    rows = _rows(out)
    assert [(r["scheme"], float(r["fraction"])) for r in rows] == [("S5", 1.0)]
    assert json.loads(out.with_suffix(".json").read_text())["summary"]["achieved_ds"] == 1.0


def test_plan_multi_relay(tmp_path):
    out = tmp_path / "p.csv"
    assert _run("plan", "--M", 3, "--alpha", 0.2222222222222222, "--csi", "no_eve",
                "--out", out) == 0
    assert [r["scheme"] for r in _rows(out)] == ["BCJ(0)", "BCJ(1)", "BCJ(2)"]


def test_empty_power_list_is_config_error(tmp_path, capsys):
    assert _run("simulate", "--P-list", "", "--out", tmp_path / "s.csv") == 1
    assert "P_list" in capsys.readouterr().err
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"P_list": []}))
    assert _run("simulate", "--config", cfg) == 1


@pytest.mark.parametrize("argv,field", [
    (["simulate", "--delta", "1.5"], "delta"),
    (["simulate", "--scheme", "S9"], "scheme"),
    (["simulate", "--scheme", "CJ"], "scheme"),
    (["dof-table", "--csi", "full"], "alphas"),
    (["dof-table", "--alphas", "0,-1"], "alphas"),
    (["plan", "--alpha1", "0.3"], "alpha2"),
    (["oracle", "--Pmax", "5000"], "Pmax"),
    (["slope", "--input", "/nonexistent.csv"], "input"),
])
def test_config_errors_name_the_field(argv, field, tmp_path, capsys):
    assert cli.main(argv + ["--out", str(tmp_path / "x.csv")]) == 1
    assert field in capsys.readouterr().err


def test_bad_config_files(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run("plan", "--config", bad) == 1
    bad.write_text(json.dumps({"alphaa": 1}))
    assert _run("plan", "--config", bad) == 1
    assert "alphaa" in capsys.readouterr().err
    assert _run("plan", "--no-such-flag") == 1
    assert _run() == 1


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "c.json"
    out = tmp_path / "p.csv"
    cfg.write_text(json.dumps({"csi": "full", "alpha1": 0.2, "alpha2": 0.1, "out": str(out)}))
    assert _run("plan", "--config", cfg) == 0
    assert {r["scheme"] for r in _rows(out)} == {"S1", "S4", "silence"}
    assert _run("plan", "--config", cfg, "--csi", "no_eve") == 0
    assert {r["scheme"] for r in _rows(out)} == {"S4", "S4*", "silence"}
    assert json.loads(out.with_suffix(".json").read_text())["config"]["csi"] == "no_eve"


def test_simulate_is_reproducible_and_recomputable(tmp_path):
    args = ["simulate", "--scheme", "S3", "--P-list", "1e3,1e4,1e5", "--n-fades", 4,
            "--trials", 3000, "--seed", 5]
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert _run(*args, "--out", a) == 0
    assert _run(*args, "--out", b) == 0
    assert _run(*args, "--jobs", 3, "--out", c) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()
    manifest = json.loads(a.with_suffix(".json").read_text())
    assert manifest["seed"] == 5 and manifest["config"]["n_fades"] == 4
    for r in _rows(a):
        rec = estimate_rate(r["scheme"], float(r["P"]), float(r["delta"]), int(r["n_fades"]),
                            int(r["seed"]), L=float(r["L"]), M=int(r["M"]))
        assert r["rate_lb"] == format(rec.rate_lb, ".12g")
        ser = error_prob_mc(r["scheme"], float(r["P"]), float(r["delta"]),
                            int(r["n_trials"]), int(r["seed"]))
        assert r["ser"] == format(ser, ".12g")


def test_slope_over_simulate_output(tmp_path):
    sim = tmp_path / "s.csv"
    assert _run("simulate", "--scheme", "S5", "--P-list", "1e3,1e4,1e5,1e6", "--n-fades", 2,
                "--trials", 0, "--out", sim) == 0
    out = tmp_path / "slope.csv"
    assert _run("slope", "--input", sim, "--out", out) == 0
    rows = {r["quantity"]: float(r["slope"]) for r in _rows(out)}
    assert 0.6 <= rows["rate_lb"] <= 1.0 and rows["I_eve"] <= 0.2


def test_runtime_error_exit_code(tmp_path, capsys):
    sim = tmp_path / "s.csv"
    assert _run("simulate", "--scheme", "S5", "--P-list", "1e3,1e4", "--n-fades", 1,
                "--trials", 0, "--out", sim) == 0
    assert _run("slope", "--input", sim, "--out", tmp_path / "x.csv") == 2
    assert "runtime error" in capsys.readouterr().err


def test_oracle_command(tmp_path):
    out = tmp_path / "o.csv"
    assert _run("oracle", "--instances", 20, "--out", out) == 0
    assert all(r["violation"] == "0" for r in _rows(out))
    summary = json.loads(out.with_suffix(".json").read_text())["summary"]
    assert summary["violations"] == 0
    assert summary["floor_preimage"]["0.5"]["max_multiplicity"] == 2
