import json
import subprocess
import sys

import pytest

from ncasolver import FlatBandParams, sample_flat_band, save_tabulated
from ncasolver.cli import main


def run_cli(*argv):
    return main(list(argv))


def base_config(tmp_path, **overrides):
    cfg = {
        "model": {"eps0": 1.0, "gamma_l": 0.5, "gamma_p": 0.5, "gamma_d": 0.5},
        "bath": {"kind": "flat_band", "eta": 1.0, "w": 10.0},
        "grid": {"dt": 0.02, "t_max": 2.0},
        "initial_state": {"basis_label": 0},
        "outputs": {"occupation": True, "spectrum": True, "states": True,
                    "out_dir": str(tmp_path / "out")},
    }
    for key, value in overrides.items():
        cfg[key] = value
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def test_run_writes_expected_files(tmp_path):
    path = base_config(tmp_path)
    assert run_cli("run", "--config", str(path)) == 0
    out = tmp_path / "out"
    occ = (out / "occupation.csv").read_text().splitlines()
    assert occ[0] == "t,n,trace_err"
    assert len(occ) == 1 + int(round(2.0 / 0.02)) + 1  # header + t_max/dt + 1 rows
    spec = (out / "spectrum.csv").read_text().splitlines()
    assert spec[0] == "t,abs_lambda_0,abs_lambda_1,abs_lambda_2,abs_lambda_3,unit_eig_err"
    assert (out / "states.csv").exists()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["solver_steps"] == 100
    assert summary["max_trace_err"] <= 1e-9
    assert summary["max_unit_eig_err"] <= 1e-6
    assert set(summary) == {
        "config_echo", "max_trace_err", "max_unit_eig_err",
        "min_state_eigenvalue", "n_final", "runtime_seconds", "solver_steps",
    }
    # no stray temp files from the atomic writes
    assert not list(out.glob("*.tmp"))


def test_run_fig3_preset(tmp_path):
    out = tmp_path / "fig3"
    assert run_cli("run", "--preset", "fig3", "--out-dir", str(out)) == 0
    occ = (out / "occupation.csv").read_text().splitlines()
    assert len(occ) == 1 + 501
    summary = json.loads((out / "summary.json").read_text())
    assert summary["max_unit_eig_err"] <= 1e-6


def test_run_is_deterministic(tmp_path):
    path = base_config(tmp_path)
    out = tmp_path / "out"
    assert run_cli("run", "--config", str(path)) == 0
    first = {f.name: f.read_bytes() for f in out.iterdir()}
    assert run_cli("run", "--config", str(path)) == 0
    second = {f.name: f.read_bytes() for f in out.iterdir()}
    for name in ("occupation.csv", "spectrum.csv", "states.csv"):
        assert first[name] == second[name]
    s1 = json.loads(first["summary.json"])
    s2 = json.loads(second["summary.json"])
    s1.pop("runtime_seconds")
    s2.pop("runtime_seconds")
    assert s1 == s2


def test_zero_dt_rejected(tmp_path, capsys):
    path = base_config(tmp_path, grid={"dt": 0.0, "t_max": 2.0})
    assert run_cli("run", "--config", str(path)) == 2
    record = json.loads(capsys.readouterr().err.strip())
    assert record["field"] == "grid.dt"


def test_unknown_field_rejected(tmp_path, capsys):
    path = base_config(tmp_path, model={"eps0": 1.0, "gamma_l": 0.5, "gamma_p": 0.5,
                                        "gamma_d": 0.5, "gamma_x": 1.0})
    assert run_cli("run", "--config", str(path)) == 2
    record = json.loads(capsys.readouterr().err.strip())
    assert record["field"] == "model.gamma_x"


def test_missing_bath_file(tmp_path, capsys):
    path = base_config(tmp_path, bath={"kind": "tabulated", "path": str(tmp_path / "nope.csv")})
    assert run_cli("run", "--config", str(path)) == 4
    record = json.loads(capsys.readouterr().err.strip())
    assert record["error"] == "ParseError"
    assert "nope.csv" in record["message"]
    # a failed run must not leave a partial summary behind
    assert not (tmp_path / "out" / "summary.json").exists()


def test_tabulated_bath_runs(tmp_path):
    table = sample_flat_band(FlatBandParams(1.0, 10.0), 0.02, 100)
    bath_path = tmp_path / "bath.csv"
    save_tabulated(table, bath_path)
    path = base_config(tmp_path, bath={"kind": "tabulated", "path": str(bath_path)})
    assert run_cli("run", "--config", str(path)) == 0
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["max_trace_err"] <= 1e-9


def test_sweep_markovian_flat(tmp_path, capsys):
    path = base_config(tmp_path, bath={"kind": "flat_band", "eta": 0.0, "w": 10.0},
                       grid={"dt": 0.02, "t_max": 10.0})
    assert run_cli("sweep", "--config", str(path), "--param", "eps0",
                   "--values=-2,0,2") == 0
    rows = (tmp_path / "out" / "sweep_eps0.csv").read_text().splitlines()
    assert rows[0] == "eps0,n_final,stationary_flag"
    for row in rows[1:]:
        _, n_final, flag = row.split(",")
        assert abs(float(n_final) - 0.5) < 1e-3
        assert flag == "true"


def test_sweep_eta_includes_markovian_point(tmp_path):
    path = base_config(tmp_path, grid={"dt": 0.02, "t_max": 10.0})
    assert run_cli("sweep", "--config", str(path), "--param", "eta", "--values", "0,1") == 0
    rows = (tmp_path / "out" / "sweep_eta.csv").read_text().splitlines()
    first = rows[1].split(",")
    assert float(first[0]) == 0.0
    assert abs(float(first[1]) - 0.5) < 1e-3


def test_sweep_empty_values(tmp_path):
    path = base_config(tmp_path)
    assert run_cli("sweep", "--config", str(path), "--param", "eta", "--values", "") == 0
    rows = (tmp_path / "out" / "sweep_eta.csv").read_text().splitlines()
    assert rows == ["eta,n_final,stationary_flag"]


def test_sweep_unknown_param(tmp_path, capsys):
    path = base_config(tmp_path)
    # argparse rejects out-of-choice parameters with usage exit code 2
    with pytest.raises(SystemExit) as err:
        run_cli("sweep", "--config", str(path), "--param", "gamma_l", "--values", "1")
    assert err.value.code == 2
    capsys.readouterr()


def test_sweep_jobs_equivalent(tmp_path):
    path = base_config(tmp_path, grid={"dt": 0.02, "t_max": 1.0})
    assert run_cli("sweep", "--config", str(path), "--param", "eta",
                   "--values", "0,0.5,1", "--jobs", "3") == 0
    parallel = (tmp_path / "out" / "sweep_eta.csv").read_text()
    assert run_cli("sweep", "--config", str(path), "--param", "eta",
                   "--values", "0,0.5,1") == 0
    assert (tmp_path / "out" / "sweep_eta.csv").read_text() == parallel


def test_converge_markovian_order(tmp_path):
    path = base_config(tmp_path, bath={"kind": "flat_band", "eta": 0.0, "w": 10.0},
                       grid={"dt": 0.04, "t_max": 4.0})
    assert run_cli("converge", "--config", str(path), "--dts", "0.04,0.02,0.01") == 0
    report = json.loads((tmp_path / "out" / "converge.json").read_text())
    assert report["order_defined"]
    assert 0.8 <= report["order"] <= 1.2


def test_converge_identical_dts_flagged(tmp_path):
    path = base_config(tmp_path, grid={"dt": 0.04, "t_max": 1.0})
    assert run_cli("converge", "--config", str(path), "--dts", "0.04,0.04,0.04") == 0
    report = json.loads((tmp_path / "out" / "converge.json").read_text())
    assert not report["order_defined"]
    assert report["order"] is None
    assert report["max_abs_differences"] == [0.0, 0.0]


def test_converge_incompatible_grids(tmp_path, capsys):
    path = base_config(tmp_path)
    assert run_cli("converge", "--config", str(path), "--dts", "0.04,0.03,0.02") == 2
    record = json.loads(capsys.readouterr().err.strip())
    assert record["field"] == "dts"


def test_oracle_zero_coupling_passes(tmp_path, capsys):
    path = base_config(tmp_path, bath={"kind": "flat_band", "eta": 0.0, "w": 10.0})
    assert run_cli("oracle", "--config", str(path), "--t", "0.5", "--quad-dt", "0.01") == 0
    assert "PASS" in capsys.readouterr().out
    report = json.loads((tmp_path / "out" / "oracle.json").read_text())
    assert report["pass"] is True
    assert report["max_rel_deviation"] == 0.0


def test_oracle_case_study_passes(tmp_path):
    path = base_config(tmp_path)
    assert run_cli("oracle", "--config", str(path), "--t", "0.5", "--quad-dt", "0.01") == 0
    report = json.loads((tmp_path / "out" / "oracle.json").read_text())
    assert report["pass"] is True
    assert report["max_rel_deviation"] < 1e-3


def test_oracle_time_beyond_horizon(tmp_path):
    path = base_config(tmp_path)
    assert run_cli("oracle", "--config", str(path), "--t", "5.0", "--quad-dt", "0.01") == 2


def test_module_entry_point(tmp_path):
    path = base_config(tmp_path, grid={"dt": 0.04, "t_max": 0.4})
    proc = subprocess.run(
        [sys.executable, "-m", "ncasolver", "run", "--config", str(path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "out" / "summary.json").exists()
