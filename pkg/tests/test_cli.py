import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from axisym_euler import cli
from axisym_euler.cli import Mode, RunSummary, main, parse_config, run
from axisym_euler.errors import ParseError, ValidationError


def write(tmp_path: Path, text: str) -> Path:
    p = tmp_path / "scenario.yaml"
    p.write_text(text)
    return p


# -- parsing -----------------------------------------------------------------------


def test_minimal_closed_form_config():
    cfg = parse_config("mode: closed-form\nlambda0: 1\nomega0: 0\nt: 1\n")
    assert cfg.mode is Mode.CLOSED_FORM and cfg.t == 1.0 and cfg.samples == 101


def test_mode_aliases_and_subcommand():
    assert parse_config("mode: ClosedForm\nlambda0: 1\nomega0: 0\nt: 1").mode is Mode.CLOSED_FORM
    assert parse_config("lambda0: 1\nomega0: 0\nhorizon: 1", "integrate").mode is Mode.INTEGRATE
    with pytest.raises(ValidationError) as e:
        parse_config("mode: integrate\nlambda0: 1\nomega0: 0\nhorizon: 1", "closed-form")
    assert e.value.field == "mode"


@pytest.mark.parametrize("text, field", [
    ("mode: pde-sim\nhorizon: 1\n", "grid"),
    ("mode: integrate\nlambda0: 1\nomega0: 0\nhorizon: -1\n", "horizon"),
    ("mode: integrate\nlambda0: .nan\nomega0: 0\nhorizon: 1\n", "lambda0"),
    ("mode: integrate\nlambda0: 1\nomega0: 0\nhorizon: 1\nhorizn: 2\n", "horizn"),
    ("mode: pde-sim\nhorizon: 1\ngrid: {nr: 8, nz: 32}\n", "grid.nr"),
    ("mode: integrate\nlambda0: 1\nomega0: 0\nhorizon: 1\nforcing: {type: magic}\n", "forcing.type"),
    ("mode: check-lemma\nfields: [nope]\n", "fields"),
    ("mode: pde-sim\nhorizon: 1\ngrid: {nr: 32, nz: 32}\ninitial: {psi: {type: spiral}}\n", "initial.psi.type"),
    ("lambda0: 1\n", "mode"),
])
def test_validation_names_field(text, field):
    with pytest.raises(ValidationError) as e:
        parse_config(text)
    assert e.value.field == field


def test_parse_error_reports_line():
    with pytest.raises(ParseError, match="line 3"):
        parse_config("mode: integrate\nlambda0: 1\nomega0: 0: 1\n")
    with pytest.raises(ParseError):
        parse_config("- just\n- a list\n")


def test_thread_env_validated(monkeypatch):
    monkeypatch.setenv("AXISYM_THREADS", "0")
    with pytest.raises(ValidationError):
        cli.thread_count()
    monkeypatch.setenv("AXISYM_THREADS", "3")
    assert cli.thread_count() == 3


# -- running -----------------------------------------------------------------------


def test_integrate_blowup_exit_code(tmp_path, capsys):
    cfg = write(tmp_path, "mode: integrate\nlambda0: 2\nomega0: 0\nhorizon: 10\n")
    code = main(["integrate", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert code == 2
    s = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert s["terminal_status"] == "BlowUpDetected"
    assert s["t_blow_predicted"] == 1.0
    assert s["t_blow_observed"] == pytest.approx(1.0, abs=1e-6)
    assert s["t_blow_relative_difference"] <= 1e-6
    header = (tmp_path / "o" / "trajectory.csv").read_text().splitlines()[0]
    assert header == "t,x3,lambda,omega_bar,q"
    assert "BlowUpDetected" in capsys.readouterr().out


def test_integrate_hypothesis_violation_time(tmp_path):
    cfg = parse_config("mode: integrate\nlambda0: 0.5\nomega0: 0.2\nhorizon: 4\n"
                       "forcing: {type: table, t: [0, 1, 2, 3, 4], q: [0.2, 0.1, -0.1, -0.2, 0.0]}\n")
    cfg.out = tmp_path
    s = run(cfg)
    assert s.exit_code == 0
    t = np.loadtxt(tmp_path / "trajectory.csv", delimiter=",", skiprows=1)
    q = t[:, 4]
    assert s.t_hypothesis_violated == t[np.argmax(q < 0), 0]
    assert 1.0 < s.t_hypothesis_violated < 2.0


def test_closed_form_mode(tmp_path):
    cfg = write(tmp_path, "mode: closed-form\nlambda0: 1\nomega0: 0\nt: 1\nsamples: 11\n")
    assert main(["closed-form", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    rows = np.loadtxt(tmp_path / "closed_form.csv", delimiter=",", skiprows=1)
    assert rows[-1].tolist() == [1.0, 2.0, 0.0]
    cfg = write(tmp_path, "mode: closed-form\nlambda0: 2\nomega0: 0\nt: 2\n")
    assert main(["closed-form", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_check_lemma_default_suite(tmp_path):
    assert main(["check-lemma", "--out", str(tmp_path)]) == 0
    s = json.loads((tmp_path / "summary.json").read_text())
    assert s["terminal_status"] == "Passed"
    assert s["details"]["min_order"] is None or s["details"]["min_order"] >= 1.7
    assert (tmp_path / "lemma_orders.csv").exists()


def test_check_lemma_failure_exit_code(tmp_path):
    cfg = write(tmp_path, "mode: check-lemma\nfields: [gaussian]\nmin_order: 2.5\n")
    assert main(["check-lemma", "--config", str(cfg), "--out", str(tmp_path)]) == 1


def test_pde_sim_short_run(tmp_path, capsys):
    cfg = write(tmp_path, "mode: pde-sim\ngrid: {nr: 32, nz: 32}\nhorizon: 0.1\ndt: 0.02\nparticles: [1.0]\n")
    assert main(["pde-sim", "--config", str(cfg), "--out", str(tmp_path / "o"), "--format", "binary"]) == 0
    out = capsys.readouterr().out
    assert "transverse_strain" in out and "trace" in out
    o = tmp_path / "o"
    assert (o / "axis_diagnostics.csv").read_text().splitlines()[0] == "t,z,lambda,omega_bar,q_rr,p_33"
    snaps = sorted((o / "snapshots").glob("*.npz"))
    assert len(snaps) == 6
    with np.load(snaps[0]) as z:
        assert set(z.files) == {"t", "r", "z", "omega_theta", "v_theta", "psi", "p"}
    rows = np.loadtxt(o / "consistency.csv", delimiter=",", skiprows=1)
    assert rows.shape == (4, 11)


def test_csv_snapshots(tmp_path):
    cfg = parse_config("mode: pde-sim\ngrid: {nr: 16, nz: 16}\nhorizon: 0.05\ndt: 0.05\n")
    cfg.out = tmp_path
    run(cfg)
    lines = (tmp_path / "snapshots" / "snapshot_00001.csv").read_text().splitlines()
    assert lines[0] == "r,z,omega_theta,v_theta,psi,p"
    assert len(lines) == 1 + 17 * 16


def test_outputs_are_byte_identical(tmp_path):
    text = "mode: pde-sim\ngrid: {nr: 16, nz: 16}\nhorizon: 0.1\ndt: 0.025\n"
    for d in ("a", "b"):
        cfg = parse_config(text)
        cfg.out = tmp_path / d
        run(cfg)
    for name in ("axis_diagnostics.csv", "consistency.csv", "summary.json", "snapshots/snapshot_00002.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_summary_json_round_trip(tmp_path):
    cfg = parse_config("mode: integrate\nlambda0: 1\nomega0: 0.3\nhorizon: 2\n")
    cfg.out = tmp_path
    s = run(cfg)
    back = json.loads((tmp_path / "summary.json").read_text())
    assert back == s.to_dict()
    assert back["max_residuals"]["invariant_drift"] == s.max_residuals["invariant_drift"]
    assert back["details"]["final_lambda"] == s.details["final_lambda"]


def test_summary_relative_difference_and_nonfinite():
    s = RunSummary("integrate", "BlowUpDetected", 2.0, 1.98, details={"x": float("inf")})
    assert s.t_blow_relative_difference == pytest.approx(0.01)
    assert s.to_dict()["details"]["x"] is None
    assert s.exit_code == 2


def test_error_exit_code(tmp_path, capsys):
    cfg = write(tmp_path, "mode: pde-sim\nhorizon: 1\n")
    assert main(["pde-sim", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    assert "grid" in capsys.readouterr().err


def test_module_entry_point_help():
    out = subprocess.run([sys.executable, "-m", "axisym_euler", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "closed-form" in out.stdout and "AXISYM_THREADS" in out.stdout
