"""End-to-end CLI runs: exit codes, output files, reproducibility."""

import csv
import json
import os

import pytest

from dotlink.cli import main


def run(tmp_path, sub, *extra, seed=None):
    argv = [sub, "--out", str(tmp_path)]
    if seed is not None:
        argv += ["--seed", str(seed)]
    argv += list(extra)
    return main(argv)


def read_json(tmp_path, name):
    with open(os.path.join(str(tmp_path), name)) as fh:
        return json.load(fh)


def read_rows(tmp_path, name):
    with open(os.path.join(str(tmp_path), name)) as fh:
        return list(csv.reader(fh))


def test_gate_run(tmp_path):
    assert run(tmp_path, "gate", "--trajectories") == 0
    rep = read_json(tmp_path, "gate_report.json")
    assert abs(rep["exposure_single_ps"] - 3.4) <= 0.34
    assert abs(rep["phi_cond_rad"] - 1.1722) <= 1e-3
    assert rep["adiabatic"] is True
    assert abs(rep["raman_gate_error"] - 1.0339e-3) <= 1e-6
    rows = read_rows(tmp_path, "gate_trajectories.csv")
    assert rows[0] == ["input", "time_ps", "excited_population"]
    assert {r[0] for r in rows[1:]} == {"single", "double"}
    manifest = read_json(tmp_path, "run_manifest.json")
    assert manifest["subcommand"] == "gate"
    assert len(manifest["config_hash"]) == 64
    assert "gate_report.json" in manifest["results"]


def test_tune_run_and_degenerate_field(tmp_path):
    assert run(tmp_path, "tune") == 0
    rep = read_json(tmp_path, "tune_report.json")
    assert abs(rep["photon_energies"]["sigma_plus_mev"] - 1650.11577) <= 1e-4
    assert abs(rep["control"]["db_max_mt"] - 1.73) <= 0.01
    assert abs(rep["control"]["dt_max_mk"] - 1.54) <= 0.01
    assert rep["plan"]["n_qubits"] == 2
    assert rep["photon_energies"]["degenerate"] is False
    assert run(tmp_path, "tune", "--set", "dot.b_field_t=0") == 0
    rep0 = read_json(tmp_path, "tune_report.json")
    assert rep0["photon_energies"]["degenerate"] is True


def test_link_run(tmp_path):
    assert run(tmp_path, "link", "--trials", "50000", seed=1) == 0
    rep = read_json(tmp_path, "link_report.json")
    assert rep["p_success"] == 0.03125
    assert abs(rep["mean_time_ms"] - 3.2) <= 1e-9
    assert abs(rep["mc_mean_ms"] - 3.2) / 3.2 <= 0.03
    assert abs(rep["overlap_error"] - 0.0082409) <= 1e-6
    assert abs(rep["dephasing_error"] - 1.0 / 101.0) <= 1e-12


def test_readout_run_and_bad_config(tmp_path, capsys):
    assert run(tmp_path, "readout", "--trials", "20000", seed=2) == 0
    rep = read_json(tmp_path, "readout_report.json")
    assert rep["n_shots"] == 20000
    assert 0.05 <= rep["eps_bright"] <= 0.15
    rows = read_rows(tmp_path, "readout_histogram.csv")
    assert rows[0] == ["counts", "probability_bright", "probability_dark"]
    assert len(rows) == 1 + 200 + 1
    # invalid shot count is a configuration error, not a crash
    assert run(tmp_path, "readout", "--set", "readout.n_shots=0") == 1
    assert "configuration error" in capsys.readouterr().err


def test_unknown_config_key_rejected(tmp_path, capsys):
    assert run(tmp_path, "gate", "--set", "drive.bogus=1") == 1
    assert "configuration error" in capsys.readouterr().err
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"not_a_section": {}}))
    assert main(["gate", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    assert "configuration error" in capsys.readouterr().err


def test_config_file_applies(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"drive": {"tau_ps": 8.0}}))
    out = tmp_path / "out"
    assert main(["gate", "--config", str(cfg), "--out", str(out)]) == 0
    rep = read_json(out, "gate_report.json")
    assert rep["drive"]["tau_ps"] == 8.0
    assert rep["exposure_single_ps"] < 3.0


def test_phonon_run_and_unattainable_budget(tmp_path, capsys):
    assert run(tmp_path, "phonon") == 0
    rep = read_json(tmp_path, "phonon_report.json")
    assert abs(rep["error_at_e_s"] - 1.16e-3) <= 1e-5
    assert abs(rep["min_separation_mev"] - 7.37) <= 0.05
    rows = read_rows(tmp_path, "phonon_table.csv")
    assert rows[0] == ["delta_mev", "spectral_density_per_ps", "phonon_error"]
    assert len(rows) == 1 + 59
    # impossible budget surfaces as a numerical failure
    assert run(tmp_path, "phonon", "--set", "phonon.error_budget=1e-40") == 2
    assert "numerical failure" in capsys.readouterr().err


def test_repeater_run(tmp_path):
    assert run(tmp_path, "repeater", "--trials", "400", "--per-trial",
               "--set", "chain.n_links=8", seed=3) == 0
    rep = read_json(tmp_path, "repeater_report.json")
    assert rep["n_links"] == 8
    assert rep["n_trials"] == 400
    rows = read_rows(tmp_path, "repeater_trials.csv")
    assert len(rows) == 1 + 400
    times = [float(r[1]) for r in rows[1:]]
    assert min(times) >= rep["period_ms"]


def test_sweep_monotone(tmp_path):
    assert run(tmp_path, "sweep", "--param", "phonon.e_s_mev",
               "--values", "5,7.5,10") == 0
    rows = read_rows(tmp_path, "sweep.csv")
    assert rows[0] == ["e_s_mev", "phonon_error"]
    errs = [float(r[1]) for r in rows[1:]]
    assert len(errs) == 3
    assert errs[0] > errs[1] > errs[2]


def test_sweep_bad_arguments(tmp_path, capsys):
    assert run(tmp_path, "sweep", "--param", "dot.e_t_mev",
               "--values", "1,2") == 1
    assert "validation error" in capsys.readouterr().err
    assert run(tmp_path, "sweep", "--param", "phonon.e_s_mev",
               "--values", "a,b") == 1


def test_reruns_byte_identical(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        assert main(["readout", "--trials", "20000", "--seed", "77",
                     "--out", str(out)]) == 0
        assert main(["repeater", "--trials", "200", "--seed", "77",
                     "--set", "chain.n_links=8", "--out", str(out)]) == 0
    for name in ("readout_report.json", "readout_histogram.csv",
                 "repeater_report.json"):
        a = (out_a / name).read_bytes()
        b = (out_b / name).read_bytes()
        assert a == b, name
    # the manifest alone carries timestamps
    ma = read_json(out_a, "run_manifest.json")
    mb = read_json(out_b, "run_manifest.json")
    assert ma["config_hash"] == mb["config_hash"]
    assert ma["seed"] == mb["seed"] == 77
