"""Command-line entry point: config-driven runs with deterministic outputs.

Every subcommand loads the same JSON configuration (all sections optional,
defaults apply), runs one module, and writes JSON/CSV results plus a run
manifest into the output directory.  Result files depend only on config and
seed; timestamps live in the manifest alone, so reruns are byte-identical.

Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
import tempfile
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .config import ExperimentConfig, derive_rng, load_config
from .dotmodel import (addressing_plan, control_precision, dipole_dipole_energy,
                       photon_energies, varshni_shift, varshni_slope)
from .gatesim import simulate_conditional_gate, raman_gate_error
from .phonon import min_separation, model_from_dot, phonon_error, spectral_density
from .photonlink import (bsa_coincidence, dephasing_error, link_attempt_stats,
                         overlap_error_small_mismatch, photon_efficiency,
                         sample_link_times, wavepacket_overlap_error)
from .readout import simulate_readout
from .repeater import simulate_chain

SUBCOMMANDS = ("gate", "phonon", "link", "readout", "repeater", "tune", "sweep")


def _atomic_write(path: str, text: str):
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(outdir: str, name: str, payload: dict) -> str:
    path = os.path.join(outdir, name)
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return name


def _write_csv(outdir: str, name: str, header: list[str], rows) -> str:
    path = os.path.join(outdir, name)
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return name


def run_gate(cfg: ExperimentConfig, outdir: str, args) -> list[str]:
    gamma = 1.0 / cfg.dot.t_rad_ps
    report = simulate_conditional_gate(cfg.drive, cfg.gate.e_dd_mev,
                                       gamma_per_ps=gamma, tol=cfg.gate.tol)
    payload = {
        "e_dd_mev": report.e_dd_mev,
        "gamma_per_ps": report.gamma_per_ps,
        "drive": dataclasses.asdict(cfg.drive),
        "phi_cond_rad": report.phi_cond_rad,
        "phases_rad": report.phases_rad,
        "exposure_single_ps": report.exposure_single_ps,
        "exposures_ps": report.exposures_ps,
        "eps_spont": report.eps_spont,
        "eps_spont_avg": report.eps_spont_avg,
        "eps_spont_lindblad": report.eps_spont_lindblad,
        "adiabatic": report.adiabatic,
        "end_excited_max": report.end_excited_max,
        "norm_drift": report.norm_drift,
        "raman_gate_error": raman_gate_error(cfg.raman),
    }
    written = [_write_json(outdir, "gate_report.json", payload)]
    if args.trajectories:
        rows = []
        for label, weights in (("single", {1: 1.0}), ("double", None)):
            traj = report.trajectories[label]
            if weights is None:
                weights = {i: (2.0 if i == 3 and traj.states[0].dim == 4 else 1.0)
                           for i in range(1, traj.states[0].dim)}
            excited = np.zeros(len(traj.times))
            for idx, w in weights.items():
                excited += w * traj.populations(idx)
            rows.extend((label, f"{t:.6f}", f"{p:.9e}")
                        for t, p in zip(traj.times, excited))
        written.append(_write_csv(outdir, "gate_trajectories.csv",
                                  ["input", "time_ps", "excited_population"], rows))
    print(f"phi_cond = {report.phi_cond_rad:.6f} rad, "
          f"single-dot exposure = {report.exposure_single_ps:.4f} ps, "
          f"eps_spont = {report.eps_spont:.4%}")
    return written


def run_phonon(cfg: ExperimentConfig, outdir: str, args) -> list[str]:
    ps = cfg.phonon
    model = model_from_dot(cfg.dot, cfg.material, order=ps.order)
    grid = np.arange(ps.delta_min_mev, ps.delta_max_mev + ps.delta_step_mev / 2,
                     ps.delta_step_mev)
    rows = []
    for delta in grid:
        j = spectral_density(model, float(delta))
        eps = phonon_error(model, cfg.drive, float(delta))
        rows.append((f"{delta:.4f}", f"{j:.9e}", f"{eps:.9e}"))
    table = _write_csv(outdir, "phonon_table.csv",
                       ["delta_mev", "spectral_density_per_ps", "phonon_error"],
                       rows)
    payload = {
        "material": cfg.material.name,
        "order": ps.order,
        "e_s_mev": ps.e_s_mev,
        "j_at_e_s_per_ps": spectral_density(model, ps.e_s_mev),
        "error_at_e_s": phonon_error(model, cfg.drive, ps.e_s_mev),
        "pulse_sq_integral_rad2_ps": cfg.drive.omega_sq_integral(),
        "error_budget": ps.error_budget,
        "min_separation_mev": min_separation(model, cfg.drive, ps.error_budget),
    }
    written = [_write_json(outdir, "phonon_report.json", payload), table]
    print(f"phonon error at {ps.e_s_mev} meV = {payload['error_at_e_s']:.4e}, "
          f"min separation for {ps.error_budget} = {payload['min_separation_mev']:.2f} meV")
    return written


def run_link(cfg: ExperimentConfig, outdir: str, args) -> list[str]:
    budget = cfg.link.budget()
    t_rad = cfg.dot.t_rad_ps
    stats = link_attempt_stats(budget, t_rad)
    n = args.trials or 100_000
    rng = derive_rng(cfg.seed, "link")
    times = sample_link_times(budget, t_rad, n, rng)
    payload = {
        "eta_per_photon": photon_efficiency(budget, t_rad),
        "p_success": stats["p_success"],
        "period_ms": stats["period_ms"],
        "mean_time_ms": stats["mean_time_ms"],
        "mc_mean_ms": float(np.mean(times)),
        "mc_se_ms": float(np.std(times, ddof=1) / math.sqrt(n)),
        "n_trials": n,
        "overlap_error": wavepacket_overlap_error(cfg.link.delta_e_uev, t_rad),
        "overlap_error_leading_order": overlap_error_small_mismatch(
            cfg.link.delta_e_uev, t_rad),
        "dephasing_error": dephasing_error(t_rad, cfg.link.t_deph_ps),
        "coincidence_psi_minus": bsa_coincidence(
            "psi_minus", cfg.link.delta_e_uev, t_rad).coincidence,
        "coincidence_psi_plus": bsa_coincidence(
            "psi_plus", cfg.link.delta_e_uev, t_rad).coincidence,
    }
    written = [_write_json(outdir, "link_report.json", payload)]
    print(f"P_success = {payload['p_success']:.5f}, "
          f"mean link time = {payload['mean_time_ms']:.3f} ms "
          f"(MC {payload['mc_mean_ms']:.3f} ms)")
    return written


def run_readout(cfg: ExperimentConfig, outdir: str, args) -> list[str]:
    rcfg = cfg.readout
    if args.trials:
        rcfg = dataclasses.replace(rcfg, n_shots=args.trials)
    report = simulate_readout(rcfg, derive_rng(cfg.seed, "readout"))
    payload = {
        "eps_bright": report.eps_bright,
        "eps_bright_se": report.eps_bright_se,
        "eps_dark": report.eps_dark,
        "eps_dark_se": report.eps_dark_se,
        "poisson_limit": report.poisson_limit,
        "mean_counts": report.mean_counts,
        "mean_shelving_cycles": report.mean_shelving_cycles,
        "mean_shelving_cycles_se": report.mean_shelving_cycles_se,
        "n_shots": rcfg.n_shots,
        "threshold": rcfg.threshold,
    }
    hist = _write_csv(outdir, "readout_histogram.csv",
                      ["counts", "probability_bright", "probability_dark"],
                      [(k, f"{pb:.9e}", f"{pd:.9e}")
                       for k, (pb, pd) in enumerate(zip(report.histogram_bright,
                                                        report.histogram_dark))])
    written = [_write_json(outdir, "readout_report.json", payload), hist]
    print(f"eps_bright = {report.eps_bright:.4%} +- {report.eps_bright_se:.4%} "
          f"(poisson limit {report.poisson_limit:.4%})")
    return written


def run_repeater(cfg: ExperimentConfig, outdir: str, args) -> list[str]:
    chain = cfg.chain.chain_config(cfg.link, cfg.dot.t_rad_ps)
    n_trials = args.trials or cfg.chain.n_trials
    result = simulate_chain(chain, n_trials=n_trials,
                            seed=derive_rng(cfg.seed, "repeater"),
                            keep_trials=args.per_trial)
    payload = {
        "n_links": result.n_links,
        "n_trials": result.n_trials,
        "p_success": result.p_success,
        "period_ms": result.period_ms,
        "w0": result.w0,
        "w_final": result.w_final,
        "fidelity_final": result.fidelity_final,
        "times_ms": result.times_ms,
        "per_level": result.per_level,
        "analytic_mean_ms": result.analytic_mean_ms,
    }
    written = [_write_json(outdir, "repeater_report.json", payload)]
    if args.per_trial:
        written.append(_write_csv(
            outdir, "repeater_trials.csv", ["trial", "total_time_ms"],
            [(i, f"{t:.6f}") for i, t in enumerate(result.trial_times_ms)]))
    print(f"median time = {result.times_ms['p50_ms']:.2f} ms over "
          f"{result.n_links} links, final fidelity = {result.fidelity_final:.4f}")
    return written


def run_tune(cfg: ExperimentConfig, outdir: str, args) -> list[str]:
    e_plus, e_minus = photon_energies(cfg.dot)
    # hold each line to the same precision the link budget assumes for dE
    de_target = cfg.link.delta_e_uev
    dt_mk, db_mt = control_precision(cfg.dot, cfg.material, de_target)
    plan = addressing_plan(cfg.phonon.e_w_mev, cfg.phonon.e_s_mev)
    payload = {
        "photon_energies": {
            "sigma_plus_mev": e_plus,
            "sigma_minus_mev": e_minus,
            "splitting_mev": e_plus - e_minus,
            "degenerate": e_plus == e_minus,
        },
        "control": {
            "de_target_uev": de_target,
            "dt_max_mk": dt_mk,
            "db_max_mt": db_mt,
            "t_op_assumed_k": cfg.dot.t_op_k,
        },
        "varshni": {
            "shift_mev": varshni_shift(cfg.dot.t_op_k, cfg.material),
            "slope_mev_per_k": varshni_slope(cfg.dot.t_op_k, cfg.material),
        },
        "dipole_dipole": {
            "r_nm": cfg.gate.r_dd_nm,
            "point_mev": dipole_dipole_energy(cfg.dot.d_eh_nm, cfg.gate.r_dd_nm,
                                              cfg.material.eps_r, "point-dipole"),
            "four_charge_mev": dipole_dipole_energy(cfg.dot.d_eh_nm, cfg.gate.r_dd_nm,
                                                    cfg.material.eps_r, "four-charge"),
        },
        "plan": {
            "e_w_mev": plan.e_w_mev,
            "e_s_mev": plan.e_s_mev,
            "n_qubits": plan.n_qubits,
            "slots_mev": list(plan.slots_mev),
        },
    }
    written = [_write_json(outdir, "tune_report.json", payload)]
    print(f"lines at {e_plus:.5f}/{e_minus:.5f} meV, dT_max = {dt_mk:.2f} mK, "
          f"dB_max = {db_mt:.2f} mT, {plan.n_qubits} qubit(s) per node")
    return written


SWEEPABLE = ("phonon.e_s_mev", "gate.e_dd_mev", "link.delta_e_uev")


def run_sweep(cfg: ExperimentConfig, outdir: str, args) -> list[str]:
    if args.param not in SWEEPABLE:
        raise ValueError(f"sweep parameter must be one of {SWEEPABLE}")
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        raise ValueError(f"bad sweep values {args.values!r}") from exc
    if not values:
        raise ValueError("no sweep values given")

    rows = []
    if args.param == "phonon.e_s_mev":
        model = model_from_dot(cfg.dot, cfg.material, order=cfg.phonon.order)
        header = ["e_s_mev", "phonon_error"]
        rows = [(f"{v:.6g}", f"{phonon_error(model, cfg.drive, v):.9e}")
                for v in values]
    elif args.param == "gate.e_dd_mev":
        header = ["e_dd_mev", "phi_cond_rad", "adiabatic"]
        for v in values:
            rep = simulate_conditional_gate(cfg.drive, v, gamma_per_ps=0.0,
                                            tol=cfg.gate.tol, lindblad_check=False)
            rows.append((f"{v:.6g}", f"{rep.phi_cond_rad:.9f}", int(rep.adiabatic)))
    else:
        header = ["delta_e_uev", "overlap_error"]
        rows = [(f"{v:.6g}",
                 f"{wavepacket_overlap_error(v, cfg.dot.t_rad_ps):.9e}")
                for v in values]
    name = _write_csv(outdir, "sweep.csv", header, rows)
    print(f"swept {args.param} over {len(values)} value(s)")
    return [name]


RUNNERS = {
    "gate": run_gate,
    "phonon": run_phonon,
    "link": run_link,
    "readout": run_readout,
    "repeater": run_repeater,
    "tune": run_tune,
    "sweep": run_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dotlink",
        description="error-budget simulator for optically linked quantum-dot spins")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="dotted config override")
        p.add_argument("--seed", type=int, help="global seed override")
        p.add_argument("--out", help="output directory")
        p.add_argument("--trials", type=int, help="Monte Carlo trial count")
        if name == "gate":
            p.add_argument("--trajectories", action="store_true",
                           help="also write per-step populations CSV")
        if name == "repeater":
            p.add_argument("--per-trial", dest="per_trial", action="store_true",
                           help="also write per-trial times CSV")
        if name == "sweep":
            p.add_argument("--param", required=True,
                           help=f"one of {', '.join(SWEEPABLE)}")
            p.add_argument("--values", required=True,
                           help="comma-separated values")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = datetime.now(timezone.utc).isoformat()
    try:
        cfg = load_config(args.config, args.overrides, args.seed, args.out)
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1

    outdir = cfg.out_dir
    os.makedirs(outdir, exist_ok=True)
    try:
        results = RUNNERS[args.subcommand](cfg, outdir, args)
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    except (RuntimeError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2

    manifest = {
        "tool_version": __version__,
        "config_hash": cfg.config_hash(),
        "seed": cfg.seed,
        "subcommand": args.subcommand,
        "started_utc": started,
        "finished_utc": datetime.now(timezone.utc).isoformat(),
        "results": results,
    }
    _write_json(outdir, "run_manifest.json", manifest)
    return 0


if __name__ == "__main__":
    sys.exit(main())
