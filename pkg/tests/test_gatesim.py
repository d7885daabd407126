"""Conditional-phase gate: phases, trion exposure, calibration, Raman error."""

import math

import pytest

from dotlink import (
    GateReport,
    PulsedDrive,
    RamanConfig,
    calibrate_phase,
    raman_gate_error,
    simulate_conditional_gate,
)
from dotlink.units import HBAR_MEV_PS
from oracles import blockade_quadrature

DRIVE = PulsedDrive()  # omega0 = 1 rad/ps, tau = 11 ps, delta = 0.75 rad/ps


def test_raman_gate_error_value():
    eps = raman_gate_error(RamanConfig())
    # pi * hbar * gamma / (2 * Delta)
    expected = math.pi * (3e10 * 1e-12) / (2.0 * 30.0 / HBAR_MEV_PS)
    assert abs(eps - expected) <= 1e-15
    assert abs(eps - 1.03e-3) <= 1e-5
    assert abs(eps - 1.0339e-3) <= 1e-7


def test_raman_gate_error_scaling():
    base = raman_gate_error(RamanConfig())
    assert raman_gate_error(RamanConfig(delta_raman_mev=60.0)) == pytest.approx(
        base / 2.0, rel=1e-12)
    assert raman_gate_error(RamanConfig(gamma_trion_per_s=0.0)) == 0.0
    with pytest.raises(ValueError):
        RamanConfig(delta_raman_mev=0.0)
    with pytest.raises(ValueError):
        RamanConfig(gamma_trion_per_s=-1.0)


def test_zero_drive_is_identity():
    rep = simulate_conditional_gate(PulsedDrive(omega0=0.0), 5.0)
    assert abs(rep.phi_cond_rad) <= 1e-9
    assert rep.exposure_single_ps <= 1e-9
    assert rep.eps_spont == 0.0
    assert rep.adiabatic


def test_default_gate_exposure_and_errors():
    gamma = 1.0 / 300.0
    rep = simulate_conditional_gate(DRIVE, 5.0, gamma_per_ps=gamma)
    # trion exposure of one driven dot, ps
    assert abs(rep.exposure_single_ps - 3.476) <= 0.01
    assert abs(rep.exposure_single_ps - 3.4) <= 0.34
    assert abs(rep.eps_spont - rep.exposure_single_ps * gamma) <= 1e-15
    assert abs(rep.eps_spont - 0.0116) <= 3e-4
    # input average: 00 contributes nothing, 11 counts both trions but the
    # blockade keeps its exposure below twice the single-dot value
    mean_exposure = sum(rep.exposures_ps.values()) / 4.0
    assert abs(rep.eps_spont_avg - gamma * mean_exposure) <= 1e-15
    assert rep.exposures_ps["11"] < 2.0 * rep.exposures_ps["01"]
    assert abs(rep.eps_spont_avg - 0.00982) <= 2e-4
    assert rep.eps_spont_lindblad is not None
    assert abs(rep.eps_spont_lindblad - rep.eps_spont) / rep.eps_spont <= 0.15
    assert rep.adiabatic
    assert rep.norm_drift < 1e-8
    assert rep.phases_rad["01"] == rep.phases_rad["10"]
    assert abs(rep.phases_rad["01"] - (-3.7363732)) <= 1e-5
    assert abs(rep.phi_cond_rad - 1.1722086) <= 1e-4


def test_no_decay_skips_lindblad_branch():
    rep = simulate_conditional_gate(DRIVE, 5.0, gamma_per_ps=0.0)
    assert rep.eps_spont == 0.0
    assert rep.eps_spont_lindblad is None


def test_longer_lifetime_cuts_error():
    rep = simulate_conditional_gate(DRIVE, 5.0, gamma_per_ps=1e-3,
                                    lindblad_check=False)
    assert abs(rep.eps_spont - 0.0034760) <= 1e-6
    assert abs(rep.eps_spont - 0.0034) <= 5e-4


def test_single_dot_exposure_independent_of_coupling():
    a = simulate_conditional_gate(DRIVE, 1.0, lindblad_check=False)
    b = simulate_conditional_gate(DRIVE, 8.0, lindblad_check=False)
    # the 01/10 subsystem never sees the dipole shift
    assert a.exposures_ps["01"] == b.exposures_ps["01"]
    assert a.phases_rad["01"] == b.phases_rad["01"]
    assert a.phi_cond_rad != b.phi_cond_rad


def test_stronger_drive_increases_exposure():
    weak = simulate_conditional_gate(DRIVE, 5.0, lindblad_check=False)
    strong = simulate_conditional_gate(PulsedDrive(omega0=1.4), 5.0,
                                       lindblad_check=False)
    assert strong.exposure_single_ps > weak.exposure_single_ps


def test_blockade_limit_matches_adiabatic_quadrature():
    rep = simulate_conditional_gate(DRIVE, math.inf, lindblad_check=False)
    quad = blockade_quadrature(DRIVE)
    assert abs(quad - 0.894002) <= 1e-4
    assert abs(rep.phi_cond_rad - 0.913848) <= 2e-4
    assert abs(rep.phi_cond_rad - quad) <= 0.02


@pytest.mark.xfail(reason="at finite dipole shift the quoted 0.02 rad "
                   "agreement with the dressed-state quadrature is not met "
                   "for this pulse (deviation is 0.041 rad at 50 meV)",
                   strict=True)
def test_large_coupling_matches_blockade_quadrature():
    rep = simulate_conditional_gate(DRIVE, 50.0, tol=1e-8, lindblad_check=False)
    assert abs(rep.phi_cond_rad - blockade_quadrature(DRIVE)) <= 0.02


def test_conditional_phase_is_odd():
    plus = simulate_conditional_gate(DRIVE, 2.0, lindblad_check=False, tol=1e-8)
    mirrored = simulate_conditional_gate(PulsedDrive(delta=-DRIVE.delta), -2.0,
                                         lindblad_check=False, tol=1e-8)
    assert abs(plus.phi_cond_rad + mirrored.phi_cond_rad) <= 1e-3


def test_fast_pulse_flagged_nonadiabatic():
    rep = simulate_conditional_gate(PulsedDrive(tau_ps=1.0), 5.0,
                                    lindblad_check=False, tol=1e-8)
    assert not rep.adiabatic
    assert rep.end_excited_max > 1e-3


def test_omega_sq_integral_closed_form():
    assert abs(DRIVE.omega_sq_integral()
               - 11.0 * math.sqrt(math.pi / 2.0)) <= 1e-12
    assert abs(DRIVE.omega_sq_integral() - 13.7865) <= 1e-3


def test_gate_report_validation():
    with pytest.raises(ValueError):
        GateReport(phi_cond_rad=0.0, phases_rad={}, exposure_single_ps=0.0,
                   exposures_ps={}, eps_spont=1.5, eps_spont_avg=0.0,
                   eps_spont_lindblad=None, adiabatic=True,
                   end_excited_max=0.0, norm_drift=0.0, e_dd_mev=5.0,
                   gamma_per_ps=0.0)
    with pytest.raises(ValueError):
        simulate_conditional_gate(DRIVE, 5.0, gamma_per_ps=-0.1)
    with pytest.raises(ValueError):
        PulsedDrive(tau_ps=-1.0)


def test_calibrate_zero_target_at_zero_coupling():
    assert calibrate_phase(DRIVE, 0.0, e_dd_range=(0.0, 1.0)) == 0.0


def test_calibrate_pi_phase():
    e_star = calibrate_phase(DRIVE, math.pi, e_dd_range=(1.0, 2.0))
    assert abs(e_star - 1.4446) <= 2e-3
    check = simulate_conditional_gate(DRIVE, e_star, lindblad_check=False)
    assert abs(check.phi_cond_rad - math.pi) <= 1e-3


def test_calibrate_unreachable_target():
    with pytest.raises(RuntimeError, match="attainable"):
        calibrate_phase(DRIVE, 50.0, e_dd_range=(4.8, 5.2))
    with pytest.raises(ValueError):
        calibrate_phase(DRIVE, math.pi, e_dd_range=(5.0, 2.0))
