"""Independent reference computations used by several test modules.

Everything here is derived by a different route than the library code:
adiabatic quadratures via direct numerical integration of dressed-state
eigenvalues, the swap channel via a brute-force 4-qubit density matrix,
and the phonon spectral density via a Bessel-function reduction of the
azimuthal integral.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.special import j0, roots_legendre

from dotlink.units import EV_SI, HBAR_SI


def single_dot_quadrature(drive) -> float:
    """Adiabatic phase of the driven ground state: integral of the lower
    dressed eigenvalue (delta - sqrt(delta^2 + omega^2))/2 over the pulse."""
    lam = lambda t: 0.5 * (drive.delta - math.sqrt(
        drive.delta ** 2 + drive.omega(t) ** 2))
    t0, t1 = drive.support()
    val, _ = quad(lam, t0, t1, limit=400)
    return val


def blockade_quadrature(drive) -> float:
    """Adiabatic conditional phase in the perfect-blockade limit:
    integral of lambda2 - 2*lambda1 with the sqrt(2)-enhanced coupling."""
    def integrand(t):
        om2 = drive.omega(t) ** 2
        lam1 = 0.5 * (drive.delta - math.sqrt(drive.delta ** 2 + om2))
        lam2 = 0.5 * (drive.delta - math.sqrt(drive.delta ** 2 + 2.0 * om2))
        return lam2 - 2.0 * lam1
    t0, t1 = drive.support()
    val, _ = quad(integrand, t0, t1, limit=400)
    return val


# ---- brute-force entanglement swap ----------------------------------------

_PAULI = [np.eye(2, dtype=complex),
          np.array([[0, 1], [1, 0]], dtype=complex),
          np.array([[0, -1j], [1j, 0]], dtype=complex),
          np.array([[1, 0], [0, -1]], dtype=complex)]

_PSI_MINUS = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)


def _embed(op: np.ndarray, qubits: tuple[int, ...], n: int = 4) -> np.ndarray:
    """Expand an operator acting on the given qubits to the full register."""
    per_qubit = {}
    dim = op.shape[0]
    assert dim == 2 ** len(qubits)
    full = np.eye(1, dtype=complex)
    # build by kron over qubit slots, inserting the operator as one block
    # only contiguous qubit groups appear here, so a single reshape works
    lo = min(qubits)
    assert tuple(qubits) == tuple(range(lo, lo + len(qubits)))
    for q in range(n):
        if q == lo:
            full = np.kron(full, op)
        elif q in qubits:
            continue
        else:
            full = np.kron(full, _PAULI[0])
    return full


def _depolarize_two(rho: np.ndarray, qubits: tuple[int, int], p: float) -> np.ndarray:
    """Two-qubit depolarizing channel via the 16-Pauli twirl."""
    if p == 0.0:
        return rho
    acc = np.zeros_like(rho)
    for a in _PAULI:
        for b in _PAULI:
            op = _embed(np.kron(a, b), qubits)
            acc += op @ rho @ op.conj().T
    return (1.0 - p) * rho + (p / 16.0) * acc


def _depolarize_one(rho: np.ndarray, qubit: int, p: float) -> np.ndarray:
    if p == 0.0:
        return rho
    acc = np.zeros_like(rho)
    for a in _PAULI:
        op = _embed(a, (qubit,))
        acc += op @ rho @ op.conj().T
    return (1.0 - p) * rho + (p / 4.0) * acc


def swap_werner_bruteforce(w_a: float, w_b: float, eps_gate: float,
                           eps_meas: float) -> float:
    """Werner parameter after a noisy swap, from the full 4-qubit state.

    Qubits 0..3; pairs (0,1) and (2,3) start as psi- Werner states, the
    Bell measurement acts on (1,2) with a depolarizing gate error and
    per-qubit depolarizing measurement errors, then the psi- outcome is
    projected and the outer pair (0,3) read out.
    """
    def werner(w):
        return (w * np.outer(_PSI_MINUS, _PSI_MINUS.conj())
                + (1.0 - w) * np.eye(4, dtype=complex) / 4.0)

    rho = np.kron(werner(w_a), werner(w_b))
    rho = _depolarize_two(rho, (1, 2), eps_gate)
    rho = _depolarize_one(rho, 1, eps_meas)
    rho = _depolarize_one(rho, 2, eps_meas)

    proj = _embed(np.outer(_PSI_MINUS, _PSI_MINUS.conj()), (1, 2))
    rho = proj @ rho @ proj
    rho /= np.trace(rho).real

    # trace out qubits 1 and 2, keeping (0, 3)
    t = rho.reshape(2, 2, 2, 2, 2, 2, 2, 2)
    rho_out = np.einsum("aijbcijd->abcd", t).reshape(4, 4)
    fid = float(np.real(_PSI_MINUS.conj() @ rho_out @ _PSI_MINUS))
    return (4.0 * fid - 1.0) / 3.0


# ---- Bessel route for the phonon spectral density --------------------------

def spectral_density_bessel(model, delta_mev: float, order: int = 400) -> float:
    """J(delta) with the azimuthal integral done analytically.

    For envelopes offset along x by d, the azimuthal average of
    |D(k)|^2 gives 2*pi*(Dv^2 Fv^2 + Dc^2 Fc^2 - 2 Dv Dc Fv Fc J0(k_xy d)),
    leaving a single polar quadrature.  Assumes equal envelope centers in
    y, z and arbitrary widths.
    """
    mat = model.material
    delta_j = delta_mev * 1e-3 * EV_SI
    k = delta_j / (HBAR_SI * mat.c_s_m_s) * 1e-9  # 1/nm
    d = model.hole.center_nm[0] - model.electron.center_nm[0]

    x, wts = roots_legendre(order)
    sin2 = 1.0 - x ** 2
    def f2(env):
        return np.exp(-(k ** 2) * (sin2 * env.sigma_xy_nm ** 2
                                   + x ** 2 * env.sigma_z_nm ** 2))
    fv2 = f2(model.hole)
    fc2 = f2(model.electron)
    dv, dc = mat.d_v_ev, mat.d_c_ev
    integrand = (dv ** 2 * fv2 + dc ** 2 * fc2
                 - 2.0 * dv * dc * np.sqrt(fv2 * fc2)
                 * j0(k * np.sqrt(sin2) * d))
    integral_ev2 = 2.0 * math.pi * float(np.sum(wts * integrand))
    integral_j2 = integral_ev2 * EV_SI ** 2
    j_per_s = delta_j ** 3 * integral_j2 / (16.0 * math.pi ** 3 * mat.rho_kg_m3
                                            * mat.c_s_m_s ** 5 * HBAR_SI ** 4)
    return j_per_s * 1e-12
