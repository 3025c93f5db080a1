"""Hamiltonians and frame transformations as modulated-term structures.

Every time-dependent Hamiltonian is represented as

    H(t) = H_static + sum_k z_k * exp(i*nu_k*t) * M_k

with constant complex matrices M_k. Hermiticity is guaranteed by emitting
terms in conjugate pairs (z*, -nu, M^dag). This single representation feeds
the propagation kernels directly and materializes densely via `.at(t)`.

Frame phases (omega_c, omega_m, Delta_cm = omega_c - omega_m) are dictated by
the lab frequencies; the effective-model coefficients come from DerivedParams
and are exact for the "paper" sign convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .bessel import bessel_j
from .errors import InvalidDimensionError, LayoutMismatchError
from .hilbert import (Operator, SpaceLayout, annihilation, effective_layout, embed,
                      full_layout, matrix_exponential, pauli)
from .params import DerivedParams, SystemParams, derive_params


@dataclass(frozen=True)
class HamiltonianSpec:
    """Bundle of parameters shared by all builders."""

    params: SystemParams
    derived: DerivedParams
    harmonic_cutoff: int = 20

    def __post_init__(self):
        if self.harmonic_cutoff < max(1, self.derived.n0):
            raise InvalidDimensionError("harmonic_cutoff must be >= n0 (and >= 1)")


def make_spec(params: SystemParams, convention: str = "paper",
              harmonic_cutoff: int = 20) -> HamiltonianSpec:
    return HamiltonianSpec(params=params, derived=derive_params(params, convention),
                           harmonic_cutoff=harmonic_cutoff)


@dataclass
class ModulatedHamiltonian:
    """H(t) = static + sum z_k e^{i nu_k t} M_k on a fixed layout."""

    layout: SpaceLayout
    static: np.ndarray
    terms: List[Tuple[np.ndarray, complex, float]] = field(default_factory=list)

    def add(self, mat: np.ndarray, z: complex, nu: float, conjugate_pair: bool = True):
        """Append z*e^{i nu t}*mat, and by default its Hermitian partner."""
        self.terms.append((mat, complex(z), float(nu)))
        if conjugate_pair:
            self.terms.append((mat.conj().T, complex(z).conjugate(), -float(nu)))

    def at(self, t: float) -> Operator:
        mat = self.static.astype(np.complex128, copy=True)
        for m, z, nu in self.terms:
            mat += (z * np.exp(1j * nu * t)) * m
        return Operator(self.layout, mat)

    @property
    def is_static(self) -> bool:
        return not self.terms


def _ops_full(params: SystemParams):
    lay = full_layout(params.n_cavity, params.n_magnon)
    a = embed(annihilation(params.n_cavity), 2, lay).mat
    m = embed(annihilation(params.n_magnon), 3, lay).mat
    s = {}
    for j, site in ((1, 0), (2, 1)):
        for ax in ("x", "y", "z", "plus", "minus"):
            s[(j, ax)] = embed(pauli(ax), site, lay).mat
    return lay, a, m, s


def _ops_eff(params: SystemParams):
    lay = effective_layout(params.n_magnon)
    m = embed(annihilation(params.n_magnon), 2, lay).mat
    s = {}
    for j, site in ((1, 0), (2, 1)):
        for ax in ("x", "y", "z"):
            s[(j, ax)] = embed(pauli(ax), site, lay).mat
    return lay, m, s


def h_total(spec: HamiltonianSpec) -> ModulatedHamiltonian:
    """Lab-frame Hamiltonian: qubit/cavity/magnon frees, Jaynes-Cummings
    couplings, beam-splitter magnon-cavity coupling, and the two cosine drives."""
    p = spec.params
    lay, a, m, s = _ops_full(p)
    ad, md = a.conj().T, m.conj().T
    static = (0.5 * p.omega_q1 * s[(1, "z")] + 0.5 * p.omega_q2 * s[(2, "z")]
              + p.omega_c * (ad @ a) + p.omega_m * (md @ m)
              + p.g1 * (a @ s[(1, "plus")] + ad @ s[(1, "minus")])
              + p.g2 * (a @ s[(2, "plus")] + ad @ s[(2, "minus")])
              + p.g3 * (md @ a + m @ ad))
    h = ModulatedHamiltonian(lay, static)
    # Omega*cos(w t + phi)*sigma_x as two exponential terms on one Hermitian matrix.
    h.add(s[(1, "x")], 0.5 * p.Omega_f1, p.omega_f1)
    h.add(s[(2, "x")], 0.5 * p.Omega_f2 * np.exp(1j * p.phi), p.omega_f2)
    return h


def h_total_u2(spec: HamiltonianSpec) -> ModulatedHamiltonian:
    """Eq.-(1) physics in the interaction picture of omega_c*a^dag*a + omega_m*m^dag*m.

    Same dynamics as h_total up to the analytic U2 rotation; the boson free
    rotations move into slow coupling phases, which is what makes fixed-step
    propagation of the full model cheap. Not one of the paper frames per se.
    """
    p = spec.params
    lay, a, m, s = _ops_full(p)
    ad, md = a.conj().T, m.conj().T
    dcm = p.omega_c - p.omega_m
    static = 0.5 * p.omega_q1 * s[(1, "z")] + 0.5 * p.omega_q2 * s[(2, "z")]
    h = ModulatedHamiltonian(lay, static)
    h.add(a @ s[(1, "plus")], p.g1, -p.omega_c)
    h.add(a @ s[(2, "plus")], p.g2, -p.omega_c)
    h.add(m @ ad, p.g3, dcm)
    h.add(s[(1, "x")], 0.5 * p.Omega_f1, p.omega_f1)
    h.add(s[(2, "x")], 0.5 * p.Omega_f2 * np.exp(1j * p.phi), p.omega_f2)
    return h


def h_fram(spec: HamiltonianSpec) -> ModulatedHamiltonian:
    """Floquet+interaction frame Hamiltonian with Jacobi-Anger sums truncated
    at harmonic_cutoff. Includes the omega_q-proportional terms."""
    if spec.harmonic_cutoff < 1:
        raise InvalidDimensionError("harmonic_cutoff must be >= 1")
    p = spec.params
    nmax = spec.harmonic_cutoff
    lay, a, m, s = _ops_full(p)
    ad, md = a.conj().T, m.conj().T
    dcm = p.omega_c - p.omega_m

    h = ModulatedHamiltonian(lay, np.zeros((lay.dim, lay.dim), dtype=np.complex128))
    h.add(m @ ad, p.g3, dcm)

    for j, (omega_q, g, mu, omega_f, phase) in enumerate(
            ((p.omega_q1, p.g1, spec.derived.mu1, p.omega_f1, 0.0),
             (p.omega_q2, p.g2, spec.derived.mu2, p.omega_f2, p.phi)), start=1):
        sz, sy, sp = s[(j, "z")], s[(j, "y")], s[(j, "plus")]
        j0 = bessel_j(0, mu)
        # omega_q/2 * [sz cos(2 theta) + sy sin(2 theta)]
        if omega_q != 0.0:
            h.static = h.static + 0.5 * omega_q * j0 * sz
            for n in range(1, nmax + 1):
                j2n = bessel_j(2 * n, mu)
                h.add(sz, 0.5 * omega_q * j2n * np.exp(2j * n * phase), 2 * n * omega_f)
                k = 2 * n - 1
                jk = bessel_j(k, mu)
                h.add(sy, -0.5j * omega_q * jk * np.exp(1j * k * phase), k * omega_f)
        # g * a e^{-i w_c t} * [s+ - (i/2)(1 - J0) sy - (i/2) sz sin2theta
        #                        + i sy sum J_2n cos(...)] and Hermitian partners.
        b_static = sp + 0.5j * (j0 - 1.0) * sy
        h.add(a @ b_static, g, -p.omega_c)
        for n in range(1, nmax + 1):
            j2n = bessel_j(2 * n, mu)
            h.add(a @ sy, 0.5j * g * j2n * np.exp(2j * n * phase),
                  -p.omega_c + 2 * n * omega_f)
            h.add(a @ sy, 0.5j * g * j2n * np.exp(-2j * n * phase),
                  -p.omega_c - 2 * n * omega_f)
            k = 2 * n - 1
            jk = bessel_j(k, mu)
            h.add(a @ sz, -0.5 * g * jk * np.exp(1j * k * phase),
                  -p.omega_c + k * omega_f)
            h.add(a @ sz, 0.5 * g * jk * np.exp(-1j * k * phase),
                  -p.omega_c - k * omega_f)
    return h


def h_sideband(spec: HamiltonianSpec) -> ModulatedHamiltonian:
    """Selected-sideband Hamiltonian: conditional cavity displacement drives
    rotating at delta plus the magnon-cavity exchange at Delta_cm."""
    p, dp = spec.params, spec.derived
    lay, a, m, s = _ops_full(p)
    ad, md = a.conj().T, m.conj().T
    h = ModulatedHamiltonian(lay, np.zeros((lay.dim, lay.dim), dtype=np.complex128))
    h.add(s[(1, "z")] @ a, -dp.G, -dp.delta)
    h.add(s[(2, "z")] @ a, -dp.G * np.exp(1j * dp.Phi), -dp.delta)
    h.add(m @ ad, p.g3, dp.delta_cm)
    return h


def h_eff(spec: HamiltonianSpec) -> Operator:
    """Time-independent effective Hamiltonian in the auxiliary frame:
    xi m^dag m + Gamma3 sz sz + conditional displacement couplings."""
    p, dp = spec.params, spec.derived
    lay, m, s = _ops_eff(p)
    md = m.conj().T
    mat = (dp.xi * (md @ m)
           + dp.Gamma3 * (s[(1, "z")] @ s[(2, "z")])
           + dp.Gamma1 * (s[(1, "z")] @ (m + md))
           + s[(2, "z")] @ (dp.Gamma2 * m + np.conj(dp.Gamma2) * md))
    return Operator(lay, mat)


def joint_qubit_operator(spec: HamiltonianSpec) -> Operator:
    """A = sigma1_z + sigma2_z e^{i Phi} on the effective layout."""
    lay, _, s = _ops_eff(spec.params)
    return Operator(lay, s[(1, "z")] + np.exp(1j * spec.derived.Phi) * s[(2, "z")])


def h_eff_rotating(spec: HamiltonianSpec) -> ModulatedHamiltonian:
    """Effective Hamiltonian in the xi-rotating frame:
    Gamma1 (m A e^{-i xi t} + h.c.) + Gamma3 sz sz."""
    p, dp = spec.params, spec.derived
    lay, m, s = _ops_eff(p)
    amat = s[(1, "z")] + np.exp(1j * dp.Phi) * s[(2, "z")]
    h = ModulatedHamiltonian(lay, dp.Gamma3 * (s[(1, "z")] @ s[(2, "z")]))
    h.add(m @ amat, dp.Gamma1, -dp.xi)
    return h


def h0_aux(spec: HamiltonianSpec) -> Operator:
    """Auxiliary free Hamiltonian H0 = delta a^dag a + (delta - Delta_cm) m^dag m."""
    p, dp = spec.params, spec.derived
    lay, a, m, _ = _ops_full(p)
    mat = dp.delta * (a.conj().T @ a) + (dp.delta - dp.delta_cm) * (m.conj().T @ m)
    return Operator(lay, mat)


def interaction_v(spec: HamiltonianSpec) -> Operator:
    """Static interaction V of the auxiliary-frame decomposition H0 + V."""
    p, dp = spec.params, spec.derived
    lay, a, m, s = _ops_full(p)
    ad, md = a.conj().T, m.conj().T
    eiphi = np.exp(1j * dp.Phi)
    mat = (-dp.G * (s[(1, "z")] @ (a + ad))
           - dp.G * (s[(2, "z")] @ (np.conj(eiphi) * ad + eiphi * a))
           + p.g3 * (m @ ad + md @ a))
    return Operator(lay, mat)


def generator_s(spec: HamiltonianSpec) -> Operator:
    """Anti-Hermitian generator S removing V to first order: V + [S, H0] = 0."""
    p, dp = spec.params, spec.derived
    lay, a, m, s = _ops_full(p)
    ad, md = a.conj().T, m.conj().T
    eiphi = np.exp(1j * dp.Phi)
    mat = (-(dp.G / dp.delta) * (s[(1, "z")] @ (ad - a))
           - (dp.G / dp.delta) * (s[(2, "z")] @ (np.conj(eiphi) * ad - eiphi * a))
           + (p.g3 / dp.delta_cm) * (m @ ad - md @ a))
    return Operator(lay, mat)


def _theta(params: SystemParams, t: float):
    th1 = (params.Omega_f1 / params.omega_f1) * math.sin(params.omega_f1 * t)
    th2 = (params.Omega_f2 / params.omega_f2) * math.sin(params.omega_f2 * t + params.phi)
    return th1, th2


def _qubit_x_rotation(theta: float) -> np.ndarray:
    # exp(-i theta sigma_x) closed form
    return (math.cos(theta) * np.eye(2) - 1j * math.sin(theta) * pauli("x").mat)


FRAME_KINDS = ("U1", "U2", "Uaux", "expS", "Utot")


def frame_unitary(kind: str, spec: HamiltonianSpec, t: float) -> Operator:
    """One of the frame unitaries on the full 4-factor layout.

    U1 = exp(-i theta1 sx1 - i theta2 sx2), U2 = exp(-i(w_c a'a + w_m m'm)t),
    Uaux = exp(-i H0 t), expS = exp(S), and Utot = U1 U2 Uaux^dag e^{-S}.
    """
    p = spec.params
    lay = full_layout(p.n_cavity, p.n_magnon)
    if kind == "U1":
        th1, th2 = _theta(p, t)
        u = np.kron(np.kron(_qubit_x_rotation(th1), _qubit_x_rotation(th2)),
                    np.eye(p.n_cavity * p.n_magnon))
        return Operator(lay, u)
    if kind == "U2":
        nc = np.arange(p.n_cavity)
        nm = np.arange(p.n_magnon)
        phases = np.exp(-1j * t * (p.omega_c * nc[:, None] + p.omega_m * nm[None, :]))
        diag = np.kron(np.ones(4), phases.reshape(-1))
        return Operator(lay, np.diag(diag))
    if kind == "Uaux":
        dp = spec.derived
        nc = np.arange(p.n_cavity)
        nm = np.arange(p.n_magnon)
        phases = np.exp(-1j * t * (dp.delta * nc[:, None]
                                   + (dp.delta - dp.delta_cm) * nm[None, :]))
        diag = np.kron(np.ones(4), phases.reshape(-1))
        return Operator(lay, np.diag(diag))
    if kind == "expS":
        return matrix_exponential(generator_s(spec))
    if kind == "Utot":
        u1 = frame_unitary("U1", spec, t)
        u2 = frame_unitary("U2", spec, t)
        uaux = frame_unitary("Uaux", spec, t)
        exp_minus_s = matrix_exponential(-1.0 * generator_s(spec))
        return u1 @ u2 @ uaux.dag() @ exp_minus_s
    raise InvalidDimensionError(f"unknown frame kind {kind!r}; use one of {FRAME_KINDS}")


def build_hamiltonian(frame: str, spec: HamiltonianSpec):
    """Dispatch by frame name (lab | floquet | sideband | effective | effective-rotating)."""
    builders: dict = {
        "lab": h_total,
        "floquet": h_fram,
        "sideband": h_sideband,
        "effective": h_eff,
        "effective-rotating": h_eff_rotating,
    }
    if frame not in builders:
        raise InvalidDimensionError(f"unknown frame {frame!r}")
    return builders[frame](spec)
