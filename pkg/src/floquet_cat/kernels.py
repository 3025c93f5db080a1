"""Hot-loop kernels with a compiled core and a pure-numpy fallback.

The two inner loops that dominate runtime are (a) fixed-step RK4 propagation
of a state vector under a modulated Hamiltonian (lab-frame full-model runs)
and (b) the Lindblad right-hand side (dissipation scans). Both exist twice
with identical semantics: in the Cython extension `floquet_cat._core` and in
numpy below. The backend is selected at import; set FLOQUET_CAT_FORCE_NUMPY=1
to force the fallback. `benchmarks/bench_kernels.py` compares the two.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse

try:
    from . import _core as _core_mod
except ImportError:  # pragma: no cover - build-environment dependent
    _core_mod = None

if os.environ.get("FLOQUET_CAT_FORCE_NUMPY"):
    _core_mod = None

BACKEND = "compiled" if _core_mod is not None else "numpy"


def active_backend() -> str:
    return BACKEND


@dataclass
class CompiledHamiltonian:
    """Backend-ready form of H(t) = H0 + sum z_k e^{i nu_k t} M_k."""

    dim: int
    h0: Optional[np.ndarray]            # dense C-order or None if zero
    csr_terms: List[Tuple[scipy.sparse.csr_matrix, complex, float]]
    # concatenated COO arrays for the compiled kernel
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    offsets: np.ndarray
    zs: np.ndarray
    nus: np.ndarray
    backend: str

    def apply(self, t: float, x: np.ndarray) -> np.ndarray:
        """H(t) @ x."""
        if self.backend == "compiled":
            y = np.empty_like(x)
            _core_mod.ham_apply(self._h0_arr(), self.rows, self.cols, self.vals,
                                self.offsets, self.zs, self.nus, float(t), x, y)
            return y
        y = self.h0 @ x if self.h0 is not None else np.zeros_like(x)
        for m, z, nu in self.csr_terms:
            y += (z * np.exp(1j * nu * t)) * (m @ x)
        return y

    def schrodinger_rhs(self, t: float, x: np.ndarray) -> np.ndarray:
        return -1j * self.apply(t, x)

    def rk4_fixed(self, psi: np.ndarray, t0: float, dt: float, nsteps: int) -> np.ndarray:
        """Advance d psi/dt = -i H(t) psi by nsteps classical RK4 steps."""
        if self.backend == "compiled":
            out = psi.copy()
            _core_mod.rk4_propagate(self._h0_arr(), self.rows, self.cols, self.vals,
                                    self.offsets, self.zs, self.nus,
                                    out, float(t0), float(dt), int(nsteps))
            return out
        y = psi.copy()
        t = t0
        for _ in range(nsteps):
            k1 = self.schrodinger_rhs(t, y)
            k2 = self.schrodinger_rhs(t + 0.5 * dt, y + (0.5 * dt) * k1)
            k3 = self.schrodinger_rhs(t + 0.5 * dt, y + (0.5 * dt) * k2)
            k4 = self.schrodinger_rhs(t + dt, y + dt * k3)
            y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += dt
        return y

    def _h0_arr(self) -> np.ndarray:
        if self.h0 is None:
            return np.zeros((0, 0), dtype=np.complex128)
        return self.h0


def compile_hamiltonian(mh, backend: Optional[str] = None) -> CompiledHamiltonian:
    """Lower a ModulatedHamiltonian into kernel-ready arrays."""
    backend = backend or BACKEND
    if backend == "compiled" and _core_mod is None:
        backend = "numpy"
    dim = mh.layout.dim
    h0 = None
    if np.any(mh.static):
        h0 = np.ascontiguousarray(mh.static, dtype=np.complex128)

    csr_terms = []
    rows_l, cols_l, vals_l, offs = [], [], [], [0]
    zs, nus = [], []
    for m, z, nu in mh.terms:
        sp = scipy.sparse.csr_matrix(m)
        sp.eliminate_zeros()
        csr_terms.append((sp, z, nu))
        coo = sp.tocoo()
        rows_l.append(coo.row.astype(np.int32))
        cols_l.append(coo.col.astype(np.int32))
        vals_l.append(coo.data.astype(np.complex128))
        offs.append(offs[-1] + coo.nnz)
        zs.append(z)
        nus.append(nu)
    cat = (lambda parts, dt: np.concatenate(parts).astype(dt)
           if parts else np.zeros(0, dtype=dt))
    return CompiledHamiltonian(
        dim=dim, h0=h0, csr_terms=csr_terms,
        rows=cat(rows_l, np.int32), cols=cat(cols_l, np.int32),
        vals=cat(vals_l, np.complex128),
        offsets=np.asarray(offs, dtype=np.int64),
        zs=np.asarray(zs, dtype=np.complex128),
        nus=np.asarray(nus, dtype=np.float64),
        backend=backend)


@dataclass
class CompiledLindblad:
    """Backend-ready Lindblad generator.

    drift(t) = D0 + sum z_k e^{i nu_k t} Mk  (already includes -iH and the
    -1/2 c^dag c anticommutator pieces); channels c_j(t) = C0_j + e^{i xi_j t} C1_j.
    RHS(rho) = drift rho + rho drift^dag + sum_j c_j rho c_j^dag.
    """

    dim: int
    d0: np.ndarray
    drift_mats: np.ndarray      # (kd, N, N)
    drift_zs: np.ndarray
    drift_nus: np.ndarray
    c0: np.ndarray              # (nch, N, N)
    c1: np.ndarray              # (nch, N, N); zero block when static
    c1_active: np.ndarray       # (nch,) uint8
    ch_freqs: np.ndarray        # (nch,)
    backend: str

    def rhs(self, t: float, rho: np.ndarray) -> np.ndarray:
        if self.backend == "compiled":
            out = np.empty_like(rho)
            _core_mod.lindblad_rhs(self.d0, self.drift_mats, self.drift_zs,
                                   self.drift_nus, self.c0, self.c1,
                                   self.c1_active, self.ch_freqs,
                                   float(t), rho, out)
            return out
        d = self.d0.copy()
        for k in range(len(self.drift_zs)):
            d += (self.drift_zs[k] * np.exp(1j * self.drift_nus[k] * t)) * self.drift_mats[k]
        out = d @ rho
        out += rho @ d.conj().T
        for j in range(self.c0.shape[0]):
            c = self.c0[j]
            if self.c1_active[j]:
                c = c + np.exp(1j * self.ch_freqs[j] * t) * self.c1[j]
            x = c @ rho
            out += x @ c.conj().T
        return out


def compile_lindblad(mh, channels, backend: Optional[str] = None) -> CompiledLindblad:
    """Lower (ModulatedHamiltonian, channel specs) to a Lindblad generator.

    `channels` is a list of (C0, C1_or_None, freq) dense matrices meaning
    c(t) = C0 + e^{i freq t} C1.
    """
    backend = backend or BACKEND
    if backend == "compiled" and _core_mod is None:
        backend = "numpy"
    dim = mh.layout.dim
    d0 = -1j * np.asarray(mh.static, dtype=np.complex128)
    drift = [(-1j * np.ascontiguousarray(m, dtype=np.complex128), z, nu)
             for m, z, nu in mh.terms]

    c0_l, c1_l, act, freqs = [], [], [], []
    zero = np.zeros((dim, dim), dtype=np.complex128)
    for C0, C1, freq in channels:
        C0 = np.ascontiguousarray(C0, dtype=np.complex128)
        d0 -= 0.5 * (C0.conj().T @ C0)
        if C1 is not None:
            C1 = np.ascontiguousarray(C1, dtype=np.complex128)
            d0 -= 0.5 * (C1.conj().T @ C1)
            drift.append((-0.5 * (C0.conj().T @ C1), 1.0 + 0j, freq))
            drift.append((-0.5 * (C1.conj().T @ C0), 1.0 + 0j, -freq))
            c1_l.append(C1)
            act.append(1)
        else:
            c1_l.append(zero)
            act.append(0)
        c0_l.append(C0)
        freqs.append(freq)

    kd = len(drift)
    nch = len(c0_l)
    dm = np.zeros((kd, dim, dim), dtype=np.complex128)
    dz = np.zeros(kd, dtype=np.complex128)
    dn = np.zeros(kd, dtype=np.float64)
    for k, (m, z, nu) in enumerate(drift):
        dm[k] = m
        dz[k] = z
        dn[k] = nu
    return CompiledLindblad(
        dim=dim, d0=np.ascontiguousarray(d0),
        drift_mats=dm, drift_zs=dz, drift_nus=dn,
        c0=(np.stack(c0_l) if nch else np.zeros((0, dim, dim), np.complex128)),
        c1=(np.stack(c1_l) if nch else np.zeros((0, dim, dim), np.complex128)),
        c1_active=np.asarray(act, dtype=np.uint8),
        ch_freqs=np.asarray(freqs, dtype=np.float64),
        backend=backend)
