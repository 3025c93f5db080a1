"""Time evolution engines.

Adaptive paths use the classic explicit Runge-Kutta 4(5) pair with PI step
control (scipy's RK45), rel tol 1e-9 / abs tol 1e-12 by default. Lab-frame
runs with GHz drives use the fixed-step RK4 kernel instead, with the step
bounded by (drive period)/200. Lindblad evolution integrates the vectorized
density matrix with the same adaptive controller; no trajectory unraveling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import scipy.integrate

from .errors import IntegratorAccuracyError, InvalidDimensionError, StiffnessError
from .hamiltonians import ModulatedHamiltonian
from .hilbert import Operator, QuantumState
from .kernels import compile_hamiltonian, compile_lindblad

DEFAULT_RTOL = 1e-9
DEFAULT_ATOL = 1e-12


@dataclass
class Trajectory:
    times: np.ndarray
    states: List[QuantumState]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if np.any(np.diff(t) <= 0):
            raise InvalidDimensionError("trajectory times must be strictly increasing")
        self.times = t

    def final(self) -> QuantumState:
        return self.states[-1]


def _as_modulated(h) -> ModulatedHamiltonian:
    if isinstance(h, ModulatedHamiltonian):
        return h
    if isinstance(h, Operator):
        return ModulatedHamiltonian(h.layout, h.mat)
    raise InvalidDimensionError(f"expected Operator or ModulatedHamiltonian, got {type(h)}")


def fixed_step_count(t_span: float, omega_max: float, samples_per_period: int = 256):
    """Step size resolving the fastest drive: dt <= 2*pi/omega / samples_per_period."""
    if omega_max <= 0:
        return max(1, int(math.ceil(t_span / 0.01)))
    dt = (2.0 * math.pi / omega_max) / samples_per_period
    return max(1, int(math.ceil(t_span / dt)))


def evolve_schrodinger(h, psi0: QuantumState, times: Sequence[float],
                       method: str = "adaptive", dt_max: Optional[float] = None,
                       rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
                       backend: Optional[str] = None) -> Trajectory:
    """Integrate i d|psi>/dt = H(t)|psi> and sample at `times`.

    method "adaptive" uses RK45 with PI control; "fixed" uses the RK4 kernel
    with uniform steps of at most dt_max between samples.
    """
    mh = _as_modulated(h)
    if not psi0.is_pure:
        raise InvalidDimensionError("evolve_schrodinger needs a pure state")
    if psi0.layout != mh.layout:
        raise InvalidDimensionError("state/hamiltonian layout mismatch")
    times = np.asarray(times, dtype=float)
    comp = compile_hamiltonian(mh, backend)
    psi = psi0.data.copy()
    states = [QuantumState(mh.layout, psi.copy())]
    nsteps_total = 0

    if method == "fixed":
        if dt_max is None or dt_max <= 0:
            raise InvalidDimensionError("fixed stepping needs dt_max > 0")
        for i in range(len(times) - 1):
            span = times[i + 1] - times[i]
            n = max(1, int(math.ceil(span / dt_max)))
            psi = comp.rk4_fixed(psi, times[i], span / n, n)
            nsteps_total += n
            states.append(QuantumState(mh.layout, psi.copy()))
    elif method == "adaptive":
        sol = scipy.integrate.solve_ivp(
            comp.schrodinger_rhs, (times[0], times[-1]), psi,
            method="RK45", t_eval=times, rtol=rtol, atol=atol)
        if not sol.success:
            raise StiffnessError(f"adaptive integration failed: {sol.message}")
        nsteps_total = sol.nfev
        states = [QuantumState(mh.layout, sol.y[:, i].copy())
                  for i in range(sol.y.shape[1])]
    else:
        raise InvalidDimensionError(f"unknown method {method!r}")

    drift = abs(np.linalg.norm(states[-1].data) - 1.0)
    meta = {"method": method, "norm_drift": float(drift),
            "rtol": rtol, "atol": atol, "steps_or_nfev": int(nsteps_total),
            "backend": comp.backend}
    return Trajectory(times, states, meta)


def _channel_triples(channels, dim):
    """Normalize channel inputs to (C0, C1|None, freq) dense triples."""
    triples = []
    for ch in channels:
        op = getattr(ch, "operator", None)
        if op is not None:
            c0 = op.mat
            mod = getattr(ch, "modulated", None)
            c1 = mod.mat if mod is not None else None
            freq = getattr(ch, "mod_freq", 0.0)
        else:
            c0, c1, freq = ch
            c0 = np.asarray(c0, dtype=np.complex128)
            c1 = None if c1 is None else np.asarray(c1, dtype=np.complex128)
        if c0.shape != (dim, dim):
            raise InvalidDimensionError("collapse operator dimension mismatch")
        triples.append((c0, c1, float(freq)))
    return triples


def evolve_lindblad(h, channels, rho0: QuantumState, times: Sequence[float],
                    rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
                    method: str = "adaptive", dt_max: Optional[float] = None,
                    backend: Optional[str] = None,
                    positivity_floor: float = -1e-6) -> Trajectory:
    """Integrate drho/dt = -i[H, rho] + (1/2) sum_j L_{c_j}[rho].

    The paper's half-prefactor convention is folded into the compiled
    generator: a channel sqrt(kappa)*a makes <n> decay as e^{-kappa t}.
    """
    mh = _as_modulated(h)
    dim = mh.layout.dim
    rho = np.ascontiguousarray(rho0.to_density_matrix(), dtype=np.complex128)
    times = np.asarray(times, dtype=float)
    gen = compile_lindblad(mh, _channel_triples(channels, dim), backend)

    def rhs_flat(t, y):
        return gen.rhs(t, y.reshape(dim, dim)).reshape(-1)

    if method == "adaptive":
        sol = scipy.integrate.solve_ivp(rhs_flat, (times[0], times[-1]),
                                        rho.reshape(-1), method="RK45",
                                        t_eval=times, rtol=rtol, atol=atol)
        if not sol.success:
            raise StiffnessError(f"lindblad integration failed: {sol.message}")
        mats = [sol.y[:, i].reshape(dim, dim).copy() for i in range(sol.y.shape[1])]
        nfev = sol.nfev
    elif method == "fixed":
        if dt_max is None or dt_max <= 0:
            raise InvalidDimensionError("fixed stepping needs dt_max > 0")
        mats = [rho.copy()]
        y = rho.copy()
        nfev = 0
        for i in range(len(times) - 1):
            span = times[i + 1] - times[i]
            n = max(1, int(math.ceil(span / dt_max)))
            hstep = span / n
            t = times[i]
            for _ in range(n):
                k1 = gen.rhs(t, y)
                k2 = gen.rhs(t + 0.5 * hstep, y + 0.5 * hstep * k1)
                k3 = gen.rhs(t + 0.5 * hstep, y + 0.5 * hstep * k2)
                k4 = gen.rhs(t + hstep, y + hstep * k3)
                y = y + (hstep / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
                t += hstep
                nfev += 4
            mats.append(y.copy())
    else:
        raise InvalidDimensionError(f"unknown method {method!r}")

    states = [QuantumState(mh.layout, m) for m in mats]
    final = mats[-1]
    trace_drift = abs(np.trace(final).real - 1.0)
    min_eig = float(np.linalg.eigvalsh(0.5 * (final + final.conj().T)).min())
    if min_eig < positivity_floor:
        raise IntegratorAccuracyError(
            f"density matrix eigenvalue {min_eig:.3e} below {positivity_floor:.1e}")
    meta = {"method": method, "trace_drift": float(trace_drift),
            "min_eigenvalue": min_eig, "rtol": rtol, "atol": atol,
            "steps_or_nfev": int(nfev), "backend": gen.backend}
    return Trajectory(times, states, meta)
