"""Coherent states, four-component cats, qubit conditioning, fidelity."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOutcomeError, InvalidDimensionError, LayoutMismatchError
from .hilbert import (QuantumState, SpaceLayout, TruncationWarning, boson_factor,
                      single_boson_layout)

BRANCHES = ("pp", "pm", "mp", "mm")

# Signs over the components (|a>, |ia>, |-ia>, |-a>) for each branch.
_BRANCH_SIGNS = {
    "pp": (1, 1, 1, 1),
    "pm": (1, -1, 1, -1),
    "mp": (1, 1, -1, -1),
    "mm": (1, -1, -1, 1),
}


def required_dim(alpha: complex) -> float:
    a = abs(alpha)
    return a * a + 6.0 * a + 10.0


def fock(dim: int, n: int) -> QuantumState:
    if n < 0 or n >= dim:
        raise InvalidDimensionError(f"Fock index {n} outside [0, {dim})")
    v = np.zeros(dim, dtype=np.complex128)
    v[n] = 1.0
    return QuantumState(single_boson_layout(dim), v)


def coherent(alpha: complex, dim: int) -> QuantumState:
    """Truncated Fock expansion of |alpha>, renormalized after truncation."""
    if dim < required_dim(alpha):
        warnings.warn(f"dim {dim} marginal for |alpha| = {abs(alpha):.3g}",
                      TruncationWarning, stacklevel=2)
    n = np.arange(dim)
    logfact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, dim)))))
    if alpha == 0:
        amps = np.zeros(dim, dtype=np.complex128)
        amps[0] = 1.0
    else:
        # alpha^n / sqrt(n!) evaluated in log space to dodge overflow
        logmag = n * math.log(abs(alpha)) - 0.5 * logfact
        phase = np.exp(1j * n * np.angle(alpha))
        amps = np.exp(logmag - logmag.max()) * phase
    amps = amps / np.linalg.norm(amps)
    return QuantumState(single_boson_layout(dim), amps)


@dataclass(frozen=True)
class CatState:
    """Four-component cat: branch superposition of |±alpha>, |±i alpha>."""

    alpha: complex
    branch: str
    norm_constant: float
    dim: int
    state: QuantumState


def eq11_norm_constant(alpha: complex, branch: str) -> float:
    """Closed-form normalization as printed in the source material.

    The pp/mm cross terms there carry e^{-2|a|^2} where the direct coherent
    overlap gives e^{-|a|^2}; kept only for the logged comparison against the
    numeric norm, never used to normalize.
    """
    a2 = abs(alpha) ** 2
    if branch == "pp":
        val = 4 + 4 * math.exp(-2 * a2) + 8 * math.exp(-2 * a2) * math.cos(a2)
    elif branch == "mm":
        val = 4 + 4 * math.exp(-2 * a2) - 8 * math.exp(-2 * a2) * math.cos(a2)
    elif branch in ("pm", "mp"):
        val = 4 - 4 * math.exp(-2 * a2)
    else:
        raise InvalidDimensionError(f"unknown branch {branch!r}")
    return val ** -0.5 if val > 0 else math.inf


def cat4(alpha: complex, branch: str, dim: int) -> CatState:
    """Normalized branch superposition of |alpha>, |i alpha>, |-i alpha>, |-alpha>."""
    if branch not in _BRANCH_SIGNS:
        raise InvalidDimensionError(f"unknown branch {branch!r}")
    signs = _BRANCH_SIGNS[branch]
    comps = [coherent(c * alpha, dim).data
             for c in (1.0, 1.0j, -1.0j, -1.0)]
    vec = sum(s * c for s, c in zip(signs, comps))
    norm = np.linalg.norm(vec)
    if norm < 1e-300:
        raise InvalidDimensionError("cat branch has vanishing norm")
    return CatState(alpha=complex(alpha), branch=branch,
                    norm_constant=float(1.0 / norm), dim=dim,
                    state=QuantumState(single_boson_layout(dim), vec / norm))


def two_component_cat(alpha: complex, dim: int, sign: int = 1) -> QuantumState:
    """Normalized |alpha> + sign*|-alpha>."""
    v = coherent(alpha, dim).data + sign * coherent(-alpha, dim).data
    return QuantumState(single_boson_layout(dim), v / np.linalg.norm(v))


_XBASIS = {"+": np.array([1.0, 1.0]) / math.sqrt(2.0),
           "-": np.array([1.0, -1.0]) / math.sqrt(2.0)}


def qubit_x_state(sign: str) -> np.ndarray:
    return _XBASIS[sign].astype(np.complex128)


def plus_plus_fock(layout: SpaceLayout, n: int = 0) -> QuantumState:
    """|+, +, n, ...> on a layout whose first two factors are qubits."""
    vec = np.kron(qubit_x_state("+"), qubit_x_state("+"))
    rest = np.zeros(int(np.prod(layout.dims[2:])), dtype=np.complex128)
    rest[n] = 1.0
    return QuantumState(layout, np.kron(vec, rest))


def project_qubits(state: QuantumState, q1: str, q2: str):
    """Project the two leading qubits onto the sigma_x basis.

    Returns (renormalized state on the remaining factors, outcome probability).
    """
    if q1 not in _XBASIS or q2 not in _XBASIS:
        raise InvalidDimensionError("qubit outcomes must be '+' or '-'")
    lay = state.layout
    if len(lay) < 3 or lay.factors[0][0] != "qubit" or lay.factors[1][0] != "qubit":
        raise LayoutMismatchError("expected a layout with two leading qubit factors")
    rest_dims = lay.dims[2:]
    rest_dim = int(np.prod(rest_dims))
    rest_layout = SpaceLayout(lay.factors[2:])
    outcome = np.kron(qubit_x_state(q1), qubit_x_state(q2))
    if state.is_pure:
        psi = state.data.reshape(4, rest_dim)
        sub = outcome.conj() @ psi
        prob = float(np.linalg.norm(sub) ** 2)
        if prob < 1e-12:
            raise DegenerateOutcomeError(f"outcome ({q1},{q2}) has probability {prob:.3e}")
        return QuantumState(rest_layout, sub / math.sqrt(prob)), prob
    rho = state.data.reshape(4, rest_dim, 4, rest_dim)
    sub = np.einsum("a,abcd,c->bd", outcome.conj(), rho, outcome, optimize=True)
    prob = float(np.trace(sub).real)
    if prob < 1e-12:
        raise DegenerateOutcomeError(f"outcome ({q1},{q2}) has probability {prob:.3e}")
    return QuantumState(rest_layout, sub / prob), prob


def fidelity(rho: QuantumState, target: QuantumState) -> float:
    """Squared-overlap fidelity <target|rho|target> with a pure target."""
    if not target.is_pure:
        raise LayoutMismatchError("fidelity target must be pure")
    if rho.layout != target.layout:
        raise LayoutMismatchError("fidelity layouts differ")
    if rho.is_pure:
        return float(abs(np.vdot(target.data, rho.data)) ** 2)
    return float(np.real(np.vdot(target.data, rho.data @ target.data)))
