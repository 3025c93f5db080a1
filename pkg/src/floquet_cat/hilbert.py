"""Dense operators and states on a composite qubit/boson Hilbert space.

Conventions fixed project-wide: qubit basis order (g, e) so that
sigma_z = diag(-1, +1); boson Fock order 0..N-1; the full model uses the
factor order (qubit1, qubit2, cavity, magnon) and effective-frame runs use
(qubit1, qubit2, magnon).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.linalg

from .errors import InvalidDimensionError, LayoutMismatchError


class TruncationWarning(UserWarning):
    """A Fock truncation is marginal for the requested amplitude/grid."""


@dataclass(frozen=True)
class SpaceLayout:
    """Ordered subsystem factors, each ("qubit"|"boson", dim)."""

    factors: tuple

    def __post_init__(self):
        factors = tuple((str(kind), int(dim)) for kind, dim in self.factors)
        object.__setattr__(self, "factors", factors)
        for kind, dim in factors:
            if kind not in ("qubit", "boson"):
                raise InvalidDimensionError(f"unknown factor kind {kind!r}")
            if kind == "qubit" and dim != 2:
                raise InvalidDimensionError("qubit factors must have dim 2")
            if kind == "boson" and dim < 2:
                raise InvalidDimensionError("boson factors need dim >= 2")

    @property
    def dims(self) -> tuple:
        return tuple(d for _, d in self.factors)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def __len__(self) -> int:
        return len(self.factors)


def qubit_factor():
    return ("qubit", 2)


def boson_factor(dim: int):
    return ("boson", int(dim))


def single_boson_layout(dim: int) -> SpaceLayout:
    return SpaceLayout((boson_factor(dim),))


def full_layout(n_cavity: int, n_magnon: int) -> SpaceLayout:
    """(qubit1, qubit2, cavity, magnon) — the Eq.-order for the full model."""
    return SpaceLayout((qubit_factor(), qubit_factor(),
                        boson_factor(n_cavity), boson_factor(n_magnon)))


def effective_layout(n_magnon: int) -> SpaceLayout:
    """(qubit1, qubit2, magnon) — cavity eliminated."""
    return SpaceLayout((qubit_factor(), qubit_factor(), boson_factor(n_magnon)))


@dataclass(frozen=True)
class Operator:
    """Dense complex square matrix tagged with its layout."""

    layout: SpaceLayout
    mat: np.ndarray

    def __post_init__(self):
        mat = np.ascontiguousarray(np.asarray(self.mat, dtype=np.complex128))
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InvalidDimensionError(f"operator matrix must be square, got {mat.shape}")
        if mat.shape[0] != self.layout.dim:
            raise LayoutMismatchError(
                f"matrix dim {mat.shape[0]} != layout dim {self.layout.dim}")
        object.__setattr__(self, "mat", mat)

    def dag(self) -> "Operator":
        return Operator(self.layout, self.mat.conj().T)

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.layout, self.mat + other.mat)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.layout, self.mat - other.mat)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.layout, self.mat * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.layout, self.mat @ other.mat)

    def _check(self, other: "Operator"):
        if other.layout != self.layout:
            raise LayoutMismatchError("operator layouts differ")

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.mat - self.mat.conj().T)) < tol)

    def is_unitary(self, tol: float = 1e-10) -> bool:
        d = self.mat.conj().T @ self.mat - np.eye(self.layout.dim)
        return bool(np.max(np.abs(d)) < tol)


@dataclass(frozen=True)
class QuantumState:
    """Pure state vector or density matrix over a declared layout."""

    layout: SpaceLayout
    data: np.ndarray

    def __post_init__(self):
        data = np.ascontiguousarray(np.asarray(self.data, dtype=np.complex128))
        if data.ndim == 1:
            if data.shape[0] != self.layout.dim:
                raise LayoutMismatchError("vector length != layout dim")
        elif data.ndim == 2:
            if data.shape != (self.layout.dim, self.layout.dim):
                raise LayoutMismatchError("density matrix shape != layout dim")
        else:
            raise InvalidDimensionError("state data must be a vector or a square matrix")
        object.__setattr__(self, "data", data)

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    def to_density_matrix(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def norm_error(self) -> float:
        """Deviation from unit norm (pure) or unit trace (mixed)."""
        if self.is_pure:
            return abs(np.linalg.norm(self.data) - 1.0)
        return abs(np.trace(self.data).real - 1.0)

    def validate(self, tol: float = 1e-8):
        if self.norm_error() > tol:
            raise InvalidDimensionError(f"state norm/trace off by {self.norm_error():.3e}")
        if not self.is_pure:
            herm = np.max(np.abs(self.data - self.data.conj().T))
            if herm > tol:
                raise InvalidDimensionError(f"density matrix non-Hermitian by {herm:.3e}")
            w = np.linalg.eigvalsh(0.5 * (self.data + self.data.conj().T))
            if w.min() < -max(tol, 1e-10):
                raise InvalidDimensionError(f"density matrix has eigenvalue {w.min():.3e}")
        return self


def identity(layout: SpaceLayout) -> Operator:
    return Operator(layout, np.eye(layout.dim, dtype=np.complex128))


def annihilation(dim: int) -> Operator:
    """Lowering operator: sqrt(n) on the first superdiagonal."""
    if dim < 2:
        raise InvalidDimensionError(f"boson dim must be >= 2, got {dim}")
    mat = np.zeros((dim, dim), dtype=np.complex128)
    ns = np.sqrt(np.arange(1, dim))
    mat[np.arange(dim - 1), np.arange(1, dim)] = ns
    return Operator(single_boson_layout(dim), mat)


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, 1j], [-1j, 0]], dtype=np.complex128),
    "z": np.array([[-1, 0], [0, 1]], dtype=np.complex128),
    # (g, e) basis order: sigma^+ = |e><g|, sigma^- = |g><e|
    "plus": np.array([[0, 0], [1, 0]], dtype=np.complex128),
    "minus": np.array([[0, 1], [0, 0]], dtype=np.complex128),
}


def pauli(axis: str) -> Operator:
    """2x2 Pauli/ladder matrix in the (g, e) basis; sigma_z = diag(-1, +1)."""
    if axis not in _PAULI:
        raise InvalidDimensionError(f"unknown Pauli axis {axis!r}")
    return Operator(SpaceLayout((qubit_factor(),)), _PAULI[axis].copy())


def embed(op: Operator, site: int, layout: SpaceLayout) -> Operator:
    """Kronecker-embed a single-factor operator at `site`, identities elsewhere."""
    if len(op.layout) != 1:
        raise LayoutMismatchError("embed expects a single-factor operator")
    if site < 0 or site >= len(layout):
        raise LayoutMismatchError(f"site {site} out of range for {len(layout)} factors")
    if op.layout.dims[0] != layout.dims[site]:
        raise LayoutMismatchError(
            f"operator dim {op.layout.dims[0]} != layout factor dim {layout.dims[site]}")
    mat = np.array([[1.0 + 0j]])
    for i, d in enumerate(layout.dims):
        mat = np.kron(mat, op.mat if i == site else np.eye(d))
    return Operator(layout, mat)


def matrix_exponential(op: Operator) -> Operator:
    """exp(op) via scaling-and-squaring with Pade approximants."""
    if not np.all(np.isfinite(op.mat)):
        raise InvalidDimensionError("matrix exponential of non-finite matrix")
    return Operator(op.layout, scipy.linalg.expm(op.mat))


def displacement_operator(alpha: complex, dim: int) -> Operator:
    """exp(alpha a^dag - alpha* a) on a single boson factor."""
    a = annihilation(dim)
    needed = abs(alpha) ** 2 + 6 * abs(alpha) + 10
    if dim < needed:
        warnings.warn(
            f"dim {dim} marginal for displacement |alpha|={abs(alpha):.3g} "
            f"(recommended >= {needed:.1f})", TruncationWarning, stacklevel=2)
    gen = alpha * a.mat.conj().T - np.conj(alpha) * a.mat
    return Operator(a.layout, scipy.linalg.expm(gen))


def parity_operator(dim: int) -> Operator:
    """diag((-1)^n) on a single boson factor."""
    if dim < 2:
        raise InvalidDimensionError(f"boson dim must be >= 2, got {dim}")
    return Operator(single_boson_layout(dim),
                    np.diag((-1.0 + 0j) ** np.arange(dim)))


def partial_trace(state: QuantumState, keep: Iterable[int]) -> QuantumState:
    """Reduced density matrix on the kept factors (order preserved)."""
    keep = sorted(set(int(k) for k in keep))
    n = len(state.layout)
    if not keep:
        raise LayoutMismatchError("keep set must be non-empty")
    if keep[0] < 0 or keep[-1] >= n:
        raise LayoutMismatchError(f"keep indices {keep} out of range")
    dims = state.layout.dims
    rho = state.to_density_matrix().reshape(dims + dims)
    remaining = list(range(n))
    for i in sorted((i for i in range(n) if i not in keep), reverse=True):
        m = len(remaining)
        r = remaining.index(i)
        rho = np.trace(rho, axis1=r, axis2=r + m)
        remaining.remove(i)
    d = int(np.prod([dims[i] for i in keep]))
    new_layout = SpaceLayout(tuple(state.layout.factors[i] for i in keep))
    return QuantumState(new_layout, rho.reshape(d, d))


def expectation(op: Operator, state: QuantumState) -> complex:
    """<psi|op|psi> or Tr(rho op)."""
    if op.layout != state.layout:
        raise LayoutMismatchError("operator and state layouts differ")
    if state.is_pure:
        return complex(np.vdot(state.data, op.mat @ state.data))
    return complex(np.trace(state.data @ op.mat))


def tensor_states(*states: QuantumState) -> QuantumState:
    """Tensor product of pure states, concatenating layouts in order."""
    vec = np.array([1.0 + 0j])
    factors: list = []
    for s in states:
        if not s.is_pure:
            raise LayoutMismatchError("tensor_states expects pure states")
        vec = np.kron(vec, s.data)
        factors.extend(s.layout.factors)
    return QuantumState(SpaceLayout(tuple(factors)), vec)
