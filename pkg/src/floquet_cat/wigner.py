"""Wigner function W(a) = (2/pi) <D(a) P D(-a)> on uniform phase-space grids.

Production evaluation uses the Clenshaw-stabilized Laguerre series of the
displaced-parity expectation (the standard dense-matrix algorithm): with
A = 2a and B = |A|^2,

    W(a) = (2/pi) e^{-B/2} Re sum_L c_L(B) A^L / sqrt(L!),
    c_L(B) = sum_n rho_{n, L+n} (-1)^n sqrt(L! n!/(L+n)!) Laguerre(n, L, B)

which is algebraically identical to (2/pi) Tr[rho D(2a) P]. The direct
matrix-exponential form `wigner_displaced_parity` is kept as the slow oracle;
the two must agree to 1e-8 (pinned in tests).

Grids are uniform; values[i, j] corresponds to alpha = re_axis[j] +
1i*im_axis[i] (row-major export, Re horizontal).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import InvalidDimensionError, LayoutMismatchError
from .hilbert import QuantumState, TruncationWarning, annihilation, parity_operator


@dataclass
class WignerGrid:
    re_axis: np.ndarray
    im_axis: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def step(self):
        dre = self.re_axis[1] - self.re_axis[0] if len(self.re_axis) > 1 else 0.0
        dim = self.im_axis[1] - self.im_axis[0] if len(self.im_axis) > 1 else 0.0
        return (float(dre), float(dim))

    def integral(self) -> float:
        dre, dim = self.step
        return float(self.values.sum() * dre * dim)


def square_axes(extent: float, points: int) -> np.ndarray:
    """Symmetric axis closed under 90-degree rotation."""
    return np.linspace(-extent, extent, points)


def _check_axes(re_axis, im_axis):
    re_axis = np.asarray(re_axis, dtype=float)
    im_axis = np.asarray(im_axis, dtype=float)
    if re_axis.size == 0 or im_axis.size == 0 or not (
            np.all(np.isfinite(re_axis)) and np.all(np.isfinite(im_axis))):
        raise InvalidDimensionError("grid axes must be finite and non-empty")
    return re_axis, im_axis


def _state_matrix(rho_m: QuantumState) -> np.ndarray:
    if len(rho_m.layout) != 1 or rho_m.layout.factors[0][0] != "boson":
        raise LayoutMismatchError("wigner expects a state on a single boson factor")
    return rho_m.to_density_matrix()


def _truncation_diagnostics(rho: np.ndarray, amax: float):
    dim = rho.shape[0]
    k = max(dim - 3, 1)
    tail = float(np.real(np.trace(rho))) - float(np.real(np.trace(rho[:k, :k])))
    if tail > 1e-8:
        warnings.warn(f"state occupies the top Fock levels (tail {tail:.2e}); "
                      "increase the truncation", TruncationWarning, stacklevel=3)


def _laguerre_clenshaw(L: int, x: np.ndarray, c: np.ndarray) -> np.ndarray:
    """sum_n c_n (-1)^n sqrt(L! n!/(L+n)!) Laguerre(n, L, x) via Clenshaw."""
    if len(c) == 1:
        y0 = c[0] * np.ones_like(x)
        y1 = np.zeros_like(x)
    elif len(c) == 2:
        y0 = c[0] * np.ones_like(x)
        y1 = c[1] * np.ones_like(x)
    else:
        k = len(c)
        y0 = c[-2] * np.ones_like(x)
        y1 = c[-1] * np.ones_like(x)
        for i in range(3, len(c) + 1):
            k -= 1
            y0, y1 = (c[-i] - y1 * np.sqrt(((k - 1.0) * (L + k - 1.0)) / ((L + k) * k)),
                      y0 - y1 * ((L + 2.0 * k - 1.0) - x) / np.sqrt((L + k) * k))
    return y0 - y1 * ((L + 1.0) - x) / np.sqrt(L + 1.0)


def wigner(rho_m: QuantumState, re_axis, im_axis, label: str = "") -> WignerGrid:
    """Evaluate W on the grid (Clenshaw-Laguerre form of displaced parity)."""
    re_axis, im_axis = _check_axes(re_axis, im_axis)
    rho = _state_matrix(rho_m)
    dim = rho.shape[0]
    amax = float(np.hypot(np.abs(re_axis).max(), np.abs(im_axis).max()))
    _truncation_diagnostics(rho, amax)

    x, y = np.meshgrid(re_axis, im_axis)
    a2 = 2.0 * (x + 1j * y)
    b = np.abs(a2) ** 2
    rho_s = rho * (2.0 - np.eye(dim))
    w = (2.0 * rho[0, -1]) * np.ones_like(a2)
    for L in range(dim - 2, -1, -1):
        diag = np.diag(rho_s, L)
        w = _laguerre_clenshaw(L, b, diag) + w * a2 / np.sqrt(L + 1.0)
    w = w * np.exp(-0.5 * b) * (2.0 / np.pi)
    herm_residual = float(np.max(np.abs(rho - rho.conj().T)))
    meta = {"label": label, "dim": dim, "hermiticity_residual": herm_residual,
            "step": (float(re_axis[1] - re_axis[0]) if re_axis.size > 1 else 0.0,
                     float(im_axis[1] - im_axis[0]) if im_axis.size > 1 else 0.0)}
    return WignerGrid(re_axis=re_axis, im_axis=im_axis,
                      values=np.ascontiguousarray(w.real), metadata=meta)


def wigner_displaced_parity(rho_m: QuantumState, re_axis, im_axis,
                            pad: int = 0) -> WignerGrid:
    """Oracle-grade direct evaluation: one D(2a) = expm(...) per grid point.

    `pad` enlarges the Fock space for the exponential so the displacement is
    represented accurately out to the grid corners; the state block is exact.
    """
    re_axis, im_axis = _check_axes(re_axis, im_axis)
    rho = _state_matrix(rho_m)
    dim = rho.shape[0]
    amax = float(np.hypot(np.abs(re_axis).max(), np.abs(im_axis).max()))
    if pad == 0:
        bmax = 2.0 * amax
        pad = max(dim, int(np.ceil(bmax * bmax + 6.0 * bmax + 10.0)))
    a = annihilation(pad).mat
    ad = a.conj().T
    par = parity_operator(pad).mat.diagonal().real
    rho_t = np.zeros((pad, pad), dtype=np.complex128)
    rho_t[:dim, :dim] = rho.T
    values = np.empty((im_axis.size, re_axis.size), dtype=float)
    for i, yy in enumerate(im_axis):
        for j, xx in enumerate(re_axis):
            beta = 2.0 * (xx + 1j * yy)
            d = scipy.linalg.expm(beta * ad - np.conj(beta) * a)
            val = (2.0 / np.pi) * np.sum(rho_t * (d * par[None, :]))
            values[i, j] = val.real
    meta = {"dim": dim, "pad": pad}
    return WignerGrid(re_axis=re_axis, im_axis=im_axis, values=values, metadata=meta)
