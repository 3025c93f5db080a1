"""Collapse-operator sets for the lab-frame and effective master equations.

Operators carry sqrt(rate) prefactors; rates are angular (rad/ns), so a
channel list built from kappa = 2*pi*1e-3 rad/ns corresponds to 1 MHz.
Channels with zero rate are omitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import math

import numpy as np

from .bessel import bessel_j
from .hamiltonians import _ops_eff, _ops_full
from .hilbert import Operator
from .params import DerivedParams, SystemParams


@dataclass(frozen=True)
class CollapseChannel:
    """c(t) = operator + e^{i mod_freq t} * modulated (modulated usually None)."""

    operator: Operator
    label: str
    modulated: Optional[Operator] = None
    mod_freq: float = 0.0


def lab_collapse_channels(params: SystemParams) -> List[CollapseChannel]:
    """Eq.-(13) channels: sqrt(km) m, sqrt(gq1) s1-, sqrt(gq2) s2-, sqrt(ka) a."""
    lay, a, m, s = _ops_full(params)
    out = []
    if params.kappa_m > 0:
        out.append(CollapseChannel(Operator(lay, math.sqrt(params.kappa_m) * m),
                                   "magnon_decay"))
    if params.gamma_q1 > 0:
        out.append(CollapseChannel(Operator(lay, math.sqrt(params.gamma_q1) * s[(1, "minus")]),
                                   "qubit1_decay"))
    if params.gamma_q2 > 0:
        out.append(CollapseChannel(Operator(lay, math.sqrt(params.gamma_q2) * s[(2, "minus")]),
                                   "qubit2_decay"))
    if params.kappa_a > 0:
        out.append(CollapseChannel(Operator(lay, math.sqrt(params.kappa_a) * a),
                                   "cavity_decay"))
    return out


def effective_collapse_channels(params: SystemParams, dp: DerivedParams,
                                rotating_xi: bool = False) -> List[CollapseChannel]:
    """Eq.-(15) channel set on the (qubit1, qubit2, magnon) layout.

    Per qubit: sqrt(g/2) sx, sqrt(g/2) J2(mu) sy, sqrt((J1^2+J3^2) g/2) sz;
    magnon damping sqrt(km) m; and the cavity-mediated hybrid channel
    sqrt(ka) (G/delta sz1 + G/delta sz2 e^{-i Phi} - g3/Dcm m).

    With rotating_xi=True the hybrid's magnon part is tagged with the
    e^{-i xi t} phase it acquires in the Eq.-(7) rotating frame (all other
    channels are invariant there up to irrelevant global phases).
    """
    lay, m, s = _ops_eff(params)
    out = []
    for j, (gamma, mu) in enumerate(((params.gamma_q1, dp.mu1),
                                     (params.gamma_q2, dp.mu2)), start=1):
        if gamma <= 0:
            continue
        out.append(CollapseChannel(
            Operator(lay, math.sqrt(gamma / 2.0) * s[(j, "x")]), f"qubit{j}_x"))
        out.append(CollapseChannel(
            Operator(lay, math.sqrt(gamma / 2.0) * bessel_j(2, mu) * s[(j, "y")]),
            f"qubit{j}_y"))
        w = (bessel_j(1, mu) ** 2 + bessel_j(3, mu) ** 2) * gamma / 2.0
        out.append(CollapseChannel(Operator(lay, math.sqrt(w) * s[(j, "z")]),
                                   f"qubit{j}_z"))
    if params.kappa_m > 0:
        out.append(CollapseChannel(Operator(lay, math.sqrt(params.kappa_m) * m),
                                   "magnon_decay"))
    if params.kappa_a > 0:
        root = math.sqrt(params.kappa_a)
        qubit_part = (dp.G / dp.delta) * (
            s[(1, "z")] + np.exp(-1j * dp.Phi) * s[(2, "z")])
        magnon_part = -(params.g3 / dp.delta_cm) * m
        if rotating_xi:
            out.append(CollapseChannel(Operator(lay, root * qubit_part), "hybrid",
                                       modulated=Operator(lay, root * magnon_part),
                                       mod_freq=-dp.xi))
        else:
            out.append(CollapseChannel(Operator(lay, root * (qubit_part + magnon_part)),
                                       "hybrid"))
    return out
