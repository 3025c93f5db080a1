"""Floquet-engineered four-component cat states in a qubit-cavity-magnon system."""

__version__ = "0.1.0"

from .bessel import bessel_j
from .hilbert import (Operator, QuantumState, SpaceLayout, annihilation,
                      displacement_operator, effective_layout, embed, expectation,
                      full_layout, matrix_exponential, parity_operator, partial_trace,
                      pauli)
from .params import (DerivedParams, SystemParams, derive_params, paper_set_1,
                     paper_set_2, regime_report, select_sideband)

__all__ = [
    "__version__",
    "bessel_j",
    "Operator", "QuantumState", "SpaceLayout",
    "annihilation", "displacement_operator", "effective_layout", "embed",
    "expectation", "full_layout", "matrix_exponential", "parity_operator",
    "partial_trace", "pauli",
    "DerivedParams", "SystemParams", "derive_params", "paper_set_1",
    "paper_set_2", "regime_report", "select_sideband",
]
