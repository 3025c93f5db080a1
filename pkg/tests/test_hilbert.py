"""Operator-core: constructors, embedding, traces, exponentials."""

import numpy as np
import pytest

from floquet_cat.errors import InvalidDimensionError, LayoutMismatchError
from floquet_cat.hilbert import (Operator, QuantumState, SpaceLayout, TruncationWarning,
                                 annihilation, boson_factor, displacement_operator,
                                 embed, expectation, matrix_exponential,
                                 parity_operator, partial_trace, pauli, qubit_factor,
                                 single_boson_layout, tensor_states)
from floquet_cat.states import coherent, fock
from tests.conftest import random_complex


def test_annihilation_small():
    assert np.array_equal(annihilation(2).mat, [[0, 1], [0, 0]])
    a3 = annihilation(3).mat
    assert a3[0, 1] == 1.0 and a3[1, 2] == pytest.approx(np.sqrt(2))
    assert np.count_nonzero(a3) == 2


def test_number_operator_diagonal():
    a = annihilation(5)
    n = a.dag() @ a
    assert np.allclose(n.mat, np.diag([0, 1, 2, 3, 4]))


def test_annihilation_rejects_dim_one():
    with pytest.raises(InvalidDimensionError):
        annihilation(1)


def test_pauli_conventions():
    assert np.allclose(pauli("z").mat, np.diag([-1, 1]))
    # sigma+ sigma- = |e><e| in the (g, e) order
    proj_e = pauli("plus") @ pauli("minus")
    assert np.allclose(proj_e.mat, np.diag([0, 1]))
    assert np.allclose((pauli("x") @ pauli("x")).mat, np.eye(2))
    assert np.allclose(pauli("plus").mat,
                       0.5 * (pauli("x").mat + 1j * pauli("y").mat))


def test_embed_basics():
    lay = SpaceLayout((qubit_factor(), qubit_factor()))
    sz = embed(pauli("z"), 0, lay)
    assert np.allclose(sz.mat, np.kron(pauli("z").mat, np.eye(2)))
    a = embed(annihilation(3), 2, SpaceLayout(
        (qubit_factor(), qubit_factor(), boson_factor(3), boson_factor(3))))
    assert a.mat.shape == (36, 36)


def test_embed_disjoint_commutation(rng):
    lay = SpaceLayout((boson_factor(3), boson_factor(4)))
    a = Operator(single_boson_layout(3), random_complex(rng, 3))
    b = Operator(SpaceLayout((boson_factor(4),)), random_complex(rng, 4))
    ea, eb = embed(a, 0, lay), embed(b, 1, lay)
    assert np.max(np.abs((ea @ eb - eb @ ea).mat)) < 1e-13


def test_embed_preserves_spectrum(rng):
    lay = SpaceLayout((boson_factor(4), boson_factor(5)))
    a = Operator(SpaceLayout((boson_factor(4),)), random_complex(rng, 4))
    ea = embed(a, 0, lay)
    ev_a = np.sort_complex(np.linalg.eigvals(a.mat))
    ev_e = np.sort_complex(np.linalg.eigvals(ea.mat))
    assert np.allclose(np.sort_complex(np.repeat(ev_a, 5)), ev_e, atol=1e-9)


def test_embed_errors():
    lay = SpaceLayout((qubit_factor(), boson_factor(3)))
    with pytest.raises(LayoutMismatchError):
        embed(pauli("z"), 5, lay)
    with pytest.raises(LayoutMismatchError):
        embed(pauli("z"), 1, lay)


def test_matrix_exponential_identities():
    lay = single_boson_layout(4)
    z = Operator(lay, np.zeros((4, 4)))
    assert np.allclose(matrix_exponential(z).mat, np.eye(4))
    u = matrix_exponential(1j * np.pi * Operator(SpaceLayout((qubit_factor(),)),
                                                 pauli("z").mat))
    assert np.allclose(u.mat, -np.eye(2), atol=1e-12)


def test_matrix_exponential_rejects_nonfinite():
    lay = single_boson_layout(2)
    with pytest.raises(InvalidDimensionError):
        matrix_exponential(Operator(lay, np.array([[np.inf, 0], [0, 0]])))


def test_exponential_unitarity_property(rng):
    for dim in (3, 16, 64):
        m = random_complex(rng, dim)
        anti = m - m.conj().T
        anti *= 10.0 / max(np.linalg.norm(anti, 2), 1e-12)
        u = matrix_exponential(Operator(single_boson_layout(dim), anti))
        assert u.is_unitary(1e-10)


def test_displacement_operator_against_coherent_expansion():
    # exp(alpha a+ - alpha* a)|0> equals the closed-form Fock expansion
    alpha = 0.7 - 0.45j
    d = displacement_operator(alpha, 40)
    psi = d.mat[:, 0]
    ref = coherent(alpha, 40).data
    overlap = abs(np.vdot(ref, psi)) ** 2
    assert overlap >= 1.0 - 1e-10


def test_displacement_inverse_pair_and_mean():
    for alpha in (0.3, 1.3 + 0.9j, -2.0j):
        d = displacement_operator(alpha, 40)
        dinv = displacement_operator(-alpha, 40)
        assert np.max(np.abs((d @ dinv).mat - np.eye(40))) < 1e-10
    d1 = displacement_operator(1.0, 40)
    nvec = np.arange(40)
    psi = d1.mat[:, 0]
    assert np.real(np.sum(nvec * np.abs(psi) ** 2)) == pytest.approx(1.0, abs=1e-8)
    with pytest.warns(TruncationWarning):
        displacement_operator(3.0, 10)


def test_parity_operator():
    p2 = parity_operator(2)
    assert np.allclose(p2.mat, np.diag([1, -1]))
    p5 = parity_operator(5)
    assert np.allclose((p5 @ p5).mat, np.eye(5))
    assert expectation(p5, fock(5, 0)) == pytest.approx(1.0)


def test_partial_trace_product_state(rng):
    psi1 = random_complex(rng, 3)[:, 0]
    psi1 /= np.linalg.norm(psi1)
    psi2 = random_complex(rng, 4)[:, 0]
    psi2 /= np.linalg.norm(psi2)
    joint = tensor_states(
        QuantumState(single_boson_layout(3), psi1),
        QuantumState(SpaceLayout((boson_factor(4),)), psi2))
    red = partial_trace(joint, [1])
    assert np.allclose(red.data, np.outer(psi2, psi2.conj()), atol=1e-12)
    assert np.trace(red.data).real == pytest.approx(1.0, abs=1e-12)


def test_partial_trace_bell_state():
    lay = SpaceLayout((qubit_factor(), qubit_factor()))
    bell = QuantumState(lay, np.array([1, 0, 0, 1]) / np.sqrt(2))
    red = partial_trace(bell, [0])
    assert np.allclose(red.data, 0.5 * np.eye(2), atol=1e-12)


def test_partial_trace_three_factor_keep_two(rng):
    lay = SpaceLayout((qubit_factor(), boson_factor(3), boson_factor(4)))
    psi = random_complex(rng, lay.dim)[:, 0]
    psi /= np.linalg.norm(psi)
    st = QuantumState(lay, psi)
    red = partial_trace(st, [0, 2])
    assert red.layout.dims == (2, 4)
    assert np.trace(red.data).real == pytest.approx(1.0, abs=1e-12)
    # consistency: tracing the remaining factor in two steps
    red2 = partial_trace(partial_trace(st, [0, 2]), [1])
    red3 = partial_trace(st, [2])
    assert np.allclose(red2.data, red3.data, atol=1e-12)


def test_partial_trace_empty_keep():
    lay = SpaceLayout((qubit_factor(), qubit_factor()))
    st = QuantumState(lay, np.array([1, 0, 0, 0], dtype=complex))
    with pytest.raises(LayoutMismatchError):
        partial_trace(st, [])


def test_expectation_values():
    a = annihilation(40)
    n = a.dag() @ a
    assert expectation(n, fock(40, 0)) == pytest.approx(0.0, abs=1e-14)
    for alpha in (0.5, 1.7 - 0.8j):
        c = coherent(alpha, 40)
        assert expectation(a, c) == pytest.approx(alpha, abs=1e-8)
    herm = expectation(n, coherent(1.2j, 40))
    assert abs(herm.imag) < 1e-12


def test_expectation_layout_mismatch():
    with pytest.raises(LayoutMismatchError):
        expectation(annihilation(3), fock(4, 0))


def test_constructors_deterministic():
    assert np.array_equal(annihilation(17).mat, annihilation(17).mat)
    assert np.array_equal(displacement_operator(0.7j, 25).mat,
                          displacement_operator(0.7j, 25).mat)
    assert np.array_equal(parity_operator(9).mat, parity_operator(9).mat)
