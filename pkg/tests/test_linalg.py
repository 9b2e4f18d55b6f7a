"""Matrix utilities: tensors, embeddings, spectral maps, ordered products."""

import numpy as np
import pytest

from chsh_selftest import linalg


def test_pauli_algebra():
    X, Z = linalg.PAULI_X, linalg.PAULI_Z
    assert np.allclose(X @ X, np.eye(2))
    assert np.allclose(Z @ Z, np.eye(2))
    assert np.allclose(X @ Z, -Z @ X)


def test_tensor_first_factor_most_significant():
    X, Z = linalg.PAULI_X, linalg.PAULI_Z
    m = linalg.tensor(Z, X)
    # entry (0,1) of Z⊗X couples |00> and |01>: Z on qubit 1 gives +1, X flips qubit 2
    assert m[0, 1] == 1
    assert m[2, 3] == -1
    assert np.allclose(m, np.kron(Z, X))


def test_embed_qubit_op():
    X = linalg.PAULI_X
    m = linalg.embed_qubit_op(X, 1, 2)
    assert np.allclose(m, np.kron(X, np.eye(2)))
    m = linalg.embed_qubit_op(X, 2, 2)
    assert np.allclose(m, np.kron(np.eye(2), X))
    with pytest.raises(ValueError):
        linalg.embed_qubit_op(X, 3, 2)


def test_residuals():
    X = linalg.PAULI_X
    assert linalg.hermiticity_residual(X) == 0.0
    assert linalg.unitarity_residual(X) == 0.0
    assert linalg.commutation_residual(X, linalg.PAULI_Z) == 2.0
    skew = np.array([[0, 1], [-1, 0]], dtype=complex)
    assert linalg.hermiticity_residual(skew) == 2.0
    half = 0.5 * X
    assert linalg.unitarity_residual(half) == 0.75


def test_operator_abs():
    m = np.diag([2.0, -3.0]).astype(complex)
    assert np.allclose(linalg.operator_abs(m), np.diag([2.0, 3.0]))
    # |sigma_z| = I
    assert np.allclose(linalg.operator_abs(linalg.PAULI_Z), np.eye(2))
    # |sigma_x + sigma_z| = sqrt(2) * I  (eigenvalues are ±sqrt(2))
    m = linalg.PAULI_X + linalg.PAULI_Z
    assert np.allclose(linalg.operator_abs(m), np.sqrt(2) * np.eye(2))
    with pytest.raises(ValueError):
        linalg.operator_abs(np.array([[0, 1], [0, 0]], dtype=complex))


def test_sign_normalize():
    m = (linalg.PAULI_X + linalg.PAULI_Z) / np.sqrt(2)
    out = linalg.sign_normalize(2 * m)
    assert np.allclose(out, m)
    assert np.allclose(out @ out, np.eye(2))
    # zero eigenvalues are mapped to +1, so a rank-one projector direction fills in
    out = linalg.sign_normalize(np.diag([0.0, 5.0]).astype(complex))
    assert np.allclose(out, np.eye(2))
    out = linalg.sign_normalize(np.zeros((2, 2), dtype=complex))
    assert np.allclose(out, np.eye(2))


def test_sign_normalize_squares_to_identity():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = (a + a.conj().T) / 2
    out = linalg.sign_normalize(h)
    assert np.allclose(out @ out, np.eye(4), atol=1e-12)
    assert linalg.hermiticity_residual(out) < 1e-12


def test_ordered_product_order():
    X, Z = linalg.PAULI_X, linalg.PAULI_Z
    # selector "11": index-1 factor leftmost
    m = linalg.ordered_product([X, Z], "11")
    assert np.allclose(m, X @ Z)
    assert not np.allclose(m, Z @ X)
    assert np.allclose(linalg.ordered_product([X, Z], "00"), np.eye(2))
    assert np.allclose(linalg.ordered_product([X, Z], "01"), Z)
    with pytest.raises(ValueError):
        linalg.ordered_product([X], "11")


def test_apply_on_sides():
    rng = np.random.default_rng(1)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    # A side: dim_a=2, dim_b=4
    expect = (np.kron(m, np.eye(4)) @ psi)
    assert np.allclose(linalg.apply_on_a(m, psi, 2, 4), expect)
    # B side: dim_a=4, dim_b=2
    expect = (np.kron(np.eye(4), m) @ psi)
    assert np.allclose(linalg.apply_on_b(m, psi, 4, 2), expect)


def test_pair_expectation_matches_dense():
    rng = np.random.default_rng(2)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    a = rng.normal(size=(2, 2)); a = (a + a.T) / 2
    b = rng.normal(size=(2, 2)); b = (b + b.T) / 2
    dense = np.vdot(psi, np.kron(a, b) @ psi).real
    assert np.isclose(linalg.pair_expectation(a.astype(complex), b.astype(complex), psi, 2, 2), dense)


def test_haar_unitary():
    rng = np.random.default_rng(3)
    u = linalg.haar_unitary(4, rng)
    assert linalg.unitarity_residual(u) < 1e-12
    v = linalg.haar_unitary(4, np.random.default_rng(3))
    assert np.array_equal(u, v)
