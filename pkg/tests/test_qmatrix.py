import numpy as np
import pytest

from spincorr import qmatrix as qm


def random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def test_pauli_algebra():
    sx, sy, sz = qm.PAULI
    assert np.allclose(sx @ sy, 1j * sz)
    assert np.allclose(sx @ sx, np.eye(2))
    for s in qm.PAULI:
        assert abs(np.trace(s)) < 1e-15


def test_tensor_order_and_shape():
    up = np.array([[1, 0], [0, 0]], dtype=complex)
    down = np.array([[0, 0], [0, 1]], dtype=complex)
    prod = qm.tensor(up, down)
    assert prod.shape == (4, 4)
    # first factor owns the high-order index
    assert prod[1, 1] == 1.0


def test_partial_trace_recovers_factors():
    rng = np.random.default_rng(3)
    a = random_density(rng, 2)
    b = random_density(rng, 2)
    c = random_density(rng, 2)
    full = qm.tensor(a, b, c)
    assert np.allclose(qm.partial_trace(full, (0,)), a, atol=1e-12)
    assert np.allclose(qm.partial_trace(full, (1,)), b, atol=1e-12)
    assert np.allclose(qm.partial_trace(full, (2,)), c, atol=1e-12)
    ab = qm.partial_trace(full, (0, 1))
    assert np.allclose(ab, qm.tensor(a, b), atol=1e-12)


def test_partial_trace_keeps_given_order():
    rng = np.random.default_rng(4)
    a = random_density(rng, 2)
    b = random_density(rng, 2)
    full = qm.tensor(a, b)
    kept = qm.partial_trace(full, (0, 1))
    assert np.allclose(kept, full, atol=1e-13)
    with pytest.raises(ValueError):
        qm.partial_trace(full, ())


def test_partial_transpose_involution():
    rng = np.random.default_rng(5)
    rho = random_density(rng, 4)
    for q in (0, 1):
        twice = qm.partial_transpose(qm.partial_transpose(rho, q), q)
        assert np.allclose(twice, rho, atol=1e-14)


def test_partial_transpose_product_state_stays_positive():
    rng = np.random.default_rng(6)
    rho = qm.tensor(random_density(rng, 2), random_density(rng, 2))
    vals = np.linalg.eigvalsh(qm.partial_transpose(rho, 1))
    assert vals.min() > -1e-12


def test_spectral_reconstruct_and_phase_convention():
    rng = np.random.default_rng(7)
    rho = random_density(rng, 4)
    dec = qm.spectral(rho)
    assert np.allclose(dec.reconstruct(), rho, atol=1e-12)
    # pivot entries are made real positive, so the decomposition is unique
    for col in dec.eigenvectors.T:
        pivot = col[np.argmax(np.abs(col))]
        assert abs(pivot.imag) < 1e-12
        assert pivot.real > 0


def test_psd_eigenvalues_rejects_negative():
    mat = np.diag([1.5, -0.5]).astype(complex)
    with pytest.raises(ValueError):
        qm.psd_eigenvalues(mat)


def test_entropy_pure_and_maximally_mixed():
    pure = np.zeros((4, 4), dtype=complex)
    pure[0, 0] = 1.0
    assert qm.von_neumann_entropy(pure) == 0.0
    assert abs(qm.von_neumann_entropy(np.eye(4) / 4) - 2.0) < 1e-12


def test_matrix_sqrt_squares_back():
    rng = np.random.default_rng(8)
    rho = random_density(rng, 4)
    root = qm.matrix_sqrt(rho)
    assert np.allclose(root @ root, rho, atol=1e-11)


def test_fidelity_limits():
    rng = np.random.default_rng(9)
    rho = random_density(rng, 4)
    assert abs(qm.fidelity(rho, rho) - 1.0) < 1e-10
    e0 = np.diag([1.0, 0, 0, 0]).astype(complex)
    e1 = np.diag([0, 1.0, 0, 0]).astype(complex)
    assert qm.fidelity(e0, e1) < 1e-12
    sigma = random_density(rng, 4)
    assert abs(qm.fidelity(rho, sigma) - qm.fidelity(sigma, rho)) < 1e-10


def test_distance_metrics_on_orthogonal_pures():
    e0 = np.diag([1.0, 0]).astype(complex)
    e1 = np.diag([0, 1.0]).astype(complex)
    assert abs(qm.distance(e0, e1, "trace") - 1.0) < 1e-12
    assert abs(qm.distance(e0, e1, "hilbert_schmidt") - 2.0) < 1e-12
    assert abs(qm.distance(e0, e1, "bures") - np.sqrt(2.0)) < 1e-12
    assert abs(qm.distance(e0, e1, "fidelity_based") - 1.0) < 1e-12
    with pytest.raises(ValueError):
        qm.distance(e0, e1, "chebyshev")


def test_trace_norm_of_pauli_tensor():
    assert abs(qm.trace_norm(qm.tensor(qm.SIGMA_Z, qm.SIGMA_Z)) - 4.0) < 1e-12


def test_unitary_of_generates_rotation():
    u = qm.unitary_of(qm.SIGMA_Z, 0.3)
    assert np.allclose(u, np.diag([np.exp(-0.3j), np.exp(0.3j)]), atol=1e-13)
    assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-13)
    with pytest.raises(ValueError):
        qm.unitary_of(np.array([[0, 1], [0, 0]], dtype=complex), 0.3)


def test_matrix_exponential_matches_series():
    a = np.array([[0.0, 0.2], [0.0, 0.0]])
    # nilpotent: exp(A) = I + A exactly
    assert np.allclose(qm.matrix_exponential(a), np.eye(2) + a, atol=1e-15)
