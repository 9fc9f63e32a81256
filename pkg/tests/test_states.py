import numpy as np
import pytest

from spincorr import states
from spincorr.qmatrix import PAULI, tensor


def test_m3n_physicality_is_spectral_and_n_dependent():
    with pytest.raises(states.UnphysicalStateError):
        states.m3n_state((1.0, 1.0, 1.0), 2)
    rho = states.m3n_state((1.0, 0.7, -0.7), 2)
    assert rho.n_qubits == 2
    # the same triple is not a state on three qubits
    with pytest.raises(states.UnphysicalStateError):
        states.m3n_state((1.0, 0.7, -0.7), 3)
    # check=False skips the gate on purpose
    skipped = states.m3n_state((1.0, 1.0, 1.0), 2, check=False)
    assert np.linalg.eigvalsh(skipped.matrix).min() < -0.4


def test_m3n_matrix_structure():
    c = (0.3, -0.2, 0.5)
    rho = states.m3n_state(c, 2).matrix
    rebuilt = 0.25 * np.eye(4, dtype=complex)
    for i, ci in enumerate(c):
        rebuilt += 0.25 * ci * tensor(PAULI[i], PAULI[i])
    assert np.allclose(rho, rebuilt, atol=1e-14)
    # marginals of the family are maximally mixed
    from spincorr.qmatrix import partial_trace

    assert np.allclose(partial_trace(rho, (0,)), np.eye(2) / 2, atol=1e-14)
    with pytest.raises(ValueError):
        states.m3n_state(c, 1)


def test_correlation_triple_roundtrip():
    c = (0.49, 0.20, 0.067)
    got = states.correlation_triple(states.bell_diagonal(c))
    assert np.allclose(got.as_array(), c, atol=1e-14)
    got_n = states.correlation_triple_n(states.m3n_state((0.7, 0.3, -0.3), 3))
    assert np.allclose(got_n.as_array(), (0.7, 0.3, -0.3), atol=1e-13)


def test_correlation_triple_validation():
    with pytest.raises(ValueError):
        states.CorrelationTriple(1.2, 0.0, 0.0)
    with pytest.raises(ValueError):
        states.CorrelationTriple.from_any((0.1, 0.2))


def test_bell_states_and_their_triples():
    expected = {
        "phi+": (1.0, -1.0, 1.0),
        "phi-": (-1.0, 1.0, 1.0),
        "psi+": (1.0, 1.0, -1.0),
        "psi-": (-1.0, -1.0, -1.0),
    }
    for name, trip in expected.items():
        psi = states.bell(name)
        assert abs(np.linalg.norm(psi) - 1.0) < 1e-14
        rho = np.outer(psi, psi.conj())
        got = states.correlation_triple(rho)
        assert np.allclose(got.as_array(), trip, atol=1e-14)
    with pytest.raises(ValueError):
        states.bell("omega")


def test_pseudopure_matrix_and_validation():
    psi = states.bell("psi-")
    eps = 0.3
    rho = states.pseudopure(psi, eps).matrix
    expected = (1 - eps) / 4 * np.eye(4) + eps * np.outer(psi, psi.conj())
    assert np.allclose(rho, expected, atol=1e-14)
    assert abs(np.trace(rho).real - 1.0) < 1e-14
    with pytest.raises(ValueError):
        states.pseudopure(psi, 1.5)
    with pytest.raises(ValueError):
        states.pseudopure(2.0 * psi, 0.5)


def test_pseudopure_entanglement_boundary():
    psi = states.bell("psi-")
    for eps in (0.05, 0.2, 1.0 / 3.0 - 1e-6):
        res = states.peres_entangled(states.pseudopure(psi, eps))
        assert not res.entangled
        # smallest partial-transpose eigenvalue is (1 - 3 eps)/4
        assert abs(res.negative_eigenvalue - (1 - 3 * eps) / 4) < 1e-12
    for eps in (1.0 / 3.0 + 1e-6, 0.5, 1.0):
        assert states.peres_entangled(states.pseudopure(psi, eps)).entangled


def test_peres_requires_two_qubits():
    with pytest.raises(ValueError):
        states.peres_entangled(np.eye(8) / 8)


def test_probe_state_matrices_are_the_declared_families():
    p = 0.6
    quantum = 0.25 * np.array(
        [
            [1 + p**2, 0, 0, 2 * p],
            [0, 1 - p**2, 0, 0],
            [0, 0, 1 - p**2, 0],
            [2 * p, 0, 0, 1 + p**2],
        ]
    )
    classical = 0.25 * np.array(
        [
            [1, p**2, p, p],
            [p**2, 1, p, p],
            [p, p, 1, p**2],
            [p, p, p**2, 1],
        ]
    )
    assert np.allclose(states.probe_state(p, "quantum").matrix, quantum, atol=1e-15)
    assert np.allclose(states.probe_state(p, "classical").matrix, classical, atol=1e-15)
    with pytest.raises(ValueError):
        states.probe_state(p, "thermal")
    with pytest.raises(ValueError):
        states.probe_state(-0.1, "quantum")


def test_probe_states_share_purity():
    for p in (0.0, 0.25, 0.7, 1.0):
        target = (1 + p**2) ** 2 / 4
        assert abs(states.purity(states.probe_state(p, "quantum")) - target) < 1e-12
        assert abs(states.purity(states.probe_state(p, "classical")) - target) < 1e-12


def test_quantum_probe_is_bell_diagonal_classical_is_not():
    assert states.is_bell_diagonal(states.probe_state(0.5, "quantum"))
    assert not states.is_bell_diagonal(states.probe_state(0.5, "classical"))
    assert not states.is_bell_diagonal(np.eye(8) / 8)


def test_direct_measure_matches_correlation_triple():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    trip = states.correlation_triple(rho)
    for i, want in enumerate(trip):
        assert abs(states.direct_measure_ci(rho, i) - want) < 1e-12
    with pytest.raises(ValueError):
        states.direct_measure_ci(rho, 3)


def test_direct_measure_unitaries_are_involutive_basis_maps():
    for i, u in enumerate(states.DIRECT_MEASURE_UNITARIES):
        assert np.allclose(u @ u.conj().T, np.eye(4), atol=1e-14)
        mapped = u.conj().T @ tensor(PAULI[i], np.eye(2)) @ u
        assert np.allclose(mapped, tensor(PAULI[i], PAULI[i]), atol=1e-14)


def test_freezing_family_parity_rules():
    t2 = states.freezing_family(2, 0.7)
    assert (t2.c1, t2.c2, t2.c3) == (1.0, 0.7, -0.7)
    t4 = states.freezing_family(4, 0.7)
    assert (t4.c1, t4.c2, t4.c3) == (1.0, 0.7, 0.7)
    t6 = states.freezing_family(6, 0.4)
    assert t6.c3 == -0.4
    for n in (3, 5):
        with pytest.raises(states.UnphysicalStateError):
            states.freezing_family(n, 0.7)


def test_json_roundtrip():
    rho = states.probe_state(0.3, "classical")
    doc = states.to_json_dict(rho)
    back = states.from_json_dict(doc)
    assert np.allclose(back.matrix, rho.matrix, atol=0.0)
    doc["matrix"] = doc["matrix"][:-1]
    with pytest.raises(ValueError):
        states.from_json_dict(doc)


def test_from_matrix_validation():
    with pytest.raises(states.UnphysicalStateError):
        states.DensityMatrix.from_matrix(np.diag([1.5, -0.5]))
    with pytest.raises(states.UnphysicalStateError):
        states.DensityMatrix.from_matrix(np.diag([0.7, 0.7]))
    bad = np.zeros((2, 2), dtype=complex)
    bad[0, 1] = 1.0
    bad[0, 0] = bad[1, 1] = 0.5
    with pytest.raises(states.UnphysicalStateError):
        states.DensityMatrix.from_matrix(bad)


def test_deviation_units_rescale():
    eps = 0.01
    val = 0.39 * eps**2 / np.log(2.0)
    assert abs(states.deviation_units(val, eps) - 0.39) < 1e-12
    with pytest.raises(ValueError):
        states.deviation_units(1.0, 0.0)
