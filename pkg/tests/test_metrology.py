import math

import numpy as np
import pytest

from spincorr import metrology as mt
from spincorr import states
from spincorr.qmatrix import PAULI, tensor


def random_density(rng, dim=4):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def test_h_settings_have_unit_spectra():
    for k in (1, 2, 3):
        h = mt.h_setting(k)
        assert np.allclose(np.linalg.eigvalsh(h), [-1.0, 1.0], atol=1e-12)
    assert np.allclose(mt.h_setting(1), PAULI[2], atol=0.0)
    assert np.allclose(mt.h_setting(3), PAULI[0], atol=0.0)
    with pytest.raises(ValueError):
        mt.h_setting(4)


def test_apply_phase_is_a_local_rotation():
    rng = np.random.default_rng(61)
    rho = random_density(rng)
    out = mt.apply_phase(rho, mt.h_setting(1), 0.0)
    assert np.allclose(out, rho, atol=1e-13)
    out = mt.apply_phase(rho, mt.h_setting(2), 0.37)
    assert np.allclose(np.sort(np.linalg.eigvalsh(out)), np.sort(np.linalg.eigvalsh(rho)), atol=1e-11)
    assert abs(np.trace(out).real - 1.0) < 1e-12
    # generator acts on the first qubit: B's marginal is untouched
    from spincorr.qmatrix import partial_trace

    assert np.allclose(partial_trace(out, (1,)), partial_trace(rho, (1,)), atol=1e-12)


def test_qfi_pure_state_is_four_times_variance():
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    psi = np.kron(plus, np.array([1.0, 0.0]))
    rho = np.outer(psi, psi.conj())
    # <sz^2> - <sz>^2 = 1 on |+>
    assert abs(mt.qfi(rho, mt.h_setting(1)) - 4.0) < 1e-10


def test_qfi_closed_forms_on_probe_states():
    for p in (0.25, 0.5, 0.75, 1.0):
        probe = states.probe_state(p, "quantum")
        f1 = mt.qfi(probe, mt.h_setting(1))
        assert abs(f1 / 4.0 - 2.0 * p**2 / (1.0 + p**2)) < 1e-10
        for k in (2, 3):
            fk = mt.qfi(probe, mt.h_setting(k))
            assert abs(fk / 4.0 - p**2) < 1e-10


def test_qfi_vanishes_for_classical_probe_on_x_setting():
    for p in (0.25, 0.5, 1.0):
        probe = states.probe_state(p, "classical")
        assert mt.qfi(probe, mt.h_setting(3)) < 1e-12


def test_sld_identities():
    rng = np.random.default_rng(62)
    rho = random_density(rng)
    res = mt.sld(rho, mt.h_setting(2))
    assert res.mean_residual < 1e-10  # Tr(rho L) = 0
    assert res.qfi_residual < 1e-9  # Tr(rho L^2) = F
    assert np.max(np.abs(res.matrix - res.matrix.conj().T)) < 1e-10


def test_interferometric_power_probe_laws():
    for p in (0.0, 0.25, 0.5, 0.75, 1.0):
        ipq = mt.interferometric_power(states.probe_state(p, "quantum"))
        assert abs(ipq.value - p**2) < 1e-9
        ipc = mt.interferometric_power(states.probe_state(p, "classical"))
        assert ipc.value <= 1e-9
        assert abs(np.linalg.norm(ipq.minimizing_axis) - 1.0) < 1e-10


def test_interferometric_power_matrix_is_hermitian_psd():
    rng = np.random.default_rng(63)
    res = mt.interferometric_power(random_density(rng))
    m = res.m_matrix
    assert np.max(np.abs(m - m.conj().T)) < 1e-12
    assert np.linalg.eigvalsh(m).min() > -1e-12
    assert abs(np.linalg.eigvalsh(m).min() - res.value) < 1e-12


def test_ip_matrix_reproduces_directional_qfi():
    # F(n)/4 = n^T M n for local generators n . sigma on qubit A
    rng = np.random.default_rng(64)
    rho = random_density(rng)
    m = mt.interferometric_power(rho).m_matrix
    for _ in range(5):
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        h = n[0] * PAULI[0] + n[1] * PAULI[1] + n[2] * PAULI[2]
        direct = mt.qfi(rho, h) / 4.0
        assert abs(direct - float(n @ m @ n)) < 1e-9


def test_ip_oracle_agrees_with_eigenvalue_route():
    rng = np.random.default_rng(65)
    rho = random_density(rng)
    closed = mt.interferometric_power(rho).value
    oracle = mt.ip_oracle(rho, n_samples=400, refine_top=4)
    assert abs(oracle.value - closed) < 1e-6
    assert oracle.n_samples == 400


def test_estimate_recovers_phase():
    probe = states.probe_state(0.75, "quantum")
    for phi0 in (0.3, 0.25 * math.pi, 1.1):
        for k in (1, 2, 3):
            out = mt.estimate(probe, mt.h_setting(k), phi0)
            assert abs(out.mean - phi0) < 1e-6
            assert abs(out.variance * out.n_shots * out.qfi - 1.0) < 1e-12


def test_estimate_sampling_is_seeded():
    probe = states.probe_state(0.5, "quantum")
    h = mt.h_setting(2)
    a = mt.estimate(probe, h, 0.7, nu=200, sampling=True, seed=9)
    b = mt.estimate(probe, h, 0.7, nu=200, sampling=True, seed=9)
    assert a.mean == b.mean
    assert a.probabilities == b.probabilities
    # finite sampling moves the estimate off the exact value a little
    assert abs(a.mean - 0.7) < 0.2


def test_estimate_raises_on_pathological_setting():
    probe = states.probe_state(0.5, "classical")
    with pytest.raises(mt.PathologicalSetting):
        mt.estimate(probe, mt.h_setting(3), 0.25 * math.pi)


def test_blackbox_suite_shape_and_flags():
    rows = mt.blackbox_suite((0.5, 1.0), nu=50)
    assert len(rows) == 2 * 2 * 3
    flagged = [r for r in rows if r.pathological]
    assert all(r.kind == "classical" and r.setting == 3 for r in flagged)
    assert len(flagged) == 2
    for r in flagged:
        assert math.isnan(r.mean)
        assert math.isinf(r.variance)
    for r in rows:
        if not r.pathological:
            assert r.qfi / 4.0 >= r.ip - 1e-9
    with pytest.raises(mt.PathologicalSetting):
        mt.blackbox_suite((0.5,), on_pathological="raise")
    with pytest.raises(ValueError):
        mt.blackbox_suite((0.5,), on_pathological="ignore")


def test_embedded_generator_acts_on_first_qubit():
    h = mt.h_setting(1)
    rho = tensor(np.diag([0.2, 0.8]).astype(complex), np.eye(2) / 2)
    # diagonal state commutes with sz x I: no phase dependence
    out = mt.apply_phase(rho, h, 0.8)
    assert np.allclose(out, rho, atol=1e-13)
    assert mt.qfi(rho, h) < 1e-12
