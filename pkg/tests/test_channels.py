import numpy as np
import pytest

from spincorr import channels as ch
from spincorr import states
from spincorr.qmatrix import PAULI, tensor


def random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def bloch_vector(rho):
    return np.array([np.trace(s @ rho).real for s in PAULI])


def test_completeness_residuals_across_parameter_draws():
    rng = np.random.default_rng(41)
    for _ in range(100):
        q = rng.random()
        g = rng.random()
        p = rng.random()
        assert ch.pd_channel(ch.PdParams(q=q)).completeness_residual() <= 1e-12
        assert ch.gad_channel(ch.GadParams(gamma=g, p_bias=p)).completeness_residual() <= 1e-12
        assert ch.gpd_channel(q).completeness_residual() <= 1e-12


def test_pd_scales_coherences_exactly():
    rng = np.random.default_rng(42)
    rho = random_density(rng, 2)
    for q in (0.0, 0.3, 1.0):
        out = ch.apply(ch.pd_channel(q), rho)
        assert abs(out[0, 1] - (1 - q) * rho[0, 1]) < 1e-15
        assert abs(out[0, 0] - rho[0, 0]) < 1e-15
        assert abs(np.trace(out).real - 1.0) < 1e-14


def test_pd_composition_is_a_semigroup():
    rng = np.random.default_rng(43)
    rho = random_density(rng, 2)
    q1, q2 = 0.35, 0.6
    step = ch.apply(ch.pd_channel(q2), ch.apply(ch.pd_channel(q1), rho))
    merged = ch.apply(ch.pd_channel(1.0 - (1.0 - q1) * (1.0 - q2)), rho)
    assert np.max(np.abs(step - merged)) < 1e-10


def test_pd_from_time():
    p = ch.PdParams.from_time(0.5, 2.0)
    assert abs(p.q - (1.0 - np.exp(-0.25))) < 1e-15
    with pytest.raises(ch.ChannelError):
        ch.PdParams.from_time(-1.0, 2.0)


def test_gad_fixed_point():
    for g in (0.2, 0.7, 1.0):
        for p in (0.0, 0.3, 0.5, 1.0):
            target = np.diag([p, 1.0 - p]).astype(complex)
            out = ch.apply(ch.gad_channel(ch.GadParams(gamma=g, p_bias=p)), target)
            assert np.max(np.abs(out - target)) <= 1e-10


def test_gad_bloch_transfer_at_balanced_bias():
    rng = np.random.default_rng(44)
    rho = random_density(rng, 2)
    r_in = bloch_vector(rho)
    g = 0.4
    out = ch.apply(ch.gad_channel(ch.GadParams(gamma=g, p_bias=0.5)), rho)
    r_out = bloch_vector(out)
    keep = np.sqrt(1.0 - g)
    assert abs(r_out[0] - keep * r_in[0]) < 1e-12
    assert abs(r_out[1] - keep * r_in[1]) < 1e-12
    assert abs(r_out[2] - (1.0 - g) * r_in[2]) < 1e-12  # no affine shift at p=1/2


def test_gad_from_alpha_and_time():
    p = ch.GadParams.from_alpha(0.3, 0.1)
    assert abs(p.p_bias - 0.45) < 1e-15
    pt = ch.GadParams.from_time(1.0, 2.0, alpha=0.0)
    assert abs(pt.gamma - (1.0 - np.exp(-0.5))) < 1e-15
    assert pt.p_bias == 0.5


def test_gpd_spares_cross_diagonal_elements():
    rng = np.random.default_rng(45)
    rho = random_density(rng, 4)
    q = 0.8
    out = ch.apply(ch.gpd_channel(q), rho)
    # the two anti-diagonal coherence pairs pass through untouched
    for i, j in ((0, 3), (1, 2)):
        assert abs(out[i, j] - rho[i, j]) < 1e-15
    # everything else off-diagonal is damped by exactly (1 - q)
    for i, j in ((0, 1), (0, 2), (1, 3), (2, 3)):
        assert abs(out[i, j] - (1 - q) * rho[i, j]) < 1e-15
    assert np.allclose(np.diag(out), np.diag(rho), atol=1e-15)


def test_gpd_leaves_bell_diagonal_invariant():
    for trip in [(1.0, 0.7, -0.7), (0.49, 0.20, 0.067), (0.5, -0.4, 0.1)]:
        rho = states.bell_diagonal(trip).matrix
        for q in (0.25, 0.9, 1.0):
            out = ch.apply(ch.gpd_channel(q), rho)
            assert np.max(np.abs(out - rho)) <= 1e-14


def test_channel_validation_errors():
    with pytest.raises(ch.ChannelError):
        ch.PdParams(q=1.5)
    with pytest.raises(ch.ChannelError):
        ch.GadParams(gamma=-0.1)
    with pytest.raises(ch.ChannelError):
        ch.gpd_channel(2.0)
    with pytest.raises(ch.ChannelError):
        ch.KrausChannel(2, ())
    with pytest.raises(ch.ChannelError):
        ch.KrausChannel(2, (np.eye(3),))
    with pytest.raises(ch.ChannelError):
        # incomplete set: sum E^dag E = I/2
        ch.KrausChannel(2, (np.eye(2) / np.sqrt(2.0),))


def test_apply_checks_dimensions():
    rho = np.eye(4) / 4
    with pytest.raises(ch.ChannelError):
        ch.apply(ch.pd_channel(0.5), rho)


def test_local_apply_matches_tensor_channel():
    rng = np.random.default_rng(46)
    rho = random_density(rng, 4)
    pd = ch.pd_channel(0.4)
    gad = ch.gad_channel(ch.GadParams(gamma=0.3, p_bias=0.2))
    seq = ch.local_apply([pd, gad], rho)
    joint = ch.apply(ch.tensor_channel([pd, gad]), rho)
    assert np.max(np.abs(seq - joint)) < 1e-12


def test_local_apply_identity_slots_and_validation():
    rng = np.random.default_rng(47)
    rho = random_density(rng, 4)
    pd = ch.pd_channel(0.6)
    only_b = ch.local_apply([None, pd], rho)
    direct = ch.apply(ch.tensor_channel([ch.identity_channel(2), pd]), rho)
    assert np.max(np.abs(only_b - direct)) < 1e-13
    # acting on A only must leave B's marginal alone
    from spincorr.qmatrix import partial_trace

    only_a = ch.local_apply([pd, None], rho)
    assert np.allclose(partial_trace(only_a, (1,)), partial_trace(rho, (1,)), atol=1e-13)
    with pytest.raises(ch.ChannelError):
        ch.local_apply([pd], rho)  # qubit count mismatch


def test_kraus_ops_are_frozen_copies():
    chan = ch.pd_channel(0.5)
    with pytest.raises(Exception):
        chan.kraus_ops[0][0, 0] = 9.9
