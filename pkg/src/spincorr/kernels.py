"""Scan kernels for the measurement-basis optimizers.

These are the hot loops of the package: every discord-style quantifier
minimizes some objective over a grid of projective-measurement axes, and
the grids are re-evaluated at every time step of a trajectory. Each kernel
exists twice, as a pure-numpy batch computation (below) and as a compiled
loop (_kernels_numba). `backend.active_backend()` picks which one runs.

Conventions shared by all kernels:
  * axes is an (m, 3) float array of unit Bloch vectors n.
  * two-qubit matrices are 4x4 complex128, qubit A is the first factor.
  * measuring qubit A along n sends rho to chi = (rho + S rho S)/2 with
    S = (n.sigma) tensor identity; this equals the usual two-projector
    pinching because S is an involution.
"""

from __future__ import annotations

import numpy as np

from .backend import active_backend

_LOG2 = np.log(2.0)


def axis_grid(n_theta: int, n_phi: int) -> np.ndarray:
    """Deterministic (n_theta*n_phi, 3) grid of measurement axes.

    theta spans [0, pi] inclusive, phi spans [0, 2pi) without the endpoint.
    """
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    st = np.sin(tt)
    axes = np.stack(
        [st * np.cos(pp), st * np.sin(pp), np.cos(tt)], axis=-1
    )
    return axes.reshape(-1, 3)


def angles_to_axis(theta: float, phi: float) -> np.ndarray:
    st = np.sin(theta)
    return np.array([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])


def _binary_entropy(x: np.ndarray) -> np.ndarray:
    # 0 log 0 = 0; x is clipped because |v| can overshoot 1 by rounding.
    x = np.clip(x, 0.0, 1.0)
    out = np.zeros_like(x)
    inner = (x > 0.0) & (x < 1.0)
    xi = x[inner]
    out[inner] = -(xi * np.log(xi) + (1.0 - xi) * np.log(1.0 - xi)) / _LOG2
    return out


def _pauli_dot_tensor_identity(axes: np.ndarray) -> np.ndarray:
    """(m,4,4) stack of (n.sigma) tensor I for each axis row."""
    m = axes.shape[0]
    nx, ny, nz = axes[:, 0], axes[:, 1], axes[:, 2]
    s = np.zeros((m, 4, 4), dtype=np.complex128)
    s[:, 0, 0] = nz
    s[:, 1, 1] = nz
    s[:, 2, 2] = -nz
    s[:, 3, 3] = -nz
    off = nx - 1j * ny
    s[:, 0, 2] = off
    s[:, 1, 3] = off
    s[:, 2, 0] = np.conj(off)
    s[:, 3, 1] = np.conj(off)
    return s


def _conditional_entropy_scan_np(
    a: np.ndarray, b: np.ndarray, t_mat: np.ndarray, axes: np.ndarray
) -> np.ndarray:
    p_plus = 0.5 * (1.0 + axes @ a)
    p_minus = 1.0 - p_plus
    tn = axes @ t_mat  # row s holds T^T n_s
    out = np.zeros(axes.shape[0])
    for sign, p in ((1.0, p_plus), (-1.0, p_minus)):
        ok = p > 1e-15
        v = (b[None, :] + sign * tn[ok]) / (2.0 * p[ok, None])
        r = np.linalg.norm(v, axis=1)
        out[ok] += p[ok] * _binary_entropy(0.5 * (1.0 + r))
    return out


def _measured_distance_scan_np(rho: np.ndarray, axes: np.ndarray) -> np.ndarray:
    s = _pauli_dot_tensor_identity(axes)
    delta = 0.5 * (rho[None, :, :] - s @ rho @ s)
    w = np.linalg.eigvalsh(delta)
    return np.abs(w).sum(axis=1)


def _measured_fidelity_scan_np(
    sqrt_rho: np.ndarray, rho: np.ndarray, axes: np.ndarray
) -> np.ndarray:
    s = _pauli_dot_tensor_identity(axes)
    chi = 0.5 * (rho[None, :, :] + s @ rho @ s)
    inner = sqrt_rho[None, :, :] @ chi @ sqrt_rho[None, :, :]
    w = np.linalg.eigvalsh(inner)
    np.clip(w, 0.0, None, out=w)
    root_sum = np.sqrt(w).sum(axis=1)
    return root_sum**2


def _qfi_pair_weights(weights: np.ndarray) -> np.ndarray:
    """G_il = 2 (w_i - w_l)^2 / (w_i + w_l), zero where the pair sum vanishes."""
    wsum = weights[:, None] + weights[None, :]
    wdiff = weights[:, None] - weights[None, :]
    g = np.zeros_like(wsum)
    ok = wsum > 1e-12
    g[ok] = 2.0 * wdiff[ok] ** 2 / wsum[ok]
    np.fill_diagonal(g, 0.0)
    return g


def _ip_objective_scan_np(
    weights: np.ndarray, vecs: np.ndarray, angles: np.ndarray
) -> np.ndarray:
    m = angles.shape[0]
    half_a = 0.5 * angles[:, 0]
    half_b = 0.5 * angles[:, 1]
    half_g = 0.5 * angles[:, 2]
    ca, sa = np.cos(half_a), np.sin(half_a)
    eb = np.exp(-1j * half_b)
    eg = np.exp(-1j * half_g)
    # U = Rz(b) Ry(a) Rz(g), then H = U diag(1,-1) U^dag
    u = np.zeros((m, 2, 2), dtype=np.complex128)
    u[:, 0, 0] = eb * ca * eg
    u[:, 0, 1] = -eb * sa * np.conj(eg)
    u[:, 1, 0] = np.conj(eb) * sa * eg
    u[:, 1, 1] = np.conj(eb) * ca * np.conj(eg)
    h = np.einsum("sij,j,skj->sik", u, np.array([1.0, -1.0]), u.conj())
    ht = np.zeros((m, 4, 4), dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            ht[:, 2 * i, 2 * j] = h[:, i, j]
            ht[:, 2 * i + 1, 2 * j + 1] = h[:, i, j]
    a_mat = np.einsum("ji,sjk,kl->sil", vecs.conj(), ht, vecs)
    g = _qfi_pair_weights(weights)
    return np.einsum("il,sil->s", g, np.abs(a_mat) ** 2).real


_NUMPY_IMPLS = {
    "conditional_entropy_scan": _conditional_entropy_scan_np,
    "measured_distance_scan": _measured_distance_scan_np,
    "measured_fidelity_scan": _measured_fidelity_scan_np,
    "ip_objective_scan": _ip_objective_scan_np,
}


def _impl(name: str):
    if active_backend() == "numba":
        from . import _kernels_numba

        return _kernels_numba.IMPLS[name]
    return _NUMPY_IMPLS[name]


def conditional_entropy_scan(a, b, t_mat, axes) -> np.ndarray:
    """Post-measurement conditional entropy of qubit B, per axis, in bits.

    a, b are the local Bloch vectors of the state, t_mat its 3x3 correlation
    matrix; the measurement acts on qubit A along each row of axes.
    """
    return _impl("conditional_entropy_scan")(
        np.ascontiguousarray(a, dtype=np.float64),
        np.ascontiguousarray(b, dtype=np.float64),
        np.ascontiguousarray(t_mat, dtype=np.float64),
        np.ascontiguousarray(axes, dtype=np.float64),
    )


def measured_distance_scan(rho, axes) -> np.ndarray:
    """Schatten 1-norm ||rho - chi(n)||_1 per axis (no 1/2 factor)."""
    return _impl("measured_distance_scan")(
        np.ascontiguousarray(rho, dtype=np.complex128),
        np.ascontiguousarray(axes, dtype=np.float64),
    )


def measured_fidelity_scan(sqrt_rho, rho, axes) -> np.ndarray:
    """Uhlmann fidelity F(rho, chi(n)) per axis, with sqrt(rho) precomputed."""
    return _impl("measured_fidelity_scan")(
        np.ascontiguousarray(sqrt_rho, dtype=np.complex128),
        np.ascontiguousarray(rho, dtype=np.complex128),
        np.ascontiguousarray(axes, dtype=np.float64),
    )


def ip_objective_scan(weights, vecs, angles) -> np.ndarray:
    """Quantum Fisher information of H(a,b,g) acting on qubit A, per sample.

    weights/vecs are the eigenvalues and eigenvector columns of a two-qubit
    state; angles rows are the three Euler angles of the Hamiltonian
    eigenbasis, the spectrum being fixed to {+1,-1}.
    """
    return _impl("ip_objective_scan")(
        np.ascontiguousarray(weights, dtype=np.float64),
        np.ascontiguousarray(vecs, dtype=np.complex128),
        np.ascontiguousarray(angles, dtype=np.float64),
    )
