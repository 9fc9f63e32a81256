"""Dense complex-matrix foundation: tensor algebra, partial operations,
deterministic Hermitian spectral decomposition, entropies, and distances.

Everything here works on plain numpy arrays; the state wrappers live in
`states`. Dimensions are tiny (at most 2^5), so dense LAPACK routines are
used throughout with no attempt at sparsity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

PSD_TOL = 1e-9

IDENTITY_2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a.T)


def tensor(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more square matrices, left to right."""
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    return reduce(np.kron, factors)


def is_hermitian(a: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(a - dagger(a))) <= tol)


def n_qubits_of(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of 2")
    return n


def partial_transpose(rho: np.ndarray, qubit: int) -> np.ndarray:
    """Transpose on one tensor factor of an n-qubit matrix. Involutive."""
    n = n_qubits_of(rho.shape[0])
    if not 0 <= qubit < n:
        raise ValueError(f"qubit index {qubit} out of range for {n} qubits")
    shape = (2,) * (2 * n)
    work = rho.reshape(shape)
    work = np.swapaxes(work, qubit, n + qubit)
    return np.ascontiguousarray(work.reshape(rho.shape))


def partial_trace(rho: np.ndarray, keep) -> np.ndarray:
    """Trace out all qubits not listed in `keep` (kept in ascending order)."""
    n = n_qubits_of(rho.shape[0])
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep-set must not be empty")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep-set {keep} out of range for {n} qubits")
    traced = [q for q in range(n) if q not in keep]
    work = rho.reshape((2,) * (2 * n))
    for offset, q in enumerate(traced):
        ax = q - offset  # earlier traces shrink the index space
        work = np.trace(work, axis1=ax, axis2=ax + (n - offset))
    dim = 2 ** len(keep)
    return np.ascontiguousarray(work.reshape(dim, dim))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Hermitian eigensystem with a deterministic gauge.

    Eigenvalues ascend; each eigenvector's largest-magnitude component is
    made real positive so repeated calls on identical input are bitwise
    identical, and so downstream eigenbases (SLD measurements) are
    reproducible.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def spectral(a: np.ndarray) -> SpectralDecomposition:
    if not is_hermitian(a, tol=1e-8):
        raise ValueError("spectral() requires a Hermitian matrix")
    vals, vecs = np.linalg.eigh(a)
    vecs = vecs.astype(np.complex128, copy=True)
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        idx = int(np.argmax(np.abs(col)))
        pivot = col[idx]
        mag = abs(pivot)
        if mag > 0.0:
            col *= np.conj(pivot) / mag
    vals = vals.copy()
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return SpectralDecomposition(vals, vecs)


def psd_eigenvalues(rho: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Ascending eigenvalues with the [-tol, 0) dip clamped to zero.

    Anything below -tol is a genuinely unphysical matrix and raises.
    """
    vals = np.linalg.eigvalsh(rho)
    if vals[0] < -tol:
        raise ValueError(f"matrix has negative eigenvalue {vals[0]:.3e} beyond tolerance")
    return np.clip(vals, 0.0, None)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-sum(lambda log2 lambda) in bits, 0 log 0 = 0."""
    vals = psd_eigenvalues(rho)
    vals = vals[vals > 0.0]
    return float(-(vals @ np.log2(vals))) + 0.0  # avoid -0.0 for pure states


def matrix_sqrt(rho: np.ndarray) -> np.ndarray:
    dec = spectral(rho)
    vals = np.clip(dec.eigenvalues, 0.0, None)
    if np.min(dec.eigenvalues) < -PSD_TOL:
        raise ValueError("matrix_sqrt needs a PSD matrix")
    v = dec.eigenvectors
    return (v * np.sqrt(vals)) @ dagger(v)


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, in [0, 1+eps]."""
    if rho.shape != sigma.shape:
        raise ValueError("dimension mismatch")
    sq = matrix_sqrt(rho)
    inner = sq @ sigma @ sq
    vals = np.linalg.eigvalsh(inner)
    vals = np.clip(vals, 0.0, None)
    return float(np.sqrt(vals).sum() ** 2)


def trace_norm(a: np.ndarray) -> float:
    """Schatten 1-norm of a Hermitian matrix."""
    return float(np.abs(np.linalg.eigvalsh(a)).sum())


DISTANCE_METRICS = ("trace", "hilbert_schmidt", "bures", "fidelity_based")


def distance(rho: np.ndarray, sigma: np.ndarray, metric: str = "trace") -> float:
    """Distance between two states.

    trace: (1/2)||rho-sigma||_1 so orthogonal pure states sit at 1.
    hilbert_schmidt: squared Frobenius norm of the difference.
    bures: sqrt(2(1 - sqrt(F))).
    fidelity_based: 1 - F.
    """
    if rho.shape != sigma.shape:
        raise ValueError("dimension mismatch")
    if metric == "trace":
        return 0.5 * trace_norm(rho - sigma)
    if metric == "hilbert_schmidt":
        d = rho - sigma
        return float(np.sum(np.abs(d) ** 2))
    if metric == "bures":
        f = min(fidelity(rho, sigma), 1.0)
        return float(np.sqrt(2.0 * (1.0 - np.sqrt(f))))
    if metric == "fidelity_based":
        return 1.0 - min(fidelity(rho, sigma), 1.0)
    raise ValueError(f"unknown metric {metric!r}; choose from {DISTANCE_METRICS}")


def matrix_exponential(a: np.ndarray) -> np.ndarray:
    # scipy's expm is scaling-and-squaring with Pade; well within the
    # 1e-10 target for the small well-conditioned matrices used here.
    return scipy.linalg.expm(np.asarray(a, dtype=np.complex128))


def unitary_of(h: np.ndarray, phi: float) -> np.ndarray:
    """U = exp(-i phi h) for Hermitian h; checked unitary to 1e-12."""
    if not is_hermitian(h, tol=1e-10):
        raise ValueError("generator must be Hermitian")
    u = matrix_exponential(-1j * phi * np.asarray(h, dtype=np.complex128))
    residual = np.max(np.abs(dagger(u) @ u - np.eye(h.shape[0])))
    if residual > 1e-12:
        raise ValueError(f"exponential lost unitarity, residual {residual:.3e}")
    return u
