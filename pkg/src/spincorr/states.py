"""State families: Bell-diagonal and their N-qubit generalization, thermal
pseudopure states, the metrology probe pairs, plus entanglement tests and
correlation-triple readout.

Basis convention: |0> is spin-up aligned with the static field, so
sigma_z|0> = +|0>. Qubit A is always the first tensor factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import qmatrix
from .qmatrix import (
    IDENTITY_2,
    PAULI,
    PSD_TOL,
    dagger,
    n_qubits_of,
    partial_transpose,
    tensor,
)


class UnphysicalStateError(ValueError):
    """Requested parameters do not define a positive unit-trace matrix."""


@dataclass(frozen=True)
class DensityMatrix:
    """Validated trace-one PSD Hermitian matrix with qubit-count metadata."""

    matrix: np.ndarray
    n_qubits: int

    @staticmethod
    def from_matrix(mat, check: bool = True) -> "DensityMatrix":
        mat = np.asarray(mat, dtype=np.complex128)
        n = n_qubits_of(mat.shape[0])
        if check:
            if np.max(np.abs(mat - dagger(mat))) > 1e-10:
                raise UnphysicalStateError("matrix is not Hermitian")
            tr = np.trace(mat).real
            if abs(tr - 1.0) > 1e-10:
                raise UnphysicalStateError(f"trace is {tr}, not 1")
            low = float(np.linalg.eigvalsh(mat)[0])
            if low < -PSD_TOL:
                raise UnphysicalStateError(
                    f"matrix has negative eigenvalue {low:.3e}"
                )
        mat = mat.copy()
        mat.setflags(write=False)
        return DensityMatrix(mat, n)


def _mat(rho) -> np.ndarray:
    """Accept a DensityMatrix or a bare array."""
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=np.complex128)


@dataclass(frozen=True)
class CorrelationTriple:
    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for c in (self.c1, self.c2, self.c3):
            if abs(c) > 1.0 + 1e-12:
                raise ValueError(f"correlation value {c} outside [-1, 1]")

    @staticmethod
    def from_any(c) -> "CorrelationTriple":
        if isinstance(c, CorrelationTriple):
            return c
        vals = [float(x) for x in c]
        if len(vals) != 3:
            raise ValueError("a correlation triple needs exactly 3 values")
        return CorrelationTriple(*vals)

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3])

    def __iter__(self):
        return iter((self.c1, self.c2, self.c3))


def _sigma_power(i: int, n: int) -> np.ndarray:
    return reduce(np.kron, [PAULI[i]] * n)


def m3n_state(c, n: int, check: bool = True) -> DensityMatrix:
    """rho = 2^-n [I + sum_i c_i sigma_i^(tensor n)]; marginals are I/2.

    Physicality is n-dependent and checked spectrally, never by a sign
    formula: the same triple can be a state for one n and not another.
    check=False skips the spectral gate, for triples already known valid
    (e.g. snapshots of a completely positive evolution).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    c = CorrelationTriple.from_any(c)
    dim = 2**n
    mat = np.eye(dim, dtype=np.complex128)
    for i, ci in enumerate(c):
        if ci != 0.0:
            mat += ci * _sigma_power(i, n)
    mat /= dim
    if check:
        low = float(np.linalg.eigvalsh(mat)[0])
        if low < -PSD_TOL:
            raise UnphysicalStateError(
                f"triple {tuple(c)} gives eigenvalue {low:.3e} at n={n}"
            )
    return DensityMatrix.from_matrix(mat, check=False)


def bell_diagonal(c) -> DensityMatrix:
    return m3n_state(c, 2)


def bell(name: str) -> np.ndarray:
    """The four maximally entangled two-qubit vectors."""
    rt = 1.0 / math.sqrt(2.0)
    table = {
        "phi+": np.array([rt, 0, 0, rt]),
        "phi-": np.array([rt, 0, 0, -rt]),
        "psi+": np.array([0, rt, rt, 0]),
        "psi-": np.array([0, rt, -rt, 0]),
    }
    try:
        return table[name].astype(np.complex128)
    except KeyError:
        raise ValueError(f"unknown Bell state {name!r}") from None


@dataclass(frozen=True)
class PseudopureState:
    epsilon: float
    psi: np.ndarray

    def density(self) -> DensityMatrix:
        return pseudopure(self.psi, self.epsilon)


def pseudopure(psi, epsilon: float) -> DensityMatrix:
    """(1-eps)/2^n I + eps |psi><psi|; the traceless part carries the signal."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError("epsilon must lie in [0, 1]")
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError("psi must be normalized")
    dim = psi.shape[0]
    n_qubits_of(dim)
    mat = (1.0 - epsilon) / dim * np.eye(dim) + epsilon * np.outer(psi, psi.conj())
    return DensityMatrix.from_matrix(mat, check=False)


@dataclass(frozen=True)
class PeresResult:
    negative_eigenvalue: float
    entangled: bool


def peres_entangled(rho) -> PeresResult:
    """Partial-transpose test. Only meaningful for two qubits."""
    mat = _mat(rho)
    if mat.shape[0] != 4:
        raise ValueError("the partial-transpose criterion is applied to 2 qubits")
    low = float(np.linalg.eigvalsh(partial_transpose(mat, 1))[0])
    return PeresResult(negative_eigenvalue=low, entangled=low < -1e-10)


@dataclass(frozen=True)
class ProbeState:
    p: float
    kind: str

    def density(self) -> DensityMatrix:
        return probe_state(self.p, self.kind)


def probe_state(p: float, kind: str) -> DensityMatrix:
    """The discordant (quantum) and classically correlated probe families.

    Both have purity (1+p^2)^2/4, so a fixed p compares equal mixedness.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if kind == "quantum":
        mat = 0.25 * np.array(
            [
                [1 + p**2, 0, 0, 2 * p],
                [0, 1 - p**2, 0, 0],
                [0, 0, 1 - p**2, 0],
                [2 * p, 0, 0, 1 + p**2],
            ],
            dtype=np.complex128,
        )
    elif kind == "classical":
        mat = 0.25 * np.array(
            [
                [1, p**2, p, p],
                [p**2, 1, p, p],
                [p, p, 1, p**2],
                [p, p, p**2, 1],
            ],
            dtype=np.complex128,
        )
    else:
        raise ValueError(f"kind must be 'quantum' or 'classical', got {kind!r}")
    return DensityMatrix.from_matrix(mat, check=False)


def correlation_triple(rho) -> CorrelationTriple:
    """c_i = Tr[(sigma_i tensor sigma_i) rho] for a two-qubit state."""
    mat = _mat(rho)
    if mat.shape[0] != 4:
        raise ValueError("correlation_triple expects a 2-qubit state")
    vals = [float(np.trace(tensor(s, s) @ mat).real) for s in PAULI]
    return CorrelationTriple(*vals)


def correlation_triple_n(rho) -> CorrelationTriple:
    """c_i = Tr[sigma_i^(tensor n) rho]; reduces to correlation_triple at n=2."""
    mat = _mat(rho)
    n = n_qubits_of(mat.shape[0])
    vals = [float(np.trace(_sigma_power(i, n) @ mat).real) for i in range(3)]
    return CorrelationTriple(*vals)


def _cnot(control: int) -> np.ndarray:
    # control in {0, 1}; the other qubit is the target
    m = np.zeros((4, 4), dtype=np.complex128)
    for a in range(2):
        for b in range(2):
            if control == 0:
                m[2 * a + (b ^ a), 2 * a + b] = 1.0
            else:
                m[2 * (a ^ b) + b, 2 * a + b] = 1.0
    return m


def _cy() -> np.ndarray:
    # control on A, applies sigma_y to B
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = m[1, 1] = 1.0
    m[3, 2] = 1j
    m[2, 3] = -1j
    return m


# Involutive basis-mapping gates: each satisfies U (sigma_i x I) U = sigma_i x sigma_i,
# so a single-qubit readout on the rotated state returns the two-qubit correlation.
DIRECT_MEASURE_UNITARIES = (
    _cnot(0),  # X x I  ->  X x X
    _cy(),     # Y x I  ->  Y x Y
    _cnot(1),  # Z x I  ->  Z x Z
)


def direct_measure_ci(rho, i: int) -> float:
    """Single-axis correlation via the rotate-then-measure-one-qubit route."""
    if i not in (0, 1, 2):
        raise ValueError("axis index must be 0, 1 or 2")
    mat = _mat(rho)
    if mat.shape[0] != 4:
        raise ValueError("direct_measure_ci expects a 2-qubit state")
    u = DIRECT_MEASURE_UNITARIES[i]
    xi = u @ mat @ dagger(u)
    return float(np.trace(tensor(PAULI[i], IDENTITY_2) @ xi).real)


def freezing_family(n: int, c: float) -> CorrelationTriple:
    """The (1, c, +-c) triple that is a valid M3_N state for even n.

    The sign of the third component alternates with n mod 4; the opposite
    sign has a negative eigenvalue, and odd n cannot host |c1| = 1 at all.
    Checked spectrally by m3n_state on return.
    """
    if n % 2 != 0:
        raise UnphysicalStateError(
            f"no (1, c, -c)-type state exists for odd n={n}"
        )
    sign = -1.0 if n % 4 == 2 else 1.0
    triple = CorrelationTriple(1.0, float(c), sign * float(c))
    m3n_state(triple, n)
    return triple


def purity(rho) -> float:
    mat = _mat(rho)
    return float(np.trace(mat @ mat).real)


def deviation_units(value: float, epsilon: float) -> float:
    """Rescale a correlation quantity to (epsilon^2/ln 2)-bit units, the
    natural scale of quantities computed from a deviation matrix."""
    if epsilon == 0:
        raise ValueError("epsilon must be nonzero")
    return value / (epsilon**2 / math.log(2.0))


def to_json_dict(rho) -> dict:
    """{n_qubits, matrix: row-major [re, im] pairs}."""
    mat = _mat(rho)
    n = n_qubits_of(mat.shape[0])
    pairs = [[float(z.real), float(z.imag)] for z in mat.reshape(-1)]
    return {"n_qubits": n, "matrix": pairs}


def from_json_dict(doc: dict) -> DensityMatrix:
    n = int(doc["n_qubits"])
    dim = 2**n
    flat = np.array([complex(re, im) for re, im in doc["matrix"]])
    if flat.shape[0] != dim * dim:
        raise ValueError("matrix length does not match n_qubits")
    return DensityMatrix.from_matrix(flat.reshape(dim, dim))


def is_bell_diagonal(rho, tol: float = 1e-10) -> bool:
    """True when the state is exactly (to tol) of Bell-diagonal form."""
    mat = _mat(rho)
    if mat.shape[0] != 4:
        return False
    c = correlation_triple(mat)
    rebuilt = 0.25 * np.eye(4, dtype=np.complex128)
    for i, ci in enumerate(c):
        rebuilt += 0.25 * ci * tensor(PAULI[i], PAULI[i])
    return bool(np.max(np.abs(mat - rebuilt)) <= tol)


def von_neumann_entropy(rho) -> float:
    return qmatrix.von_neumann_entropy(_mat(rho))
