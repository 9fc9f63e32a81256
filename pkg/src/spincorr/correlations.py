"""Correlation quantifiers: Shannon/von Neumann entropic quantities,
entropic discord (numeric optimizer and the Bell-diagonal closed form),
the geometric discord family, and the multipartite relative-entropy
discord.

Optimization contract shared by the quantifiers: a deterministic coarse
grid over measurement axes, then a bounded Nelder-Mead refinement
(iteration cap 200, objective tolerance 1e-8). No randomness anywhere, so
repeated runs give identical results.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import kernels, qmatrix
from .qmatrix import IDENTITY_2, PAULI, dagger, partial_trace, tensor, von_neumann_entropy
from .states import (
    CorrelationTriple,
    DensityMatrix,
    _mat,
    is_bell_diagonal,
    correlation_triple,
    m3n_state,
)

GRID_THETA, GRID_PHI = 64, 32
_GRID_AXES = kernels.axis_grid(GRID_THETA, GRID_PHI)
_GRID_ANGLES = np.stack(
    np.meshgrid(
        np.linspace(0.0, np.pi, GRID_THETA),
        np.linspace(0.0, 2.0 * np.pi, GRID_PHI, endpoint=False),
        indexing="ij",
    ),
    axis=-1,
).reshape(-1, 2)

_AXIS_ANGLES = {  # canonical (theta, phi) for the three Pauli axes
    0: (0.5 * np.pi, 0.0),
    1: (0.5 * np.pi, 0.5 * np.pi),
    2: (0.0, 0.0),
}


# ---------------------------------------------------------------------------
# Shannon block

def shannon(probs) -> float:
    """Entropy of a distribution in bits; 0 log 0 = 0."""
    p = np.asarray(probs, dtype=float).reshape(-1)
    if np.any(p < -1e-12):
        raise ValueError("negative probability")
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total}, not 1")
    p = p[p > 0.0]
    return float(-(p @ np.log2(p)))


def joint_shannon(pxy) -> float:
    return shannon(np.asarray(pxy, dtype=float).reshape(-1))


def conditional_shannon(pxy) -> float:
    """S(X|Y) = S(X,Y) - S(Y), by construction."""
    p = np.asarray(pxy, dtype=float)
    return joint_shannon(p) - shannon(p.sum(axis=0))


def mutual_shannon(pxy) -> float:
    p = np.asarray(pxy, dtype=float)
    return shannon(p.sum(axis=1)) + shannon(p.sum(axis=0)) - joint_shannon(p)


# ---------------------------------------------------------------------------
# Measurement plumbing

@dataclass(frozen=True)
class MeasurementBasis:
    """Projective measurement directions, one (theta, phi) pair per
    measured qubit."""

    angles: tuple

    @staticmethod
    def single(theta: float, phi: float) -> "MeasurementBasis":
        return MeasurementBasis(((float(theta), float(phi)),))

    @property
    def n_measured(self) -> int:
        return len(self.angles)

    def axis(self, j: int = 0) -> np.ndarray:
        theta, phi = self.angles[j]
        return kernels.angles_to_axis(theta, phi)

    def projectors(self, j: int = 0):
        n = self.axis(j)
        s = n[0] * PAULI[0] + n[1] * PAULI[1] + n[2] * PAULI[2]
        return 0.5 * (IDENTITY_2 + s), 0.5 * (IDENTITY_2 - s)


def _axis_operator(n: np.ndarray) -> np.ndarray:
    return n[0] * PAULI[0] + n[1] * PAULI[1] + n[2] * PAULI[2]


def _pinch(mat: np.ndarray, qubit: int, axis: np.ndarray) -> np.ndarray:
    n = mat.shape[0].bit_length() - 1
    factors = [IDENTITY_2] * n
    factors[qubit] = _axis_operator(axis)
    s = tensor(*factors)
    return 0.5 * (mat + s @ mat @ s)


def measured_state(rho, basis: MeasurementBasis, side: str = "A"):
    """Dephase the chosen qubits in the given bases. Idempotent.

    side 'A' or 'B' measures that qubit of a two-qubit state with the
    basis' single angle pair; 'both' measures both (two pairs); 'all'
    measures every qubit of an n-qubit state (n pairs).
    """
    wrapped = isinstance(rho, DensityMatrix)
    mat = _mat(rho)
    n = mat.shape[0].bit_length() - 1
    if side == "A":
        targets = [0]
    elif side == "B":
        targets = [1]
    elif side == "both":
        targets = [0, 1]
    elif side == "all":
        targets = list(range(n))
    else:
        raise ValueError(f"side must be A, B, both or all, got {side!r}")
    if len(basis.angles) != len(targets):
        raise ValueError(
            f"basis carries {len(basis.angles)} angle pairs, need {len(targets)}"
        )
    out = mat
    for j, qubit in enumerate(targets):
        out = _pinch(out, qubit, basis.axis(j))
    if wrapped:
        return DensityMatrix.from_matrix(out, check=False)
    return out


def local_bloch(rho):
    """Local Bloch vectors a, b and the 3x3 correlation matrix T."""
    mat = _mat(rho)
    if mat.shape[0] != 4:
        raise ValueError("local_bloch expects a 2-qubit state")
    a = np.array([np.trace(tensor(s, IDENTITY_2) @ mat).real for s in PAULI])
    b = np.array([np.trace(tensor(IDENTITY_2, s) @ mat).real for s in PAULI])
    t = np.array(
        [[np.trace(tensor(si, sj) @ mat).real for sj in PAULI] for si in PAULI]
    )
    return a, b, t


def quantum_mutual_information(rho, cut=None) -> float:
    """S(A) + S(B) - S(AB) across the given bipartition (default: first
    qubit against the rest)."""
    mat = _mat(rho)
    n = mat.shape[0].bit_length() - 1
    if cut is None:
        cut = ((0,), tuple(range(1, n)))
    keep_a, keep_b = (tuple(sorted(side)) for side in cut)
    if sorted(keep_a + keep_b) != list(range(n)) or set(keep_a) & set(keep_b):
        raise ValueError(f"cut {cut} is not a bipartition of {n} qubits")
    s_a = von_neumann_entropy(partial_trace(mat, keep_a))
    s_b = von_neumann_entropy(partial_trace(mat, keep_b))
    return s_a + s_b - von_neumann_entropy(mat)


# ---------------------------------------------------------------------------
# Optimizer plumbing

def _nm_refine(objective, x0):
    res = minimize(
        objective,
        np.asarray(x0, dtype=float),
        method="Nelder-Mead",
        options={"maxiter": 200, "fatol": 1e-8, "xatol": 1e-6},
    )
    return res.x, float(res.fun)


def _swap_qubits(mat: np.ndarray) -> np.ndarray:
    perm = [0, 2, 1, 3]
    return mat[np.ix_(perm, perm)]


# ---------------------------------------------------------------------------
# Entropic discord

@dataclass(frozen=True)
class CorrelationReport:
    mutual_info: float
    classical: float
    discord: float
    optimizer_basis: MeasurementBasis
    optimizer_residual: float


def entropic_discord(rho, side: str = "A") -> CorrelationReport:
    """Measurement-maximized classical correlation and its discord remainder.

    The classical part maximizes S(B) - S(B|{Pi_A}) over projective
    measurements of qubit A (coarse 64x32 grid, then local refinement).
    """
    mat = _mat(rho)
    if mat.shape[0] != 4:
        raise ValueError("entropic_discord expects a 2-qubit state")
    if side == "B":
        mat = _swap_qubits(mat)
    elif side != "A":
        raise ValueError("side must be 'A' or 'B'")
    a, b, t = local_bloch(mat)
    s_b = von_neumann_entropy(partial_trace(mat, (1,)))
    mutual = quantum_mutual_information(mat)

    grid_vals = kernels.conditional_entropy_scan(a, b, t, _GRID_AXES)
    best = int(np.argmin(grid_vals))

    def objective(x):
        axes = kernels.angles_to_axis(x[0], x[1]).reshape(1, 3)
        return float(kernels.conditional_entropy_scan(a, b, t, axes)[0])

    x_star, f_star = _nm_refine(objective, _GRID_ANGLES[best])
    f_star = min(f_star, float(grid_vals[best]))
    classical = s_b - f_star
    return CorrelationReport(
        mutual_info=mutual,
        classical=classical,
        discord=mutual - classical,
        optimizer_basis=MeasurementBasis.single(x_star[0], x_star[1]),
        optimizer_residual=float(grid_vals[best]) - f_star,
    )


def _bd_eigenvalues(c: CorrelationTriple) -> np.ndarray:
    c1, c2, c3 = c
    return 0.25 * np.array(
        [
            1 + c1 - c2 + c3,
            1 - c1 + c2 + c3,
            1 + c1 + c2 - c3,
            1 - c1 - c2 - c3,
        ]
    )


def _plogp_bits(vals) -> float:
    vals = np.asarray(vals, dtype=float)
    vals = vals[vals > 0.0]
    return float(vals @ np.log2(vals))


def luo_discord(c) -> float:
    """Closed-form entropic discord of a Bell-diagonal state.

    D = 2 + sum_k lambda_k log2 lambda_k
          - [(1-c)/2 log2(1-c) + (1+c)/2 log2(1+c)],  c = max_i |c_i|.
    The optimal measurement is along the dominant correlation axis, which
    is what makes the subtracted classical term one-dimensional.
    """
    c = CorrelationTriple.from_any(c)
    m3n_state(c, 2)  # physicality gate, raises otherwise
    lam = _bd_eigenvalues(c)
    cmax = float(np.max(np.abs(c.as_array())))
    classical = _plogp_bits([0.5 * (1 - cmax), 0.5 * (1 + cmax)]) + 1.0
    return 2.0 + _plogp_bits(lam) - classical


# ---------------------------------------------------------------------------
# Geometric quantifiers

@dataclass(frozen=True)
class GeometricResult:
    value: float
    argmin_basis: MeasurementBasis
    metric: str
    method: str
    residual: float = 0.0


def _scan_distance(mat: np.ndarray, metric: str, axes: np.ndarray, sqrt_rho=None):
    """Distances between mat and its A-side measured states, one per axis.

    The trace metric reports the plain Schatten 1-norm here (twice the
    1/2-normalized distance function) so that the Bell-diagonal value equals
    the intermediate |c_i| exactly; the fidelity family keeps the usual
    conventions.
    """
    if metric == "trace":
        return kernels.measured_distance_scan(mat, axes)
    if metric == "hilbert_schmidt":
        s = kernels._pauli_dot_tensor_identity(axes)
        delta = 0.5 * (mat[None, :, :] - s @ mat @ s)
        return np.sum(np.abs(delta) ** 2, axis=(1, 2))
    if metric in ("bures", "fidelity_based"):
        f = kernels.measured_fidelity_scan(sqrt_rho, mat, axes)
        f = np.clip(f, 0.0, 1.0)
        if metric == "bures":
            return np.sqrt(2.0 * (1.0 - np.sqrt(f)))
        return 1.0 - f
    raise ValueError(f"unknown metric {metric!r}")


def geometric_discord(
    rho, metric: str = "trace", side: str = "A", method: str = "auto"
) -> GeometricResult:
    """Minimal distance from the state to its own measured versions.

    method 'fast' insists on the Bell-diagonal shortcut (trace metric:
    intermediate |c_i|, measured along the dominant axis), 'numeric' forces
    the grid+refinement minimizer, 'auto' uses the shortcut when it applies.
    The two must agree; their divergence beyond 1e-3 is a build failure,
    pinned by tests.
    """
    mat = _mat(rho)
    if mat.shape[0] != 4:
        raise ValueError("geometric_discord expects a 2-qubit state")
    if side == "B":
        mat = _swap_qubits(mat)
        side = "A"
    if side == "both":
        return _geometric_two_sided(mat, metric)
    if side != "A":
        raise ValueError("side must be 'A', 'B' or 'both'")

    if metric == "trace" and method in ("auto", "fast") and is_bell_diagonal(mat):
        c = np.abs(correlation_triple(mat).as_array())
        order = np.argsort(c)  # ascending: [min, mid, max]
        theta, phi = _AXIS_ANGLES[int(order[2])]
        return GeometricResult(
            value=float(c[order[1]]),
            argmin_basis=MeasurementBasis.single(theta, phi),
            metric=metric,
            method="fast",
        )
    if method == "fast":
        raise ValueError("fast path exists only for trace metric on Bell-diagonal states")

    sqrt_rho = qmatrix.matrix_sqrt(mat) if metric in ("bures", "fidelity_based") else None
    grid_vals = _scan_distance(mat, metric, _GRID_AXES, sqrt_rho)
    best = int(np.argmin(grid_vals))

    def objective(x):
        axes = kernels.angles_to_axis(x[0], x[1]).reshape(1, 3)
        return float(_scan_distance(mat, metric, axes, sqrt_rho)[0])

    x_star, f_star = _nm_refine(objective, _GRID_ANGLES[best])
    f_star = min(f_star, float(grid_vals[best]))
    return GeometricResult(
        value=f_star,
        argmin_basis=MeasurementBasis.single(x_star[0], x_star[1]),
        metric=metric,
        method="numeric",
        residual=float(grid_vals[best]) - f_star,
    )


def _two_sided_distance(mat, metric, angles):
    basis = MeasurementBasis(((angles[0], angles[1]), (angles[2], angles[3])))
    chi = measured_state(mat, basis, side="both")
    if metric == "trace":
        return qmatrix.trace_norm(mat - chi)  # plain 1-norm, as above
    return qmatrix.distance(mat, chi, metric)


def _geometric_two_sided(mat: np.ndarray, metric: str) -> GeometricResult:
    """Minimize over product measurements on both qubits.

    The minimizing set is typically degenerate (a continuum of angle pairs
    reaches the same distance); the returned basis is one representative,
    chosen deterministically.
    """
    coarse = kernels.axis_grid(16, 8)
    coarse_angles = np.stack(
        np.meshgrid(
            np.linspace(0.0, np.pi, 16),
            np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False),
            indexing="ij",
        ),
        axis=-1,
    ).reshape(-1, 2)

    best_val, best_x = np.inf, None
    # Alternating scans keep this to O(m) instead of O(m^2), but a single
    # descent can strand in a flat valley when the starting B axis kills
    # the dominant correlation, so restart from each canonical axis.
    for seed in ((0.0, 0.0), (np.pi / 2, 0.0), (np.pi / 2, np.pi / 2)):
        xb = np.array(seed)
        for _ in range(2):
            vals = np.array(
                [
                    _two_sided_distance(mat, metric, (a[0], a[1], xb[0], xb[1]))
                    for a in coarse_angles
                ]
            )
            xa = coarse_angles[int(np.argmin(vals))]
            vals = np.array(
                [
                    _two_sided_distance(mat, metric, (xa[0], xa[1], a[0], a[1]))
                    for a in coarse_angles
                ]
            )
            xb = coarse_angles[int(np.argmin(vals))]
            if float(vals.min()) < best_val:
                best_val = float(vals.min())
                best_x = np.array([xa[0], xa[1], xb[0], xb[1]])

    x_star, f_star = _nm_refine(
        lambda x: _two_sided_distance(mat, metric, x), best_x
    )
    f_star = min(f_star, best_val)
    return GeometricResult(
        value=f_star,
        argmin_basis=MeasurementBasis(
            ((x_star[0], x_star[1]), (x_star[2], x_star[3]))
        ),
        metric=metric,
        method="numeric",
        residual=best_val - f_star,
    )


def geometric_classical(rho, method: str = "auto") -> float:
    """Classical counterpart of the geometric discord.

    Bell-diagonal fast path: the closest classical state sits on the
    dominant correlation axis, chi = (I + c_max sigma_k x sigma_k)/4, and
    its 1-norm distance to the product of its marginals is |c_max|. For
    other states the two-sided argmin is found numerically and the same
    construction is evaluated there; because the argmin set is degenerate
    the numeric value depends on the representative found, which is the
    reason the fast path is normative for Bell-diagonal input.
    """
    mat = _mat(rho)
    if mat.shape[0] != 4:
        raise ValueError("geometric_classical expects a 2-qubit state")
    if method in ("auto", "fast") and is_bell_diagonal(mat):
        c = np.abs(correlation_triple(mat).as_array())
        return float(np.max(c))
    if method == "fast":
        raise ValueError("fast path exists only for Bell-diagonal states")
    result = _geometric_two_sided(mat, "trace")
    chi = measured_state(mat, result.argmin_basis, side="both")
    chi_a = partial_trace(chi, (0,))
    chi_b = partial_trace(chi, (1,))
    return qmatrix.trace_norm(chi - tensor(chi_a, chi_b))


# ---------------------------------------------------------------------------
# Multipartite relative-entropy discord

def _basis_unitary(theta: float, phi: float) -> np.ndarray:
    ct, st = math.cos(0.5 * theta), math.sin(0.5 * theta)
    ep = complex(math.cos(phi), math.sin(phi))
    return np.array([[ct, -st], [ep * st, ep * ct]], dtype=np.complex128)


_GQD_AXIS_START = {  # (theta, phi) seeds for the x/y/z multi-start
    "x": (0.5 * math.pi, 0.0),
    "y": (0.5 * math.pi, 0.5 * math.pi),
    "z": (0.0, 0.0),
}


def global_quantum_discord(rho, return_angles: bool = False):
    """Relative-entropy discord minimized over product measurement bases.

    GQD = min_basis [ S(rho || Phi rho) - sum_j S(rho_j || Phi_j rho_j) ],
    with Phi the product-basis pinching; the relative entropies collapse to
    entropy differences because pinching fixes its own diagonal.

    A single coordinate descent can stall in a basis-aligned local minimum
    (for correlation-triple states the all-z basis is stationary but not
    optimal), so the descent is seeded from the best of all 3^n per-qubit
    Pauli-axis assignments before refining each qubit's angles in turn.
    """
    mat = _mat(rho)
    n = mat.shape[0].bit_length() - 1
    if n not in (2, 3, 4):
        raise ValueError("global discord is implemented for 2 to 4 qubits")
    s_rho = von_neumann_entropy(mat)
    marg = [partial_trace(mat, (j,)) for j in range(n)]
    bloch_r = [
        np.array([np.trace(PAULI[i] @ m).real for i in range(3)]) for m in marg
    ]
    s_marg = [von_neumann_entropy(m) for m in marg]

    def objective(angles: np.ndarray) -> float:
        u = _basis_unitary(angles[0], angles[1])
        for j in range(1, n):
            u = np.kron(u, _basis_unitary(angles[2 * j], angles[2 * j + 1]))
        p = np.einsum("ji,jk,ki->i", u.conj(), mat, u).real
        p = np.clip(p, 0.0, None)
        local = 0.0
        for j in range(n):
            axis = kernels.angles_to_axis(angles[2 * j], angles[2 * j + 1])
            x = 0.5 * (1.0 + min(1.0, abs(float(axis @ bloch_r[j]))))
            h2 = 0.0 if x >= 1.0 else -(x * math.log2(x) + (1 - x) * math.log2(1 - x))
            local += h2 - s_marg[j]
        return shannon(p / p.sum()) - s_rho - local

    best_angles, best_val = None, np.inf
    for combo in itertools.product("xyz", repeat=n):
        angles = np.array([v for ax in combo for v in _GQD_AXIS_START[ax]])
        val = objective(angles)
        if val < best_val:
            best_val, best_angles = val, angles

    thetas = np.linspace(0.0, math.pi, 16)
    phis = np.linspace(0.0, 2.0 * math.pi, 8, endpoint=False)
    angles = best_angles.copy()
    for _ in range(40):
        previous = best_val
        for j in range(n):
            trial = angles.copy()
            for theta in thetas:
                for phi in phis:
                    trial[2 * j], trial[2 * j + 1] = theta, phi
                    val = objective(trial)
                    if val < best_val:
                        best_val = val
                        angles = trial.copy()

            def leg(x, j=j):
                t = angles.copy()
                t[2 * j], t[2 * j + 1] = x[0], x[1]
                return objective(t)

            x_star, f_star = _nm_refine(leg, angles[2 * j : 2 * j + 2])
            if f_star < best_val:
                best_val = f_star
                angles[2 * j], angles[2 * j + 1] = x_star[0], x_star[1]
        if previous - best_val < 1e-7:
            break

    value = max(best_val, 0.0)
    if return_angles:
        return value, angles
    return value
