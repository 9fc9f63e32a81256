"""Operator-sum decoherence channels: phase damping, generalized amplitude
damping, and the two-qubit global dephasing variant, with per-qubit
composition.

Channels are memoryless CPTP snapshots: the time-parameterized constructors
sample q(t) or gamma(t) once, they do not integrate. Chaining semantics for
semigroup channels live in `dynamics`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qmatrix import dagger, tensor
from .states import DensityMatrix, _mat

COMPLETENESS_TOL = 1e-12


class ChannelError(ValueError):
    """Kraus set malformed or incompatible with the state."""


@dataclass(frozen=True)
class KrausChannel:
    dim: int
    kraus_ops: tuple = field(repr=False)

    def __post_init__(self):
        ops = tuple(np.asarray(e, dtype=np.complex128) for e in self.kraus_ops)
        if not ops:
            raise ChannelError("a channel needs at least one Kraus operator")
        for e in ops:
            if e.shape != (self.dim, self.dim):
                raise ChannelError(f"Kraus operator shape {e.shape} != dim {self.dim}")
        acc = sum(dagger(e) @ e for e in ops)
        residual = float(np.linalg.norm(acc - np.eye(self.dim)))
        if residual > COMPLETENESS_TOL:
            raise ChannelError(f"completeness residual {residual:.3e}")
        for e in ops:
            e.setflags(write=False)
        object.__setattr__(self, "kraus_ops", ops)

    def completeness_residual(self) -> float:
        acc = sum(dagger(e) @ e for e in self.kraus_ops)
        return float(np.linalg.norm(acc - np.eye(self.dim)))


@dataclass(frozen=True)
class PdParams:
    q: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise ChannelError(f"q={self.q} outside [0, 1]")

    @staticmethod
    def from_time(t: float, t2: float) -> "PdParams":
        if t < 0 or t2 <= 0:
            raise ChannelError("need t >= 0 and t2 > 0")
        return PdParams(q=1.0 - math.exp(-t / t2))


@dataclass(frozen=True)
class GadParams:
    gamma: float
    p_bias: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ChannelError(f"gamma={self.gamma} outside [0, 1]")
        if not 0.0 <= self.p_bias <= 1.0:
            raise ChannelError(f"p_bias={self.p_bias} outside [0, 1]")

    @staticmethod
    def from_alpha(gamma: float, alpha: float) -> "GadParams":
        # high-temperature bias: excited and ground nearly equally likely
        return GadParams(gamma=gamma, p_bias=0.5 * (1.0 - alpha))

    @staticmethod
    def from_time(t: float, t1: float, alpha: float = 0.0) -> "GadParams":
        if t < 0 or t1 <= 0:
            raise ChannelError("need t >= 0 and t1 > 0")
        return GadParams.from_alpha(1.0 - math.exp(-t / t1), alpha)


def _coerce_pd(params) -> PdParams:
    if isinstance(params, PdParams):
        return params
    return PdParams(q=float(params))


def pd_channel(params) -> KrausChannel:
    """Qubit dephasing: off-diagonals scale by exactly (1 - q)."""
    q = _coerce_pd(params).q
    e1 = math.sqrt(1.0 - q / 2.0) * np.eye(2)
    e2 = math.sqrt(q / 2.0) * np.diag([1.0, -1.0])
    return KrausChannel(2, (e1, e2))


def gad_channel(params: GadParams) -> KrausChannel:
    """Finite-temperature energy relaxation with fixed point diag(p, 1-p)."""
    if not isinstance(params, GadParams):
        raise ChannelError("gad_channel takes GadParams")
    g, p = params.gamma, params.p_bias
    rp, rq = math.sqrt(p), math.sqrt(1.0 - p)
    rg, rkeep = math.sqrt(g), math.sqrt(1.0 - g)
    e1 = rp * np.array([[1.0, 0.0], [0.0, rkeep]])
    e2 = rp * np.array([[0.0, rg], [0.0, 0.0]])
    e3 = rq * np.array([[rkeep, 0.0], [0.0, 1.0]])
    e4 = rq * np.array([[0.0, 0.0], [rg, 0.0]])
    return KrausChannel(2, (e1, e2, e3, e4))


def gpd_channel(q) -> KrausChannel:
    """Two-qubit dephasing that spares the cross-diagonal elements.

    The minimal two-operator set with this property: the second operator's
    diagonal signs are +--+ so elements (1,4) and (2,3) keep coefficient
    (1-q/2) + (q/2) = 1 while every other coherence is damped by (1-q).
    Bell-diagonal states live entirely on the spared elements and pass
    through unchanged.
    """
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise ChannelError(f"q={q} outside [0, 1]")
    e1 = math.sqrt(1.0 - q / 2.0) * np.eye(4)
    e2 = math.sqrt(q / 2.0) * np.diag([1.0, -1.0, -1.0, 1.0])
    return KrausChannel(4, (e1, e2))


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel(dim, (np.eye(dim),))


def apply(channel: KrausChannel, rho):
    """sigma = sum_k E_k rho E_k^dag; preserves trace and Hermiticity."""
    wrapped = isinstance(rho, DensityMatrix)
    mat = _mat(rho)
    if mat.shape[0] != channel.dim:
        raise ChannelError(
            f"channel dim {channel.dim} does not match state dim {mat.shape[0]}"
        )
    out = np.zeros_like(mat)
    for e in channel.kraus_ops:
        out += e @ mat @ dagger(e)
    if wrapped:
        return DensityMatrix.from_matrix(out, check=False)
    return out


def _embed(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    factors = [np.eye(2, dtype=np.complex128)] * n
    factors[qubit] = op
    return tensor(*factors)


def local_apply(per_qubit, rho):
    """Apply one single-qubit channel per qubit (identity allowed as None).

    Single-qubit pinchings on distinct qubits commute, so sequential
    application order does not matter; equality with the tensor-composed
    Kraus set is a tested invariant.
    """
    wrapped = isinstance(rho, DensityMatrix)
    mat = _mat(rho)
    n = mat.shape[0].bit_length() - 1
    channels = list(per_qubit)
    if len(channels) != n:
        raise ChannelError(f"got {len(channels)} channels for {n} qubits")
    out = mat
    for qubit, ch in enumerate(channels):
        if ch is None:
            continue
        if ch.dim != 2:
            raise ChannelError("local_apply requires single-qubit channels")
        step = np.zeros_like(out)
        for e in ch.kraus_ops:
            big = _embed(e, qubit, n)
            step += big @ out @ dagger(big)
        out = step
    if wrapped:
        return DensityMatrix.from_matrix(out, check=False)
    return out


def tensor_channel(per_qubit) -> KrausChannel:
    """The full product Kraus set of a per-qubit channel list."""
    channels = [identity_channel(2) if ch is None else ch for ch in per_qubit]
    ops = [np.eye(1, dtype=np.complex128)]
    for ch in channels:
        if ch.dim != 2:
            raise ChannelError("tensor_channel requires single-qubit channels")
        ops = [np.kron(a, e) for a in ops for e in ch.kraus_ops]
    dim = 2 ** len(channels)
    return KrausChannel(dim, tuple(ops))
