"""Compiled twins of the kernels in kernels.py.

Import of this module requires numba; backend.py guarantees that. Each
function matches its numpy twin to floating-point roundoff (the agreement
is pinned by tests), so the two backends are interchangeable.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_LOG2 = math.log(2.0)


@njit(cache=True)
def _h2(x):
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -(x * math.log(x) + (1.0 - x) * math.log(1.0 - x)) / _LOG2


@njit(cache=True)
def _conditional_entropy_scan(a, b, t_mat, axes):
    m = axes.shape[0]
    out = np.zeros(m)
    for s in range(m):
        nx, ny, nz = axes[s, 0], axes[s, 1], axes[s, 2]
        na = nx * a[0] + ny * a[1] + nz * a[2]
        tn0 = nx * t_mat[0, 0] + ny * t_mat[1, 0] + nz * t_mat[2, 0]
        tn1 = nx * t_mat[0, 1] + ny * t_mat[1, 1] + nz * t_mat[2, 1]
        tn2 = nx * t_mat[0, 2] + ny * t_mat[1, 2] + nz * t_mat[2, 2]
        total = 0.0
        for sign in (1.0, -1.0):
            p = 0.5 * (1.0 + sign * na)
            if p <= 1e-15:
                continue
            v0 = (b[0] + sign * tn0) / (2.0 * p)
            v1 = (b[1] + sign * tn1) / (2.0 * p)
            v2 = (b[2] + sign * tn2) / (2.0 * p)
            r = math.sqrt(v0 * v0 + v1 * v1 + v2 * v2)
            x = 0.5 * (1.0 + r)
            if x > 1.0:
                x = 1.0
            total += p * _h2(x)
        out[s] = total
    return out


@njit(cache=True)
def _axis_operator(nx, ny, nz):
    s = np.zeros((4, 4), dtype=np.complex128)
    off = complex(nx, -ny)
    s[0, 0] = nz
    s[1, 1] = nz
    s[2, 2] = -nz
    s[3, 3] = -nz
    s[0, 2] = off
    s[1, 3] = off
    s[2, 0] = off.conjugate()
    s[3, 1] = off.conjugate()
    return s


@njit(cache=True)
def _measured_distance_scan(rho, axes):
    m = axes.shape[0]
    out = np.zeros(m)
    for k in range(m):
        s = _axis_operator(axes[k, 0], axes[k, 1], axes[k, 2])
        delta = 0.5 * (rho - s @ rho @ s)
        w = np.linalg.eigvalsh(delta)
        acc = 0.0
        for i in range(w.shape[0]):
            acc += abs(w[i])
        out[k] = acc
    return out


@njit(cache=True)
def _measured_fidelity_scan(sqrt_rho, rho, axes):
    m = axes.shape[0]
    out = np.zeros(m)
    for k in range(m):
        s = _axis_operator(axes[k, 0], axes[k, 1], axes[k, 2])
        chi = 0.5 * (rho + s @ rho @ s)
        inner = sqrt_rho @ chi @ sqrt_rho
        w = np.linalg.eigvalsh(inner)
        acc = 0.0
        for i in range(w.shape[0]):
            if w[i] > 0.0:
                acc += math.sqrt(w[i])
        out[k] = acc * acc
    return out


@njit(cache=True)
def _ip_objective_scan(weights, vecs, angles):
    m = angles.shape[0]
    dim = weights.shape[0]
    out = np.zeros(m)
    # pair weights with vanishing-sum pairs masked out
    g = np.zeros((dim, dim))
    for i in range(dim):
        for l in range(dim):
            if i == l:
                continue
            wsum = weights[i] + weights[l]
            if wsum > 1e-12:
                d = weights[i] - weights[l]
                g[i, l] = 2.0 * d * d / wsum
    vd = vecs.conj().T.copy()
    for s in range(m):
        ha = 0.5 * angles[s, 0]
        hb = 0.5 * angles[s, 1]
        hg = 0.5 * angles[s, 2]
        ca, sa = math.cos(ha), math.sin(ha)
        eb = complex(math.cos(hb), -math.sin(hb))
        eg = complex(math.cos(hg), -math.sin(hg))
        u = np.empty((2, 2), dtype=np.complex128)
        u[0, 0] = eb * ca * eg
        u[0, 1] = -eb * sa * eg.conjugate()
        u[1, 0] = eb.conjugate() * sa * eg
        u[1, 1] = eb.conjugate() * ca * eg.conjugate()
        h = np.empty((2, 2), dtype=np.complex128)
        for i in range(2):
            for j in range(2):
                h[i, j] = u[i, 0] * u[j, 0].conjugate() - u[i, 1] * u[j, 1].conjugate()
        ht = np.zeros((4, 4), dtype=np.complex128)
        for i in range(2):
            for j in range(2):
                ht[2 * i, 2 * j] = h[i, j]
                ht[2 * i + 1, 2 * j + 1] = h[i, j]
        a_mat = vd @ ht @ vecs
        acc = 0.0
        for i in range(dim):
            for l in range(dim):
                if g[i, l] != 0.0:
                    z = a_mat[i, l]
                    acc += g[i, l] * (z.real * z.real + z.imag * z.imag)
        out[s] = acc
    return out


IMPLS = {
    "conditional_entropy_scan": _conditional_entropy_scan,
    "measured_distance_scan": _measured_distance_scan,
    "measured_fidelity_scan": _measured_fidelity_scan,
    "ip_objective_scan": _ip_objective_scan,
}
