"""Open-system trajectories of correlated spin pairs and the features
that appear along them: sudden changes of the dominant correlation,
discord freezing windows, and the parity split of the multipartite
discord plateau.

Phase damping acts per qubit, so the transverse correlators of an
n-qubit parity state decay as exp(-n*gamma*t) while the longitudinal one
stays put; every closed form below is that single fact unpacked.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import correlations, qmatrix
from .channels import apply as channel_apply
from .channels import local_apply
from .states import CorrelationTriple, _mat, correlation_triple, is_bell_diagonal, m3n_state

TIME_GRID_POINTS = 200


def default_times(gamma: float, n_points: int = TIME_GRID_POINTS) -> np.ndarray:
    """Uniform grid over [0, 5/(2*gamma)], long enough for the transverse
    correlators to fall below 1 percent."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return np.linspace(0.0, 2.5 / gamma, n_points)


def effective_gamma(t2a: float, t2b: float) -> float:
    """Single dephasing rate equivalent to two unequal ones: the transverse
    correlators pick up exp(-t/T2a - t/T2b) = exp(-2*gamma_eff*t)."""
    if t2a <= 0 or t2b <= 0:
        raise ValueError("T2 times must be positive")
    return 0.5 * (1.0 / t2a + 1.0 / t2b)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    triples: np.ndarray | None
    series: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)


QUANTIFIER_NAMES = (
    "mutual",
    "entropic_discord",
    "entropic_classical",
    "discord_luo",
    "discord_trace",
    "discord_bures",
    "discord_fid",
    "classical_geo",
    "gqd",
)


def _snapshot_values(rho, names) -> dict:
    mat = _mat(rho)
    out = {}
    report = None
    for name in names:
        if name == "mutual":
            out[name] = correlations.quantum_mutual_information(mat)
        elif name in ("entropic_discord", "entropic_classical"):
            if report is None:
                report = correlations.entropic_discord(mat)
            out[name] = report.discord if name == "entropic_discord" else report.classical
        elif name == "discord_luo":
            if not is_bell_diagonal(mat):
                raise ValueError("discord_luo is defined on Bell-diagonal states only")
            out[name] = correlations.luo_discord(correlation_triple(mat))
        elif name == "discord_trace":
            out[name] = correlations.geometric_discord(mat, "trace").value
        elif name == "discord_bures":
            out[name] = correlations.geometric_discord(mat, "bures", method="numeric").value
        elif name == "discord_fid":
            out[name] = correlations.geometric_discord(
                mat, "fidelity_based", method="numeric"
            ).value
        elif name == "classical_geo":
            out[name] = correlations.geometric_classical(mat)
        elif name == "gqd":
            out[name] = correlations.global_quantum_discord(mat)
        else:
            raise ValueError(f"unknown quantifier {name!r}")
    return out


def bd_pd_triple(c0, gamma: float, t: float, n: int = 2) -> np.ndarray:
    """Correlation triple of an n-qubit parity state after per-qubit phase
    damping for time t."""
    c0 = CorrelationTriple.from_any(c0).as_array()
    decay = np.exp(-n * gamma * t)
    return np.array([c0[0] * decay, c0[1] * decay, c0[2]])


def evolve_bd_pd(c0, gamma: float, times=None, quantifiers=()) -> Trajectory:
    """Bell-diagonal state under independent phase damping of both qubits.

    Snapshot semantics: each grid point is computed from the initial triple
    in closed form, not by chaining steps, so grid refinement never changes
    the values at shared points.
    """
    c0 = CorrelationTriple.from_any(c0)
    m3n_state(c0, 2)  # reject unphysical input up front
    if times is None:
        times = default_times(gamma)
    times = np.asarray(times, dtype=float)
    triples = np.array([bd_pd_triple(c0, gamma, t) for t in times])
    series = {name: np.empty(len(times)) for name in quantifiers}
    for k, trip in enumerate(triples):
        if quantifiers:
            vals = _snapshot_values(m3n_state(trip, 2, check=False), quantifiers)
            for name in quantifiers:
                series[name][k] = vals[name]
    return Trajectory(
        times=times,
        triples=triples,
        series=series,
        params={"gamma": gamma, "c0": tuple(c0.as_array()), "model": "bd_pd"},
    )


def evolve_general(
    rho0, channel_of, times=None, chain: bool = False, quantifiers=(), keep_states: bool = False
) -> Trajectory:
    """Trajectory of an arbitrary state under a time-parameterized channel.

    channel_of(t) must return either a single channel acting on the full
    register or a per-qubit list for local application. With chain=False
    (default) the channel is built fresh from each absolute time and applied
    to the initial state; chain=True composes increments sequentially, which
    only agrees with the snapshot form for semigroup channels.
    """
    mat0 = _mat(rho0)
    if times is None:
        raise ValueError("evolve_general needs an explicit time grid")
    times = np.asarray(times, dtype=float)
    series = {name: np.empty(len(times)) for name in quantifiers}
    states = []
    triples = np.empty((len(times), 3)) if mat0.shape[0] == 4 else None

    def apply_at(mat, spec):
        if isinstance(spec, (list, tuple)):
            return _mat(local_apply(spec, mat))
        return _mat(channel_apply(spec, mat))

    current = mat0
    previous_t = 0.0
    for k, t in enumerate(times):
        if chain:
            current = apply_at(current, channel_of(t - previous_t))
            previous_t = t
            state = current
        else:
            state = apply_at(mat0, channel_of(t))
        if keep_states:
            states.append(state)
        if triples is not None:
            triples[k] = correlation_triple(state).as_array()
        if quantifiers:
            vals = _snapshot_values(state, quantifiers)
            for name in quantifiers:
                series[name][k] = vals[name]
    params = {"model": "general", "chain": chain}
    if keep_states:
        params["states"] = states
    return Trajectory(times=times, triples=triples, series=series, params=params)


# ---------------------------------------------------------------------------
# Change-point detection

@dataclass(frozen=True)
class ChangePoint:
    time: float
    index: int
    kind: str
    series: str
    magnitude: float


def detect_sudden_changes(traj: Trajectory, series: str | None = None, tol: float = 0.05):
    """Locate abrupt events along a trajectory.

    With series None or 'triples' the detector watches the ordering of the
    correlation magnitudes |c_i(t)| and reports every grid interval where
    the dominant or the intermediate component changes, at the interval
    midpoint. For a named quantifier series it instead compares one-sided
    slopes at interior grid points and flags those where the slopes differ
    by more than tol times the largest slope in the series. The two views
    are intentionally not mixed: a quantifier can be perfectly smooth
    through an ordering switch and vice versa.
    """
    events = []
    if series is None or series == "triples":
        if traj.triples is None:
            raise ValueError("trajectory carries no correlation triples")
        mags = np.abs(traj.triples)
        order = np.argsort(mags, axis=1)
        dominant, intermediate = order[:, 2], order[:, 1]
        for k in range(len(traj.times) - 1):
            switched = []
            if dominant[k] != dominant[k + 1]:
                switched.append("dominant")
            if intermediate[k] != intermediate[k + 1]:
                switched.append("intermediate")
            if switched:
                events.append(
                    ChangePoint(
                        time=0.5 * (traj.times[k] + traj.times[k + 1]),
                        index=k,
                        kind="ordering-switch",
                        series="triples",
                        magnitude=float(len(switched)),
                    )
                )
        return events

    if series not in traj.series:
        raise KeyError(f"series {series!r} not present in trajectory")
    y = np.asarray(traj.series[series], dtype=float)
    t = traj.times
    if len(y) < 3:
        return events
    left = (y[1:-1] - y[:-2]) / (t[1:-1] - t[:-2])
    right = (y[2:] - y[1:-1]) / (t[2:] - t[1:-1])
    jump = np.abs(right - left)
    scale = max(np.max(np.abs(left)), np.max(np.abs(right)), 1e-300)
    flagged = np.nonzero(jump > tol * scale)[0]
    for group_start in range(len(flagged)):
        k = flagged[group_start]
        # merge runs of adjacent flags, keeping the strongest point
        if group_start > 0 and flagged[group_start - 1] == k - 1:
            if jump[k] <= events[-1].magnitude:
                continue
            events.pop()
        events.append(
            ChangePoint(
                time=float(t[k + 1]),
                index=int(k + 1),
                kind="slope-discontinuity",
                series=series,
                magnitude=float(jump[k]),
            )
        )
    return events


# ---------------------------------------------------------------------------
# Freezing

def _freezing_structure(c0) -> tuple[int, float]:
    """Return (transverse_axis, |c3|) when the triple has the frozen-discord
    structure: one transverse component of unit magnitude, the other locked
    to -c_unit * c3. Raises ValueError otherwise."""
    c = CorrelationTriple.from_any(c0).as_array()
    tol = 1e-9
    if abs(abs(c[0]) - 1.0) <= tol and abs(c[1] + c[0] * c[2]) <= tol:
        unit_axis = 0
    elif abs(abs(c[1]) - 1.0) <= tol and abs(c[0] + c[1] * c[2]) <= tol:
        unit_axis = 1
    else:
        raise ValueError(
            "triple lacks the freezing structure |c_t|=1, c_other=-c_t*c3"
        )
    if not 0.0 < abs(c[2]) < 1.0:
        raise ValueError("freezing needs 0 < |c3| < 1")
    return unit_axis, abs(c[2])


def freezing_time(c0, gamma: float) -> float:
    """Instant where the decaying transverse correlator meets the constant
    longitudinal one: t* = ln(1/|c3|) / (2*gamma)."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    _, c3_abs = _freezing_structure(c0)
    return float(np.log(1.0 / c3_abs) / (2.0 * gamma))


@dataclass(frozen=True)
class FreezingCheck:
    quantifier: str
    plateau_value: float
    relative_variation: float
    frozen: bool
    post_strictly_decreasing: bool


@dataclass(frozen=True)
class FreezeReport:
    t_star: float
    checks: dict
    frozen: bool
    times: np.ndarray
    series: dict


FREEZING_QUANTIFIERS = (
    "entropic_discord",
    "discord_trace",
    "discord_bures",
    "discord_fid",
)


def verify_freezing(
    c0,
    gamma: float,
    quantifiers=FREEZING_QUANTIFIERS,
    n_points: int = 41,
    rel_tol: float = 2e-7,
) -> FreezeReport:
    """Numerically confirm the discord plateau of a freezing-family triple.

    Each requested quantifier is evaluated on a grid spanning [0, 2 t*]
    (t* lands exactly on a grid point for odd n_points). Frozen means the
    relative variation over t <= t* stays within rel_tol; the report also
    records whether the series strictly decreases after t*.
    """
    t_star = freezing_time(c0, gamma)
    times = np.linspace(0.0, 2.0 * t_star, n_points)
    traj = evolve_bd_pd(c0, gamma, times, quantifiers=quantifiers)
    window = times <= t_star * (1.0 + 1e-12)
    checks = {}
    for name in quantifiers:
        y = traj.series[name]
        plateau = y[window]
        center = float(np.median(plateau))
        scale = max(abs(center), 1e-300)
        variation = float((plateau.max() - plateau.min()) / scale)
        tail = y[~window]
        post_dec = bool(
            len(tail) >= 2 and np.all(np.diff(np.concatenate(([plateau[-1]], tail))) < 0)
        )
        checks[name] = FreezingCheck(
            quantifier=name,
            plateau_value=center,
            relative_variation=variation,
            frozen=variation <= rel_tol,
            post_strictly_decreasing=post_dec,
        )
    return FreezeReport(
        t_star=t_star,
        checks=checks,
        frozen=all(c.frozen for c in checks.values()),
        times=times,
        series=traj.series,
    )


@dataclass(frozen=True)
class DynamicsClass:
    kind: str
    event_time: float | None
    detail: str


def classify_dynamics(c0, gamma: float) -> DynamicsClass:
    """Sort a Bell-diagonal triple under phase damping into one of three
    regimes: 'freezing' (plateau then decay, switch at t*), 'sudden_change'
    (dominant correlation switches axis at a finite time without a
    plateau), or 'smooth' (no switch at all)."""
    c = CorrelationTriple.from_any(c0).as_array()
    m3n_state(c, 2)
    try:
        t_star = freezing_time(c, gamma)
        return DynamicsClass(
            kind="freezing",
            event_time=t_star,
            detail=f"discord plateau until t*={t_star:.6g}",
        )
    except ValueError:
        pass
    transverse = max(abs(c[0]), abs(c[1]))
    longitudinal = abs(c[2])
    if transverse > longitudinal > 1e-12:
        t_c = float(np.log(transverse / longitudinal) / (2.0 * gamma))
        return DynamicsClass(
            kind="sudden_change",
            event_time=t_c,
            detail=f"dominant axis switches at t={t_c:.6g}",
        )
    return DynamicsClass(kind="smooth", event_time=None, detail="no axis switch")


# ---------------------------------------------------------------------------
# Parity scan of the multipartite discord

@dataclass(frozen=True)
class ParityScanEntry:
    n: int
    parity: str
    times: np.ndarray
    values: np.ndarray
    t_cross: float
    variation: float
    plateau: bool
    strictly_decreasing: bool


def gqd_parity_scan(
    entries: dict,
    gamma: float = 1.0,
    n_points: int = 25,
    threshold: float = 1e-4,
    window_fraction: float = 0.9,
) -> dict:
    """Track the multipartite discord of n-qubit parity states under
    per-qubit phase damping, inside the window before the transverse and
    longitudinal magnitudes cross (t_cross = ln(|c1|/|c3|)/(n*gamma)).

    entries maps n to the initial correlation triple. Even n freezes the
    discord over the whole window; odd n decays from t=0. Both facts are
    reported per entry: 'plateau' bounds the absolute variation by
    threshold, 'strictly_decreasing' checks monotone decay.
    """
    out = {}
    for n, c0 in entries.items():
        c = CorrelationTriple.from_any(c0).as_array()
        m3n_state(c, n)
        if not abs(c[0]) > abs(c[2]) > 0:
            raise ValueError(f"n={n}: need |c1| > |c3| > 0 for a crossing window")
        t_cross = float(np.log(abs(c[0]) / abs(c[2])) / (n * gamma))
        times = np.linspace(0.0, window_fraction * t_cross, n_points)
        values = np.empty(n_points)
        for k, t in enumerate(times):
            trip = bd_pd_triple(c, gamma, t, n=n)
            values[k] = correlations.global_quantum_discord(m3n_state(trip, n, check=False))
        variation = float(values.max() - values.min())
        out[n] = ParityScanEntry(
            n=n,
            parity="even" if n % 2 == 0 else "odd",
            times=times,
            values=values,
            t_cross=t_cross,
            variation=variation,
            plateau=variation <= threshold,
            strictly_decreasing=bool(np.all(np.diff(values) < 0)),
        )
    return out
