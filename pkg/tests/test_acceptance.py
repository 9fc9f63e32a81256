"""Release gate: one test per numbered criterion, each printing a single
pass/fail line under pytest -v.

Every test pins a quantitative claim of the library at an explicit
tolerance and, where stated, a wall-clock budget measured on the spot.
The budgets are generous for warm kernels; the first run may additionally
pay the one-time numba compilation, which the slower limits absorb.
"""

import math
import time

import numpy as np
import pytest

from spincorr import bloch, channels, correlations, dynamics, metrology, states
from spincorr.qmatrix import partial_trace


def random_bd_triples(rng, count):
    """Rejection-sample physical Bell-diagonal triples, uniform over the cube."""
    out = []
    while len(out) < count:
        c = rng.uniform(-1.0, 1.0, size=3)
        try:
            states.m3n_state(c, 2)
        except states.UnphysicalStateError:
            continue
        out.append(c)
    return out


def test_criterion_01_pseudopure_entanglement_threshold():
    start = time.perf_counter()
    psi = states.bell("psi-")

    def entangled(eps):
        return states.peres_entangled(states.pseudopure(psi, eps)).entangled

    lo, hi = 0.0, 1.0
    assert not entangled(lo) and entangled(hi)
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if entangled(mid):
            hi = mid
        else:
            lo = mid
    threshold = 0.5 * (lo + hi)
    elapsed = time.perf_counter() - start
    assert abs(threshold - 1.0 / 3.0) <= 1e-9
    assert elapsed < 1.0, f"took {elapsed:.2f}s"


def test_criterion_02_octahedron_separability():
    start = time.perf_counter()
    grid = np.linspace(-1.0, 1.0, 21)
    checked = 0
    for c1 in grid:
        for c2 in grid:
            for c3 in grid:
                try:
                    rho = states.m3n_state((c1, c2, c3), 2)
                except states.UnphysicalStateError:
                    continue
                checked += 1
                # grid sums are multiples of 0.1 up to float rounding, so a
                # 1e-9 slack on both predicates cannot flip any point
                by_peres = states.peres_entangled(rho).negative_eigenvalue < -1e-9
                by_octahedron = abs(c1) + abs(c2) + abs(c3) > 1.0 + 1e-9
                assert by_peres == by_octahedron, (c1, c2, c3)
    elapsed = time.perf_counter() - start
    assert checked > 1000  # the physical tetrahedron is well sampled
    assert elapsed < 10.0, f"took {elapsed:.2f}s"


def test_criterion_03_sudden_change_point():
    start = time.perf_counter()
    p_grid = np.arange(0.0, 0.9 + 1e-12, 1e-3)
    times = -np.log1p(-p_grid)
    traj = dynamics.evolve_bd_pd((1.0, -0.6, 0.6), 1.0, times)
    events = dynamics.detect_sudden_changes(traj)
    elapsed = time.perf_counter() - start
    assert len(events) == 1
    p_event = 1.0 - math.exp(-events[0].time)
    p_true = 1.0 - math.sqrt(0.6)  # 0.22540...
    assert abs(p_event - p_true) <= 1e-3 + 1e-12
    assert elapsed < 5.0, f"took {elapsed:.2f}s"


def test_criterion_04_double_sudden_change():
    start = time.perf_counter()
    gamma = 1.0
    times = dynamics.default_times(gamma)  # 200 points over [0, 2.5]
    step = times[1] - times[0]
    traj = dynamics.evolve_bd_pd(
        (0.49, 0.20, 0.067),
        gamma,
        times,
        quantifiers=("discord_trace", "classical_geo"),
    )
    discord_events = dynamics.detect_sudden_changes(traj, series="discord_trace")
    classical_events = dynamics.detect_sudden_changes(traj, series="classical_geo")
    elapsed = time.perf_counter() - start

    assert len(discord_events) == 2
    t1 = math.log(0.20 / 0.067) / (2.0 * gamma)
    t2 = math.log(0.49 / 0.067) / (2.0 * gamma)
    assert abs(discord_events[0].time - t1) <= step + 1e-12
    assert abs(discord_events[1].time - t2) <= step + 1e-12

    assert len(classical_events) == 1
    assert abs(classical_events[0].time - t2) <= step + 1e-12
    assert elapsed < 10.0, f"took {elapsed:.2f}s"


def test_criterion_05_freezing_of_all_four_quantifiers():
    start = time.perf_counter()
    gamma = 1.0
    report = dynamics.verify_freezing(
        (1.0, 0.7, -0.7),
        gamma,
        quantifiers=dynamics.FREEZING_QUANTIFIERS,
        n_points=41,
        rel_tol=1e-4,
    )
    t_star = math.log(10.0 / 7.0) / (2.0 * gamma)
    assert abs(report.t_star - t_star) < 1e-12
    for name in ("entropic_discord", "discord_trace", "discord_bures", "discord_fid"):
        check = report.checks[name]
        assert check.relative_variation < 1e-4, name
        assert check.post_strictly_decreasing, name

    # the plateau's end is a detectable slope event at t* to one grid step
    step = report.times[1] - report.times[0]
    traj = dynamics.Trajectory(times=report.times, triples=None, series=report.series)
    events = dynamics.detect_sudden_changes(traj, series="discord_trace")
    assert len(events) == 1
    assert abs(events[0].time - t_star) <= step + 1e-12
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"took {elapsed:.2f}s"


def test_criterion_06_multipartite_discord_parity():
    start = time.perf_counter()
    entries = {
        2: states.freezing_family(2, 0.7),
        3: (0.7, 0.3, -0.3),
        4: states.freezing_family(4, 0.7),
    }
    scans = dynamics.gqd_parity_scan(entries, gamma=1.0, n_points=25, threshold=1e-4)
    elapsed = time.perf_counter() - start
    assert scans[2].plateau
    assert scans[4].plateau
    assert not scans[3].plateau
    assert scans[3].strictly_decreasing
    assert elapsed < 120.0, f"took {elapsed:.2f}s"


def test_criterion_07_interferometric_power():
    start = time.perf_counter()
    for p in (0.0, 0.25, 0.5, 0.75, 1.0):
        ip_q = metrology.interferometric_power(states.probe_state(p, "quantum")).value
        assert abs(ip_q - p**2) <= 1e-9, p
        ip_c = metrology.interferometric_power(states.probe_state(p, "classical")).value
        assert ip_c <= 1e-9, p

    rng = np.random.default_rng(2024)
    for _ in range(20):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = a @ a.conj().T
        rho /= np.trace(rho).real
        closed = metrology.interferometric_power(rho).value
        brute = metrology.ip_oracle(rho, n_samples=500, refine_top=4).value
        assert abs(brute - closed) <= 1e-3
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"took {elapsed:.2f}s"


def test_criterion_08_estimation_suite():
    start = time.perf_counter()
    phi0 = 0.25 * math.pi
    p_grid = (0.25, 0.5, 0.75, 1.0)
    for p in p_grid:
        for kind in ("quantum", "classical"):
            probe = states.probe_state(p, kind)
            ip_val = metrology.interferometric_power(probe).value
            for setting in (1, 2, 3):
                if kind == "classical" and setting == 3:
                    with pytest.raises(metrology.PathologicalSetting):
                        metrology.estimate(probe, metrology.h_setting(setting), phi0)
                    continue
                out = metrology.estimate(probe, metrology.h_setting(setting), phi0)
                assert abs(out.mean - phi0) <= 1e-6, (p, kind, setting)
                assert abs(out.variance * out.n_shots * out.qfi - 1.0) <= 1e-9
                if kind == "quantum" and setting in (2, 3):
                    gap = out.qfi / 4.0 - ip_val
                    assert gap >= -1e-9, (p, setting)
                    assert gap <= 1e-6, (p, setting)
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"took {elapsed:.2f}s"


def test_criterion_09_channel_algebra():
    rng = np.random.default_rng(99)
    for _ in range(100):
        q, g, pb = rng.random(), rng.random(), rng.random()
        assert channels.pd_channel(q).completeness_residual() <= 1e-12
        assert (
            channels.gad_channel(channels.GadParams(gamma=g, p_bias=pb)).completeness_residual()
            <= 1e-12
        )
        assert channels.gpd_channel(q).completeness_residual() <= 1e-12

    # dephasing composes as a semigroup: q12 = 1 - (1-q1)(1-q2)
    for _ in range(20):
        q1, q2 = rng.random(), rng.random()
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = a @ a.conj().T
        rho /= np.trace(rho).real
        two_step = channels.apply(
            channels.pd_channel(q2), channels.apply(channels.pd_channel(q1), rho)
        )
        one_step = channels.apply(
            channels.pd_channel(1.0 - (1.0 - q1) * (1.0 - q2)), rho
        )
        assert np.max(np.abs(two_step - one_step)) <= 1e-10

    for g in (0.1, 0.5, 0.9):
        for pb in (0.0, 0.25, 0.5, 1.0):
            fixed = np.diag([pb, 1.0 - pb]).astype(complex)
            out = channels.apply(channels.gad_channel(channels.GadParams(g, pb)), fixed)
            assert np.max(np.abs(out - fixed)) <= 1e-10

    for trip in random_bd_triples(rng, 10):
        rho = states.bell_diagonal(trip).matrix
        for q in (0.3, 1.0):
            out = channels.apply(channels.gpd_channel(q), rho)
            assert np.max(np.abs(out - rho)) <= 1e-14


def test_criterion_10_bloch_consistency():
    rng = np.random.default_rng(10)

    # stationary solution solves the linear system
    for _ in range(20):
        p = bloch.BlochParams(
            m0=rng.uniform(0.5, 2.0),
            t1=rng.uniform(0.5, 3.0),
            t2=rng.uniform(0.1, 0.9),
            delta_omega=rng.uniform(-5.0, 5.0),
            omega1=rng.uniform(0.0, 5.0),
        )
        a, f = bloch.relaxation_operator(p)
        m_inf = bloch.stationary(p).as_array()
        assert np.linalg.norm(a @ m_inf - f) <= 1e-10

    # closed-form drive dynamics against the integrator, relative to m0
    sp = bloch.SpinPulse(omega0=10.0, omega1=2.0, delta_omega=1.5, tau=0.0)
    report = bloch.closed_form_report(1.0, sp, np.linspace(0.0, 3.0, 61))
    assert report["exact"] <= 1e-6
    # the commonly printed variant disagrees at order one in my; that gap is
    # quantified rather than patched over
    assert report["textbook"] > 1e-2

    # quantum and classical work coincide once hbar*omega0 = 2*b0*m0
    m0, b0 = 1.0, 2.5
    omega0 = 2.0 * b0 * m0
    for _ in range(100):
        sp = bloch.SpinPulse(
            omega0=omega0,
            omega1=rng.uniform(0.1, 5.0),
            delta_omega=rng.uniform(-5.0, 5.0),
            tau=rng.uniform(0.0, 3.0),
        )
        wq = bloch.quantum_work(sp)
        wc = bloch.classical_work(m0, b0, sp)
        assert abs(wq - wc) <= 1e-12


def test_criterion_11_closed_form_discord_vs_numeric_extremization():
    start = time.perf_counter()
    rng = np.random.default_rng(1111)
    for trip in random_bd_triples(rng, 100):
        closed = correlations.luo_discord(trip)
        numeric = correlations.entropic_discord(states.bell_diagonal(trip)).discord
        assert abs(closed - numeric) <= 1e-4, trip
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0, f"took {elapsed:.2f}s"
