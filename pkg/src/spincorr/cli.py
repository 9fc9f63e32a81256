"""Command-line front end.

Every subcommand reads an optional JSON config file, overlays any flags
that were explicitly given, and emits either a CSV table (first line a
`# config_hash=` comment binding the output to the exact effective
configuration) or a sorted-key JSON document. Nothing here depends on
wall-clock time or unseeded randomness, so rerunning a command with the
same inputs reproduces the output byte for byte.

Exit codes: 0 success, 2 bad arguments or config, 3 numerical or
physicality failure, 64 unknown subcommand.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import bloch, channels, correlations, dynamics, metrology, qmatrix, states

VALIDATION_EXIT = 2
NUMERICAL_EXIT = 3
UNKNOWN_COMMAND_EXIT = 64


# ---------------------------------------------------------------------------
# Shared plumbing

def _config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


def _csv_text(columns, rows, config: dict) -> str:
    lines = [f"# config_hash={_config_hash(config)}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit_text(text: str, out_path, summary=()):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
        for line in summary:
            print(line)
    else:
        sys.stdout.write(text)


def _emit_json(doc: dict, out_path):
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    _emit_text(text, out_path)


def _effective_config(defaults: dict, config_path, overrides: dict) -> dict:
    config = {k: v for k, v in defaults.items()}
    if config_path:
        with open(config_path, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ValueError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - set(defaults))
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        config.update(loaded)
    for key, value in overrides.items():
        if value is not None:
            config[key] = value
    return config


def _build_state(spec: dict):
    kind = spec.get("kind")
    if kind in ("bell_diagonal", "bd"):
        return states.bell_diagonal(spec["c"])
    if kind == "m3n":
        return states.m3n_state(spec["c"], int(spec["n"]))
    if kind == "pseudopure":
        psi = states.bell(spec.get("bell", "psi-"))
        return states.pseudopure(psi, float(spec["epsilon"]))
    if kind == "probe":
        return states.probe_state(float(spec["p"]), spec.get("probe_kind", "quantum"))
    if kind == "bell":
        psi = states.bell(spec["name"])
        return states.DensityMatrix.from_matrix(np.outer(psi, psi.conj()))
    if kind == "matrix":
        return states.from_json_dict(spec)
    raise ValueError(f"unknown state kind {spec.get('kind')!r}")


def _state_argument(parser: argparse.ArgumentParser):
    parser.add_argument("--state", help="inline JSON state spec, overrides config")


def _state_spec(config: dict, ns) -> dict:
    if getattr(ns, "state", None):
        spec = json.loads(ns.state)
        config["state"] = spec  # the config hash must bind the parsed spec
        return spec
    spec = config.get("state")
    if not isinstance(spec, dict):
        raise ValueError("no state spec given (config key 'state' or --state)")
    return spec


def _common_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--out", help="output file (CSV or JSON per command)")


# ---------------------------------------------------------------------------
# Subcommands

def _cmd_bloch(argv) -> int:
    defaults = {
        "m0": 1.0,
        "t1": 1.0,
        "t2": 0.5,
        "delta_omega": 0.0,
        "omega1": 2.0 * math.pi,
        "t_max": 3.0,
        "n_points": 200,
        "initial": None,
    }
    parser = argparse.ArgumentParser(prog="spincorr bloch")
    _common_arguments(parser)
    parser.add_argument("--m0", type=float)
    parser.add_argument("--t1", type=float)
    parser.add_argument("--t2", type=float)
    parser.add_argument("--delta-omega", dest="delta_omega", type=float)
    parser.add_argument("--omega1", type=float)
    parser.add_argument("--t-max", dest="t_max", type=float)
    parser.add_argument("--n-points", dest="n_points", type=int)
    ns = parser.parse_args(argv)
    config = _effective_config(
        defaults,
        ns.config,
        {k: getattr(ns, k) for k in defaults if hasattr(ns, k)},
    )
    params = bloch.BlochParams(
        m0=config["m0"],
        t1=config["t1"],
        t2=config["t2"],
        delta_omega=config["delta_omega"],
        omega1=config["omega1"],
    )
    if config["initial"] is None:
        m_init = bloch.Magnetization(0.0, 0.0, config["m0"])
    else:
        m_init = bloch.Magnetization.from_array(np.asarray(config["initial"], dtype=float))
    times = np.linspace(0.0, config["t_max"], int(config["n_points"]))
    rows = bloch.trajectory(params, m_init, times)
    m_inf = bloch.stationary(params)
    text = _csv_text(("t", "mx", "my", "mz"), rows, config)
    _emit_text(
        text,
        ns.out,
        summary=[f"stationary: mx={m_inf.mx:.6g} my={m_inf.my:.6g} mz={m_inf.mz:.6g}"],
    )
    return 0


def _cmd_work(argv) -> int:
    defaults = {
        "m0": 1.0,
        "b0": 1.0,
        "sigma_z0": 1.0,
        "omega0": None,
        "omega1": 1.0,
        "delta_omega": 0.0,
        "tau_max": 10.0,
        "n_points": 200,
    }
    parser = argparse.ArgumentParser(prog="spincorr work")
    _common_arguments(parser)
    parser.add_argument("--m0", type=float)
    parser.add_argument("--b0", type=float)
    parser.add_argument("--sigma-z0", dest="sigma_z0", type=float)
    parser.add_argument("--omega0", type=float)
    parser.add_argument("--omega1", type=float)
    parser.add_argument("--delta-omega", dest="delta_omega", type=float)
    parser.add_argument("--tau-max", dest="tau_max", type=float)
    parser.add_argument("--n-points", dest="n_points", type=int)
    ns = parser.parse_args(argv)
    config = _effective_config(
        defaults, ns.config, {k: getattr(ns, k) for k in defaults if hasattr(ns, k)}
    )
    omega0 = config["omega0"]
    if omega0 is None:
        # moment mu = m0 and splitting hbar omega0 = 2 mu B0
        omega0 = 2.0 * config["b0"] * config["m0"]
        config = dict(config)
        config["omega0"] = omega0
    taus = np.linspace(0.0, config["tau_max"], int(config["n_points"]))
    rows = []
    for tau in taus:
        sp = bloch.SpinPulse(
            omega0=omega0,
            omega1=config["omega1"],
            delta_omega=config["delta_omega"],
            tau=tau,
        )
        rows.append(
            (
                tau,
                bloch.classical_work(config["m0"], config["b0"], sp),
                bloch.quantum_work(sp),
                bloch.average_work(config["sigma_z0"], config["b0"], sp),
                bloch.sigma_z_expect(sp),
            )
        )
    text = _csv_text(
        ("tau", "classical_work", "quantum_work", "average_work", "sigma_z"),
        rows,
        config,
    )
    _emit_text(text, ns.out, summary=[f"wrote {len(rows)} rows"])
    return 0


def _cmd_state(argv) -> int:
    defaults = {"state": {"kind": "bell_diagonal", "c": [1.0, -0.6, 0.6]}}
    parser = argparse.ArgumentParser(prog="spincorr state")
    _common_arguments(parser)
    _state_argument(parser)
    ns = parser.parse_args(argv)
    config = _effective_config(defaults, ns.config, {})
    spec = _state_spec(config, ns)
    rho = _build_state(spec)
    doc = states.to_json_dict(rho)
    doc["purity"] = states.purity(rho)
    doc["entropy"] = states.von_neumann_entropy(rho)
    if rho.matrix.shape[0] == 4:
        doc["correlation_triple"] = list(states.correlation_triple(rho).as_array())
        peres = states.peres_entangled(rho)
        doc["peres_negative_eigenvalue"] = peres.negative_eigenvalue
        doc["entangled"] = peres.entangled
        doc["bell_diagonal"] = states.is_bell_diagonal(rho)
    _emit_json(doc, ns.out)
    return 0


def _cmd_channel(argv) -> int:
    defaults = {
        "state": {"kind": "bell_diagonal", "c": [1.0, -0.6, 0.6]},
        "channel": "pd",
        "q": None,
        "gamma": None,
        "alpha": 0.0,
        "t": None,
        "t1": None,
        "t2": None,
        "qubits": None,
    }
    parser = argparse.ArgumentParser(prog="spincorr channel")
    _common_arguments(parser)
    _state_argument(parser)
    parser.add_argument("--channel", choices=("pd", "gad", "gpd"))
    parser.add_argument("--q", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--t", type=float)
    parser.add_argument("--t1", type=float)
    parser.add_argument("--t2", type=float)
    ns = parser.parse_args(argv)
    config = _effective_config(
        defaults,
        ns.config,
        {k: getattr(ns, k) for k in defaults if hasattr(ns, k)},
    )
    rho = _build_state(_state_spec(config, ns))
    n = rho.n_qubits
    kind = config["channel"]
    if kind == "pd":
        if config["q"] is not None:
            params = channels.PdParams(config["q"])
        elif config["t"] is not None and config["t2"] is not None:
            params = channels.PdParams.from_time(config["t"], config["t2"])
        else:
            raise ValueError("pd channel needs q, or t together with t2")
        ch = channels.pd_channel(params)
    elif kind == "gad":
        if config["gamma"] is not None:
            params = channels.GadParams.from_alpha(config["gamma"], config["alpha"])
        elif config["t"] is not None and config["t1"] is not None:
            params = channels.GadParams.from_time(config["t"], config["t1"], config["alpha"])
        else:
            raise ValueError("gad channel needs gamma, or t together with t1")
        ch = channels.gad_channel(params)
    else:
        if config["q"] is None:
            raise ValueError("gpd channel needs q")
        if n != 2:
            raise ValueError("gpd acts on two qubits")
        ch = channels.gpd_channel(config["q"])
    if kind == "gpd":
        out = channels.apply(ch, rho)
    else:
        targets = config["qubits"]
        if targets is None:
            targets = list(range(n))
        per_qubit = [ch if j in targets else None for j in range(n)]
        out = channels.local_apply(per_qubit, rho)
    doc = states.to_json_dict(out)
    doc["purity"] = states.purity(out)
    doc["entropy"] = states.von_neumann_entropy(out)
    if out.matrix.shape[0] == 4:
        doc["correlation_triple"] = list(states.correlation_triple(out).as_array())
    _emit_json(doc, ns.out)
    return 0


def _cmd_discord(argv) -> int:
    defaults = {
        "state": {"kind": "bell_diagonal", "c": [1.0, -0.6, 0.6]},
        "quantifiers": [
            "mutual",
            "entropic_classical",
            "entropic_discord",
            "discord_trace",
            "classical_geo",
        ],
    }
    parser = argparse.ArgumentParser(prog="spincorr discord")
    _common_arguments(parser)
    _state_argument(parser)
    parser.add_argument("--quantifiers", nargs="+")
    ns = parser.parse_args(argv)
    config = _effective_config(
        defaults, ns.config, {"quantifiers": ns.quantifiers}
    )
    rho = _build_state(_state_spec(config, ns))
    values = dynamics._snapshot_values(rho, config["quantifiers"])
    rows = [(name, values[name]) for name in config["quantifiers"]]
    text = _csv_text(("quantifier", "value"), rows, config)
    _emit_text(text, ns.out, summary=[f"{n}={_fmt(v)}" for n, v in rows])
    return 0


def _cmd_dynamics(argv) -> int:
    defaults = {
        "c0": [1.0, -0.6, 0.6],
        "gamma": 1.0,
        "t_max": None,
        "n_points": 200,
        "quantifiers": ["mutual", "entropic_classical", "entropic_discord"],
        "detect": ["triples"],
        "tol": 0.05,
    }
    parser = argparse.ArgumentParser(prog="spincorr dynamics")
    _common_arguments(parser)
    parser.add_argument("--c0", nargs=3, type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--t-max", dest="t_max", type=float)
    parser.add_argument("--n-points", dest="n_points", type=int)
    parser.add_argument("--quantifiers", nargs="+")
    parser.add_argument("--detect", nargs="+")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--events-out", dest="events_out")
    ns = parser.parse_args(argv)
    config = _effective_config(
        defaults,
        ns.config,
        {k: getattr(ns, k) for k in defaults if hasattr(ns, k)},
    )
    gamma = config["gamma"]
    if config["t_max"] is None:
        times = dynamics.default_times(gamma, int(config["n_points"]))
    else:
        times = np.linspace(0.0, config["t_max"], int(config["n_points"]))
    traj = dynamics.evolve_bd_pd(
        config["c0"], gamma, times, quantifiers=tuple(config["quantifiers"])
    )
    p_col = 1.0 - np.exp(-gamma * traj.times)
    columns = ["t", "p", "c1", "c2", "c3"] + list(config["quantifiers"])
    rows = []
    for k in range(len(traj.times)):
        row = [traj.times[k], p_col[k], *traj.triples[k]]
        row.extend(traj.series[name][k] for name in config["quantifiers"])
        rows.append(row)
    events = []
    for series in config["detect"]:
        name = None if series == "triples" else series
        events.extend(dynamics.detect_sudden_changes(traj, name, tol=config["tol"]))
    summary = [
        f"event series={e.series} kind={e.kind} t={_fmt(e.time)}" for e in events
    ]
    text = _csv_text(columns, rows, config)
    _emit_text(text, ns.out, summary=summary or ["no events detected"])
    if ns.events_out:
        ev_rows = [
            (e.time, e.index, e.kind, e.series, e.magnitude) for e in events
        ]
        _emit_text(
            _csv_text(("time", "index", "kind", "series", "magnitude"), ev_rows, config),
            ns.events_out,
        )
    return 0


def _cmd_freeze(argv) -> int:
    defaults = {
        "c0": [1.0, 0.7, -0.7],
        "gamma": None,
        "t2a": None,
        "t2b": None,
        "quantifiers": list(dynamics.FREEZING_QUANTIFIERS),
        "n_points": 41,
        "rel_tol": 2e-7,
    }
    parser = argparse.ArgumentParser(prog="spincorr freeze")
    _common_arguments(parser)
    parser.add_argument("--c0", nargs=3, type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--t2a", type=float)
    parser.add_argument("--t2b", type=float)
    parser.add_argument("--quantifiers", nargs="+")
    parser.add_argument("--n-points", dest="n_points", type=int)
    parser.add_argument("--rel-tol", dest="rel_tol", type=float)
    ns = parser.parse_args(argv)
    config = _effective_config(
        defaults, ns.config, {k: getattr(ns, k) for k in defaults if hasattr(ns, k)}
    )
    gamma = config["gamma"]
    if gamma is None:
        if config["t2a"] is None or config["t2b"] is None:
            gamma = 1.0
        else:
            gamma = dynamics.effective_gamma(config["t2a"], config["t2b"])
        config = dict(config)
        config["gamma"] = gamma
    report = dynamics.verify_freezing(
        config["c0"],
        gamma,
        quantifiers=tuple(config["quantifiers"]),
        n_points=int(config["n_points"]),
        rel_tol=config["rel_tol"],
    )
    columns = ["t"] + list(config["quantifiers"])
    rows = [
        [report.times[k]] + [report.series[q][k] for q in config["quantifiers"]]
        for k in range(len(report.times))
    ]
    summary = [f"t_star={_fmt(report.t_star)} frozen={report.frozen}"]
    for name, check in report.checks.items():
        summary.append(
            f"{name}: plateau={_fmt(check.plateau_value)}"
            f" rel_var={_fmt(check.relative_variation)}"
            f" frozen={check.frozen}"
            f" post_decreasing={check.post_strictly_decreasing}"
        )
    _emit_text(_csv_text(columns, rows, config), ns.out, summary=summary)
    return 0


def _cmd_gqd(argv) -> int:
    defaults = {
        "entries": {"2": [1.0, 0.7, -0.7], "3": [0.7, 0.3, -0.3], "4": [1.0, 0.7, 0.7]},
        "gamma": 1.0,
        "n_points": 25,
        "threshold": 1e-4,
        "window_fraction": 0.9,
    }
    parser = argparse.ArgumentParser(prog="spincorr gqd")
    _common_arguments(parser)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--n-points", dest="n_points", type=int)
    parser.add_argument("--threshold", type=float)
    ns = parser.parse_args(argv)
    config = _effective_config(
        defaults, ns.config, {k: getattr(ns, k) for k in defaults if hasattr(ns, k)}
    )
    entries = {int(k): v for k, v in config["entries"].items()}
    scan = dynamics.gqd_parity_scan(
        entries,
        gamma=config["gamma"],
        n_points=int(config["n_points"]),
        threshold=config["threshold"],
        window_fraction=config["window_fraction"],
    )
    rows = []
    summary = []
    for n in sorted(scan):
        entry = scan[n]
        for t, v in zip(entry.times, entry.values):
            rows.append((n, t, v))
        summary.append(
            f"n={n} parity={entry.parity} plateau={entry.plateau}"
            f" decreasing={entry.strictly_decreasing}"
            f" variation={_fmt(entry.variation)}"
        )
    _emit_text(_csv_text(("n", "t", "gqd"), rows, config), ns.out, summary=summary)
    return 0


def _cmd_ip(argv) -> int:
    defaults = {
        "state": {"kind": "probe", "p": 0.5, "probe_kind": "quantum"},
        "oracle": False,
        "n_samples": 1000,
    }
    parser = argparse.ArgumentParser(prog="spincorr ip")
    _common_arguments(parser)
    _state_argument(parser)
    parser.add_argument("--oracle", action="store_true", default=None)
    parser.add_argument("--n-samples", dest="n_samples", type=int)
    ns = parser.parse_args(argv)
    config = _effective_config(
        defaults, ns.config, {"oracle": ns.oracle, "n_samples": ns.n_samples}
    )
    rho = _build_state(_state_spec(config, ns))
    result = metrology.interferometric_power(rho)
    doc = {
        "ip": result.value,
        "minimizing_axis": [float(x) for x in result.minimizing_axis],
        "m_matrix": [[float(x) for x in row] for row in result.m_matrix],
    }
    if config["oracle"]:
        oracle = metrology.ip_oracle(rho, n_samples=int(config["n_samples"]))
        doc["oracle_value"] = oracle.value
        doc["oracle_gap"] = oracle.value - result.value
        doc["oracle_angles"] = list(oracle.angles)
    _emit_json(doc, ns.out)
    return 0


def _cmd_estimate(argv) -> int:
    defaults = {
        "state": {"kind": "probe", "p": 0.5, "probe_kind": "quantum"},
        "setting": 1,
        "phi0": 0.25 * math.pi,
        "nu": 100,
        "sampling": False,
        "seed": 0,
    }
    parser = argparse.ArgumentParser(prog="spincorr estimate")
    _common_arguments(parser)
    _state_argument(parser)
    parser.add_argument("--setting", type=int)
    parser.add_argument("--phi0", type=float)
    parser.add_argument("--nu", type=int)
    parser.add_argument("--sampling", action="store_true", default=None)
    parser.add_argument("--seed", type=int)
    ns = parser.parse_args(argv)
    config = _effective_config(
        defaults,
        ns.config,
        {k: getattr(ns, k) for k in ("setting", "phi0", "nu", "sampling", "seed")},
    )
    rho = _build_state(_state_spec(config, ns))
    outcome = metrology.estimate(
        rho,
        metrology.h_setting(int(config["setting"])),
        config["phi0"],
        nu=int(config["nu"]),
        sampling=bool(config["sampling"]),
        seed=int(config["seed"]),
    )
    _emit_json(
        {
            "mean": outcome.mean,
            "variance": outcome.variance,
            "qfi": outcome.qfi,
            "n_shots": outcome.n_shots,
            "probabilities": list(outcome.probabilities),
        },
        ns.out,
    )
    return 0


def _cmd_suite(argv) -> int:
    defaults = {
        "p_grid": [0.25, 0.5, 0.75, 1.0],
        "kinds": ["quantum", "classical"],
        "settings": [1, 2, 3],
        "phi0": 0.25 * math.pi,
        "nu": 100,
        "on_pathological": "flag",
    }
    parser = argparse.ArgumentParser(prog="spincorr suite")
    _common_arguments(parser)
    parser.add_argument("--p-grid", dest="p_grid", nargs="+", type=float)
    parser.add_argument("--kinds", nargs="+")
    parser.add_argument("--settings", nargs="+", type=int)
    parser.add_argument("--phi0", type=float)
    parser.add_argument("--nu", type=int)
    parser.add_argument("--on-pathological", dest="on_pathological", choices=("flag", "raise"))
    ns = parser.parse_args(argv)
    config = _effective_config(
        defaults, ns.config, {k: getattr(ns, k) for k in defaults if hasattr(ns, k)}
    )
    rows = metrology.blackbox_suite(
        config["p_grid"],
        kinds=tuple(config["kinds"]),
        settings=tuple(config["settings"]),
        phi0=config["phi0"],
        nu=int(config["nu"]),
        on_pathological=config["on_pathological"],
    )
    table = [
        (r.p, r.kind, r.setting, r.qfi, r.ip, r.mean, r.variance, r.pathological)
        for r in rows
    ]
    text = _csv_text(
        ("p", "kind", "setting", "qfi", "ip", "mean", "variance", "pathological"),
        table,
        config,
    )
    flagged = sum(1 for r in rows if r.pathological)
    _emit_text(text, ns.out, summary=[f"{len(rows)} rows, {flagged} pathological"])
    return 0


def _cmd_figures(argv) -> int:
    parser = argparse.ArgumentParser(prog="spincorr figures")
    parser.add_argument("--outdir", default="figures")
    ns = parser.parse_args(argv)
    written = reproduce_figures(ns.outdir)
    for path in written:
        print(path)
    return 0


# ---------------------------------------------------------------------------
# Figure data

def reproduce_figures(outdir: str):
    """Regenerate the CSV tables behind the standard plots, deterministically."""
    os.makedirs(outdir, exist_ok=True)
    written = []

    def emit(name, columns, rows, config):
        path = os.path.join(outdir, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(_csv_text(columns, rows, config))
        written.append(path)

    # entropic correlations of three dephasing trajectories, against the
    # per-qubit dephasing probability p = 1 - exp(-gamma t)
    panels = (
        ("a", (1.0, -0.6, 0.6)),
        ("b", (1.0, 0.7, -0.7)),
        ("c", (0.49, 0.20, 0.067)),
    )
    quants = ("mutual", "entropic_classical", "entropic_discord", "discord_luo")
    for tag, c0 in panels:
        config = {"c0": list(c0), "gamma": 1.0, "p_max": 0.96, "n_points": 121}
        p = np.linspace(0.0, config["p_max"], config["n_points"])
        times = -np.log1p(-p)
        traj = dynamics.evolve_bd_pd(c0, 1.0, times, quantifiers=quants)
        rows = [
            [p[k], times[k]] + [traj.series[q][k] for q in quants]
            for k in range(len(p))
        ]
        emit(f"pd_decoh_{tag}.csv", ("p", "t") + quants, rows, config)

    # geometric quantifiers under dephasing: two slope kinks in the discord,
    # one in its classical counterpart
    config = {"c0": [0.49, 0.20, 0.067], "gamma": 1.0, "t_max": 2.5, "n_points": 200}
    times = np.linspace(0.0, config["t_max"], config["n_points"])
    traj = dynamics.evolve_bd_pd(
        config["c0"], 1.0, times, quantifiers=("discord_trace", "classical_geo")
    )
    rows = [
        (
            times[k],
            *traj.triples[k],
            traj.series["discord_trace"][k],
            traj.series["classical_geo"][k],
        )
        for k in range(len(times))
    ]
    emit(
        "dsc12.csv",
        ("t", "c1", "c2", "c3", "discord_trace", "classical_geo"),
        rows,
        config,
    )

    # same quantifiers under amplitude damping at infinite temperature
    config = {
        "c0": [0.08, 0.14, 0.16],
        "t1": 1.0,
        "alpha": 0.0,
        "t_max": 2.0,
        "n_points": 200,
    }
    times = np.linspace(0.0, config["t_max"], config["n_points"])
    rho0 = states.bell_diagonal(config["c0"])

    def channel_of(t):
        params = channels.GadParams.from_time(t, config["t1"], config["alpha"])
        ch = channels.gad_channel(params)
        return [ch, ch]

    traj = dynamics.evolve_general(
        rho0,
        channel_of,
        times,
        quantifiers=("discord_trace", "classical_geo"),
    )
    rows = [
        (
            times[k],
            *traj.triples[k],
            traj.series["discord_trace"][k],
            traj.series["classical_geo"][k],
        )
        for k in range(len(times))
    ]
    emit(
        "dsc32.csv",
        ("t", "c1", "c2", "c3", "discord_trace", "classical_geo"),
        rows,
        config,
    )

    # four discord measures frozen on the same plateau
    config = {
        "c0": [1.0, 0.7, -0.7],
        "gamma": 1.0,
        "n_points": 41,
        "rel_tol": 2e-7,
    }
    report = dynamics.verify_freezing(
        config["c0"], config["gamma"], n_points=config["n_points"], rel_tol=config["rel_tol"]
    )
    columns = ("t",) + dynamics.FREEZING_QUANTIFIERS
    rows = [
        [report.times[k]] + [report.series[q][k] for q in dynamics.FREEZING_QUANTIFIERS]
        for k in range(len(report.times))
    ]
    emit("universal_discord.csv", columns, rows, config)

    # multipartite discord: odd n decays, even n freezes
    config = {
        "entries": {"3": [0.7, 0.3, -0.3], "4": [1.0, 0.7, 0.7]},
        "gamma": 1.0,
        "n_points": 25,
        "window_fraction": 0.9,
    }
    scan = dynamics.gqd_parity_scan(
        {int(k): v for k, v in config["entries"].items()},
        gamma=config["gamma"],
        n_points=config["n_points"],
        window_fraction=config["window_fraction"],
    )
    rows = []
    for n in sorted(scan):
        rows.extend((n, t, v) for t, v in zip(scan[n].times, scan[n].values))
    emit("gqd34qb.csv", ("n", "t", "gqd"), rows, config)

    # black-box estimation table
    config = {
        "p_grid": [0.25, 0.5, 0.75, 1.0],
        "kinds": ["quantum", "classical"],
        "settings": [1, 2, 3],
        "phi0": 0.25 * math.pi,
        "nu": 100,
        "on_pathological": "flag",
    }
    suite_rows = metrology.blackbox_suite(
        config["p_grid"],
        kinds=tuple(config["kinds"]),
        settings=tuple(config["settings"]),
        phi0=config["phi0"],
        nu=config["nu"],
        on_pathological=config["on_pathological"],
    )
    rows = [
        (r.p, r.kind, r.setting, r.qfi, r.ip, r.mean, r.variance, r.pathological)
        for r in suite_rows
    ]
    emit(
        "ip_results.csv",
        ("p", "kind", "setting", "qfi", "ip", "mean", "variance", "pathological"),
        rows,
        config,
    )
    return written


# ---------------------------------------------------------------------------
# Dispatch

_COMMANDS = {
    "bloch": _cmd_bloch,
    "work": _cmd_work,
    "state": _cmd_state,
    "channel": _cmd_channel,
    "discord": _cmd_discord,
    "dynamics": _cmd_dynamics,
    "freeze": _cmd_freeze,
    "gqd": _cmd_gqd,
    "ip": _cmd_ip,
    "estimate": _cmd_estimate,
    "suite": _cmd_suite,
    "figures": _cmd_figures,
}

_USAGE = "usage: spincorr <command> [options]\ncommands: " + " ".join(sorted(_COMMANDS))


def run(argv=None) -> int:
    args = list(sys.argv[1:]) if argv is None else list(argv)
    if not args or args[0] in ("-h", "--help"):
        stream = sys.stdout if args else sys.stderr
        print(_USAGE, file=stream)
        return 0 if args else UNKNOWN_COMMAND_EXIT
    command, rest = args[0], args[1:]
    if command not in _COMMANDS:
        print(f"error: unknown command {command!r}", file=sys.stderr)
        print(_USAGE, file=sys.stderr)
        return UNKNOWN_COMMAND_EXIT
    try:
        return _COMMANDS[command](rest)
    except SystemExit as exc:  # argparse uses 2 for bad flags, 0 for --help
        code = exc.code
        return int(code) if code is not None else 0
    except (
        states.UnphysicalStateError,
        channels.ChannelError,
        bloch.SingularRelaxationError,
        metrology.PathologicalSetting,
        np.linalg.LinAlgError,
        RuntimeError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NUMERICAL_EXIT
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_EXIT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
