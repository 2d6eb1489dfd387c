"""Named figure scenarios: default parameters, execution and summary metrics."""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np
from scipy import signal

from . import analytic, classical
from .dynamics import STEP_FRACTION, TrajectoryResult, evolve, sample_trajectories
from .model import ArraySpec, StateVector, build_cascade
from .output import Table
from .raman import Pulse, RamanSpec, build_raman_cascade, ground_state
from .spectra import find_peaks_1d, spectrum_grid

DEFAULT_FILTER = {
    "gamma": 0.25,
    "delta_k": {"min": -15.0, "max": 15.0, "points": 601},
}


@dataclass
class ScenarioOutput:
    tables: dict[str, Table] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    defaults: dict
    run: Callable[[dict], ScenarioOutput]
    specs: Callable[[dict], list[tuple[str, Any]]]


REGISTRY: dict[str, Scenario] = {}


def register(name: str, description: str, defaults: dict, specs):
    def deco(fn):
        REGISTRY[name] = Scenario(name, description, defaults, fn, specs)
        return fn

    return deco


def deep_merge(base: dict, override: dict | None) -> dict:
    out = copy.deepcopy(base)
    for k, v in (override or {}).items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = deep_merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def auto_dt(max_rate: float, t_end: float, dt: float | None = None) -> float:
    if dt is not None:
        return float(dt)
    n = math.ceil(t_end * max_rate / STEP_FRACTION - 1e-9)
    return t_end / n


def delta_k_grid(cfg: dict) -> np.ndarray:
    d = cfg["filter"]["delta_k"]
    if isinstance(d, dict):
        return np.linspace(float(d["min"]), float(d["max"]), int(d["points"]))
    return np.asarray(d, dtype=float)


def chain_spec(case: dict, n_cavities: int | None = None) -> ArraySpec:
    n = int(n_cavities if n_cavities is not None else case.get("n_cavities", 1))
    return ArraySpec.chain(
        n,
        g=complex(case["g"]),
        delta=float(case["delta"]),
        kappa=case.get("kappa", 1.0),
        delta_empty=case.get("delta_empty"),
        tau_d=case.get("tau_d", 0.0),
    )


def run_chain(spec: ArraySpec, t_end: float, dt: float | None = None):
    ops = build_cascade(spec)
    step = auto_dt(ops.max_rate, t_end, dt)
    traj = evolve(ops, StateVector.excited_atom(spec.n_cavities), t_end, step)
    return ops, traj


def _stride(n: int, points: int | None) -> int:
    if not points:
        return 1
    return max(1, math.ceil((n - 1) / (points - 1)))


def populations_table(traj: TrajectoryResult, *, first: str = "P_e", points: int | None = 2001,
                      time_shift: float = 0.0) -> Table:
    p = traj.p_basis
    n_cav = p.shape[1] - 2
    header = ["t", first, "P_1cc", "P_1c"] + [f"P_cav{k}" for k in range(2, n_cav + 1)]
    header += ["P_fiber_right", "P_fiber_left"]
    s = slice(None, None, _stride(traj.times.size, points))
    cols = [traj.times[s] + time_shift] + [p[s, i] for i in range(p.shape[1])]
    cols += [traj.p_det_a[s], traj.p_det_b[s]]
    return Table(header, cols)


def spectrum_table(res) -> Table:
    dk, ts = np.meshgrid(res.delta_k_grid, res.times, indexing="xy")
    return Table(
        ["delta_k", "t", "N", "N_S"],
        [dk.ravel(), ts.ravel(), res.n_t.T.ravel(), res.n_s.T.ravel()],
    )


def rabi_period(times: np.ndarray, p_e: np.ndarray) -> float | None:
    """Spacing of the first two local minima of the atomic population."""
    minima, _ = signal.find_peaks(-p_e)
    if minima.size < 2:
        return None
    return float(times[minima[1]] - times[minima[0]])


def peak_summary(x, y, rel_height=0.05):
    peaks = find_peaks_1d(x, y, rel_height=rel_height)
    out = {"peaks": [{"delta_k": p, "height": h} for p, h in peaks]}
    if len(peaks) >= 2:
        top = sorted(peaks, key=lambda ph: -ph[1])[:2]
        lo, hi = sorted(top)
        out["peak_separation"] = hi[0] - lo[0]
        out["left_peak_height"] = lo[1]
        out["right_peak_height"] = hi[1]
    else:
        out["peak_separation"] = None
    return out


def _case_specs(cfg):
    p = cfg["params"]
    return [(f"params.cases[{i}]", case) for i, case in enumerate(p["cases"])]


def _spec_findings(prefix: str, build) -> list[tuple[str, str, str]]:
    try:
        build()
    except ValueError as exc:
        return [(prefix, str(exc), "error")]
    return []


# ---------------------------------------------------------------- fig 2


@register(
    "fig2-populations",
    "Atom-cavity source: populations and fibre click probabilities, strong and weak coupling",
    {
        "time": {"t_end": 40.0},
        "params": {
            "cases": [
                {"label": "strong", "g": 5.0, "delta": 0.5},
                {"label": "weak", "g": 0.25, "delta": 0.5},
            ],
            "mc_trajectories": 0,
        },
    },
    _case_specs,
)
def fig2(cfg: dict) -> ScenarioOutput:
    out = ScenarioOutput()
    t_end = float(cfg["time"]["t_end"])
    for case in cfg["params"]["cases"]:
        spec = chain_spec(case, 1)
        ops, traj = run_chain(spec, t_end, cfg["time"].get("dt"))
        label = case["label"]
        out.tables[f"populations_{label}"] = populations_table(traj, points=cfg["time"].get("output_points", 2001))
        g = abs(spec.g)
        s = {
            "g": g,
            "delta": spec.delta_atom,
            "dt": traj.dt,
            "P_fiber_right_final": traj.p_det_a[-1],
            "P_fiber_left_final": traj.p_det_b[-1],
            "max_conservation_defect": float(np.max(np.abs(traj.conservation_defect()))),
            "rabi_period": rabi_period(traj.times, traj.p_basis[:, 0]),
            "rabi_period_expected": 2 * np.pi / (2 * np.sqrt(2) * g) if g else None,
        }
        n_mc = int(cfg["params"].get("mc_trajectories", 0))
        if n_mc:
            mc = sample_trajectories(ops, StateVector.excited_atom(1), t_end, traj.dt, n_mc,
                                     int(cfg.get("seed", 0)), traj=traj)
            s["mc_fraction_right"] = mc.fraction_a
            s["mc_fraction_left"] = mc.fraction_b
        out.summary[label] = s
    return out


# ---------------------------------------------------------------- fig 3


def _fig3_specs(cfg):
    p = cfg["params"]
    return [(f"params.g_values[{i}]", {"g": g, "delta": p["delta"]}) for i, g in enumerate(p["g_values"])]


@register(
    "fig3-spectra",
    "Long-time synthesized spectrum of the atom-cavity source for several couplings",
    {
        "time": {"t_end": 40.0},
        "filter": {"sample_times": [40.0]},
        "params": {"delta": 0.5, "g_values": [2.0, 5.0, 10.0, 0.1, 0.25], "compare_stationary": True},
    },
    _fig3_specs,
)
def fig3(cfg: dict) -> ScenarioOutput:
    out = ScenarioOutput()
    t_end = float(cfg["time"]["t_end"])
    gamma = float(cfg["filter"]["gamma"])
    dks = delta_k_grid(cfg)
    for g in cfg["params"]["g_values"]:
        spec = chain_spec({"g": g, "delta": cfg["params"]["delta"]}, 1)
        ops, traj = run_chain(spec, t_end, cfg["time"].get("dt"))
        res = spectrum_grid(traj, ops, gamma, dks, cfg["filter"]["sample_times"])
        out.tables["spectrum_g" + f"{g:g}".replace(".", "p")] = spectrum_table(res)
        ns = res.n_s[:, -1]
        s = {"g": abs(spec.g), "t": float(res.times[-1])}
        s.update(peak_summary(dks, ns))
        s["peak_separation_expected"] = 2 * np.sqrt(2) * abs(spec.g)
        if cfg["params"].get("compare_stationary", True):
            printed = analytic.stationary_spectrum(dks, spec, gamma)
            s["relsup_vs_printed_stationary"] = float(np.max(np.abs(ns - printed)) / np.max(printed))
            exact = analytic.filtered_stationary_spectrum(dks, spec, gamma)
            s["relsup_vs_filtered_stationary"] = float(np.max(np.abs(ns - exact)) / np.max(exact))
        out.summary[f"g={g:g}"] = s
    return out


# ---------------------------------------------------------------- fig 5


@register(
    "fig5-two-cavity",
    "Source ring driving one empty ring: populations and the inter-cavity delay",
    {
        "time": {"t_end": 20.0},
        "params": {
            "cases": [
                {"label": "strong", "g": 5.0, "delta": 0.5, "delta_empty": 0.5},
                {"label": "weak", "g": 0.25, "delta": 0.5, "delta_empty": 0.5},
                {"label": "trap", "g": 5.0, "delta": 0.5, "delta_empty": 7.32},
            ]
        },
    },
    _case_specs,
)
def fig5(cfg: dict) -> ScenarioOutput:
    out = ScenarioOutput()
    t_end = float(cfg["time"]["t_end"])
    for case in cfg["params"]["cases"]:
        spec = chain_spec(case, 2)
        ops, traj = run_chain(spec, t_end, cfg["time"].get("dt"))
        p = traj.p_basis
        out.tables[f"populations_{case['label']}"] = populations_table(
            traj, points=cfg["time"].get("output_points", 2001))
        out.summary[case["label"]] = {
            "argmax_P_1cc": traj.times[np.argmax(p[:, 1])],
            "argmax_P_cav2": traj.times[np.argmax(p[:, 3])],
            "delay": traj.times[np.argmax(p[:, 3])] - traj.times[np.argmax(p[:, 1])],
            "P_fiber_right_final": traj.p_det_a[-1],
            "P_fiber_left_final": traj.p_det_b[-1],
        }
    return out


# ---------------------------------------------------------------- fig 6


def _single_case_specs(cfg):
    return [("params", cfg["params"])]


def hole_metrics(dks, n_s_two, n_s_one, times, delta2, left_peak):
    """Early-time depletion of the spectrum at the downstream ring's resonance."""
    i2 = int(np.argmin(np.abs(dks - delta2)))
    il = int(np.argmin(np.abs(dks - left_peak)))
    final = n_s_two[:, -1]
    return {
        "times": list(times),
        "right_fraction": list(n_s_two[i2] / final[i2]),
        "left_fraction": list(n_s_two[il] / final[il]),
        "right_vs_single_ring": list(n_s_two[i2] / n_s_one[i2]),
        "left_vs_single_ring": list(n_s_two[il] / n_s_one[il]),
    }


@register(
    "fig6-tds",
    "Time-dependent and synthesized spectra behind a ring tuned to the right Rabi peak",
    {
        "time": {"t_end": 40.0},
        "filter": {"sample_times": [1.8, 3.6, 5.5, 40.0]},
        "params": {"g": 5.0, "delta": 0.5, "delta_empty": 7.32},
    },
    _single_case_specs,
)
def fig6(cfg: dict) -> ScenarioOutput:
    out = ScenarioOutput()
    p = cfg["params"]
    t_end = float(cfg["time"]["t_end"])
    gamma = float(cfg["filter"]["gamma"])
    dks = delta_k_grid(cfg)
    times = cfg["filter"]["sample_times"]
    spec2 = chain_spec(p, 2)
    ops2, tr2 = run_chain(spec2, t_end, cfg["time"].get("dt"))
    res2 = spectrum_grid(tr2, ops2, gamma, dks, times)
    spec1 = chain_spec(p, 1)
    ops1, tr1 = run_chain(spec1, t_end, cfg["time"].get("dt"))
    res1 = spectrum_grid(tr1, ops1, gamma, dks, times)
    out.tables["spectrum"] = spectrum_table(res2)
    out.tables["spectrum_single_ring"] = spectrum_table(res1)
    left = analytic.laplace_solution(spec1).poles
    left_peak = min(-pole.imag for pole in left)
    out.summary["hole"] = hole_metrics(dks, res2.n_s, res1.n_s, res2.times, p["delta_empty"], left_peak)
    out.summary["peaks"] = {
        f"t={t:g}": peak_summary(dks, res2.n_s[:, j], rel_height=0.01)["peaks"]
        for j, t in enumerate(res2.times)
    }
    return out


# ---------------------------------------------------------------- fig 8


def _fig8_specs(cfg):
    p = cfg["params"]
    return [("params.populations", p["populations"]), ("params.spectra", p["spectra"])]


@register(
    "fig8-array",
    "Source ring driving up to four empty rings: trapping delays and hole burning",
    {
        "time": {"t_end": 60.0},
        "filter": {"sample_times": [6.0]},
        "params": {
            "populations": {"g": 0.25, "delta": 0.5, "delta_empty": -0.12, "n_cavities": 5},
            "spectra": {"g": 5.0, "delta": 0.5, "delta_empty": 7.32, "n_values": [2, 3, 4, 5]},
            "trap_threshold": 0.1,
        },
    },
    _fig8_specs,
)
def fig8(cfg: dict) -> ScenarioOutput:
    out = ScenarioOutput()
    p = cfg["params"]
    t_end = float(cfg["time"]["t_end"])
    pop = p["populations"]
    spec = chain_spec(pop, int(pop["n_cavities"]))
    _, traj = run_chain(spec, t_end, cfg["time"].get("dt"))
    out.tables["populations"] = populations_table(traj, points=cfg["time"].get("output_points", 2001))
    pb = traj.p_basis
    chain = [1] + list(range(3, pb.shape[1]))
    argmax = [float(traj.times[np.argmax(pb[:, i])]) for i in chain]
    norm2 = traj.norm2
    below = np.nonzero(norm2 < float(p["trap_threshold"]))[0]
    out.summary["populations"] = {
        "argmax_cavity": argmax,
        "sequential": bool(np.all(np.diff(argmax) > 0)),
        "in_array_at_15": float(norm2[traj.at(15.0)]) if traj.times[-1] >= 15 else None,
        "trap_time": float(traj.times[below[0]]) if below.size else None,
    }

    sp = p["spectra"]
    gamma = float(cfg["filter"]["gamma"])
    dks = delta_k_grid(cfg)
    t_spec = cfg["filter"]["sample_times"]
    i_res = int(np.argmin(np.abs(dks - float(sp["delta_empty"]))))
    right = dks > 0.5 * float(sp["delta_empty"])
    vals = {}
    for n in sp["n_values"]:
        s = chain_spec(sp, int(n))
        ops, tr = run_chain(s, max(t_spec), cfg["time"].get("dt_spectra"))
        res = spectrum_grid(tr, ops, gamma, dks, t_spec)
        out.tables[f"spectrum_n{n}"] = spectrum_table(res)
        ns = res.n_s[:, -1]
        vals[int(n)] = {
            "at_resonance": float(ns[i_res]),
            "right_peak_height": float(ns[right].max()),
            "right_area": float(np.trapezoid(ns[right], dks[right])),
        }
    out.summary["spectra"] = vals
    lo, hi = min(vals), max(vals)
    out.summary["ratio"] = {
        key: vals[hi][key] / vals[lo][key] for key in ("at_resonance", "right_peak_height", "right_area")
    }
    return out


# ---------------------------------------------------------------- Raman


def raman_spec(p: dict) -> RamanSpec:
    pulse = p["pulse"]
    n = int(p.get("n_empty", 1)) + 1
    dc = p["delta_c"]
    kap = p.get("kappa", 1.0)
    return RamanSpec(
        g=complex(p["g"]),
        delta_raman=float(p["delta_raman"]),
        delta_c=tuple(dc) if np.ndim(dc) else (float(dc),) * n,
        kappa=tuple(kap) if np.ndim(kap) else (float(kap),) * n,
        pulse=Pulse(
            omega0=float(pulse["omega0"]),
            tau_l=float(pulse.get("tau_l", 10.0)),
            t0=pulse.get("t0"),
            shape=pulse.get("shape", "gaussian"),
        ),
    )


def _raman_specs(cfg):
    return [("params", cfg["params"])]


def _run_raman_case(p: dict, cfg: dict, flip: bool = False):
    if flip:
        p = copy.deepcopy(p)
        p["delta_raman"] = -float(p["delta_raman"])
        p["delta_c"] = [-float(d) for d in np.atleast_1d(p["delta_c"])]
    spec = raman_spec(p)
    ops = build_raman_cascade(spec, int(p.get("n_empty", 1)), stark=bool(p.get("stark", True)))
    t_end = float(cfg["time"].get("t_end") or spec.pulse.t0 + 3 * spec.pulse.tau_l + 30.0)
    dt = auto_dt(max(ops.max_rate, 100.0 / spec.pulse.tau_l * STEP_FRACTION), t_end, cfg["time"].get("dt"))
    traj = evolve(ops, ground_state(ops.dim), t_end, dt)
    times = cfg["filter"].get("sample_times") or [t_end]
    res = spectrum_grid(traj, ops, float(cfg["filter"]["gamma"]), delta_k_grid(cfg), times)
    return spec, traj, res


def _raman_summary(spec, traj, res):
    ns = res.n_s[:, -1]
    return {
        "pulse_center": spec.pulse.t0,
        "dt": traj.dt,
        "total_detected": traj.p_det_a[-1] + traj.p_det_b[-1],
        "P_g_final": traj.p_basis[-1, 0],
        "max_conservation_defect": float(np.max(np.abs(traj.conservation_defect()))),
        "adiabaticity": spec.adiabaticity(),
        "warnings": spec.warnings(),
        **peak_summary(res.delta_k_grid, ns, rel_height=0.02),
    }


def _raman(cfg: dict) -> ScenarioOutput:
    out = ScenarioOutput()
    spec, traj, res = _run_raman_case(cfg["params"], cfg)
    out.tables["populations"] = populations_table(traj, first="P_g", points=cfg["time"].get("output_points", 2001))
    out.tables["spectrum"] = spectrum_table(res)
    out.summary["base"] = _raman_summary(spec, traj, res)
    if cfg["params"].get("check_flip", False):
        fspec, ftraj, fres = _run_raman_case(cfg["params"], cfg, flip=True)
        out.tables["spectrum_flipped"] = spectrum_table(fres)
        fs = _raman_summary(fspec, ftraj, fres)
        base = res.n_s[:, -1]
        mirrored = np.interp(-res.delta_k_grid, fres.delta_k_grid, fres.n_s[:, -1])
        fs["mirror_relsup"] = float(np.max(np.abs(base - mirrored)) / np.max(base))
        out.summary["flipped"] = fs
    return out


register(
    "fig10-raman-weak",
    "Raman source, weak coupling: ground-state depletion and synthesized spectra",
    {
        "time": {"t_end": 80.0},
        "filter": {"sample_times": [30.0, 40.0, 50.0, 80.0]},
        "params": {
            "g": 0.25, "delta_raman": 0.5, "delta_c": [0.25, 0.25], "kappa": 1.0, "n_empty": 1,
            "pulse": {"omega0": 0.25, "tau_l": 10.0},
        },
    },
    _raman_specs,
)(_raman)

register(
    "fig11-raman-strong",
    "Raman source, strong coupling: Stark-shifted doublet and its detuning-sign mirror",
    {
        "time": {"t_end": 30.0},
        "filter": {"sample_times": [30.0]},
        "params": {
            "g": 2.0, "delta_raman": 1.5, "delta_c": [0.25, 0.25], "kappa": 1.0, "n_empty": 1,
            "pulse": {"omega0": 3.0, "tau_l": 0.5},
            "check_flip": True,
        },
    },
    _raman_specs,
)(_raman)


# ---------------------------------------------------------------- classical


def _classical_specs(cfg):
    return [(f"params.r_values[{i}]", {"r": r}) for i, r in enumerate(cfg["params"]["r_values"])]


@register(
    "classical-correspondence",
    "Beam-splitter ring transfer function versus input-output theory near resonance",
    {
        "params": {"r_values": [0.5, 0.2, 0.1, 0.05, 0.025], "tau": 1.0, "points": 401, "table_r": 0.05},
    },
    _classical_specs,
)
def classical_scenario(cfg: dict) -> ScenarioOutput:
    out = ScenarioOutput()
    p = cfg["params"]
    tau = float(p["tau"])
    errors = {}
    for r in p["r_values"]:
        spec = classical.ClassicalRingSpec(r=float(r), tau=tau)
        grid = np.linspace(-spec.kappa, spec.kappa, int(p["points"]))
        errors[float(r)] = classical.correspondence_error(spec, grid)
    rs = sorted(errors)
    scaling = {
        f"{rs[i + 1]:g}/{rs[i]:g}": errors[rs[i + 1]] / errors[rs[i]]
        for i in range(len(rs) - 1)
        if errors[rs[i]] > 0 and np.isclose(rs[i + 1], 2 * rs[i])
    }
    spec = classical.ClassicalRingSpec(r=float(p["table_r"]), tau=tau)
    det = np.linspace(-spec.kappa, spec.kappa, int(p["points"]))
    c = classical.classical_transfer(spec, spec.phase(det + spec.omega_c))
    q = classical.inout_transfer(det + spec.omega_c, spec.omega_c, spec.kappa)
    out.tables["transfer"] = Table(
        ["detuning", "phi", "classical_re", "classical_im", "inout_re", "inout_im"],
        [det, det * tau, c.real, c.imag, q.real, q.imag],
    )
    out.summary = {"errors": {f"{r:g}": e for r, e in errors.items()}, "halving_ratios": scaling}
    return out


def build_checks(name: str, cfg: dict) -> list[tuple[str, str, str]]:
    """Field-level findings for a resolved scenario config (no simulation)."""
    findings = []
    scen = REGISTRY[name]
    for prefix, case in scen.specs(cfg):
        if name.startswith("fig10") or name.startswith("fig11"):
            findings += _spec_findings(prefix, lambda c=case: raman_spec(c))
            try:
                for w in raman_spec(case).warnings():
                    findings.append((prefix + ".pulse", w, "warning"))
            except (ValueError, KeyError, TypeError):
                pass
        elif name == "classical-correspondence":
            findings += _spec_findings(prefix, lambda c=case: classical.ClassicalRingSpec(r=float(c["r"])))
        else:
            kap = _kappa_findings(prefix, case)
            findings += kap
            n = int(case.get("n_cavities", 1))
            if name in ("fig5-two-cavity", "fig6-tds"):
                n = 2
            if not kap:
                findings += _spec_findings(prefix, lambda c=case, n=n: chain_spec(c, n))
    filt = cfg.get("filter", {})
    if "gamma" in filt and not float(filt["gamma"]) > 0:
        findings.append(("filter.gamma", f"filter width must be positive, got {filt['gamma']}", "error"))
    t = cfg.get("time", {})
    if t.get("t_end") is not None and not float(t["t_end"]) > 0:
        findings.append(("time.t_end", f"must be positive, got {t['t_end']}", "error"))
    if t.get("dt") is not None and not float(t["dt"]) > 0:
        findings.append(("time.dt", f"must be positive, got {t['dt']}", "error"))
    return findings


def _kappa_findings(prefix: str, case: dict) -> list[tuple[str, str, str]]:
    kap = case.get("kappa", 1.0)
    out = []
    for i, k in enumerate(np.atleast_1d(kap)):
        if not float(k) > 0:
            name = f"{prefix}.kappa" if np.ndim(kap) == 0 else f"{prefix}.kappa[{i}]"
            out.append((name, f"decay rate must be positive, got {k}", "error"))
    return out
