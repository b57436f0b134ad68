"""Experiment orchestration and result persistence.

Each experiment kind wires the catalogs, grid, and data into one or more
solver runs and reduces the outcome to a RunSummary:

    zero-perturbation   exact background, zero data; the run must stay at
                        roundoff level
    stability           epsilon-normalized data; reports the bootstrap
                        quantity sup_t (E_total + SE_total) / epsilon^2
    amplification       transverse pulse crossing the wave; detects passage
                        by the energy centroid and measures the plateau
    violation           the same data on a product-condition-violating F
                        and on a compliant twin
    boost-equivalence   the same run executed directly and in the boosted
                        frame found by the coefficient search, mapped back
    convergence         nested-grid order study
    sweep               one parameter varied across a run list, with a
                        hyperbolicity gate that flags rows instead of
                        invoking the solver

Artifacts per run: config echo (TOML), per-step energy CSV, summary JSON
(wall time deliberately excluded so outputs are bit-reproducible), and SVG
plots.  All floats serialize via repr, so identical inputs give identical
bytes.
"""

from __future__ import annotations

import copy
import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .config import ExperimentConfig, dump_config
from .energy import EnergyConfig, initial_smallness
from .errors import ConfigError
from .geometry import bracket, d1
from .plots import emit_plots
from .profiles import builtin_profile, decay_report
from .solver import Termination, convergence_study, run
from .systems import (
    boost_grid,
    builtin_system,
    find_boost,
    hyperbolicity_margin,
)

__all__ = [
    "RunSummary",
    "run_experiment",
    "run_sweep",
    "write_energy_csv",
    "summary_to_dict",
]

CSV_HEADER = (
    "t", "Ebar1", "Ehat1", "Ebar2", "Ehat2", "Ebar3", "Ehat3", "Etilde3",
    "E_total", "SE_total", "max_abs_u",
)

SWEEP_HEADER = (
    "index", "value", "termination", "epsilon", "sup_E_total",
    "final_SE_total", "ratio", "hyperbolicity_lam", "max_abs_u", "ok",
)

ZERO_RUN_TOL = 1e-8
BOOST_DIFF_TOL = 1e-4
PLATEAU_SPAN = 20.0
PLATEAU_FLATNESS_TOL = 0.01


@dataclass
class RunSummary:
    """Reduced outcome of one experiment.

    ``ratio`` is sup_t (E_total + SE_total) / epsilon^2, reported only when
    the measured initial smallness is positive.  ``wall_time_s`` stays on
    the object but is excluded from JSON output for reproducibility.
    """

    kind: str
    label: str
    termination: str
    blowup_time: float | None
    epsilon: float
    sup_E_total: float
    final_E_total: float
    final_SE_total: float
    sup_bootstrap: float
    ratio: float | None
    hyperbolicity_lam: float | None
    boost: float
    M0: float
    M1: float
    delta: float
    max_abs_u: float
    n_steps: int
    structure_satisfied: bool
    sup_weighted_gradient: float
    ok: bool
    extras: dict = field(default_factory=dict)
    wall_time_s: float = 0.0


def _pyify(obj):
    if isinstance(obj, dict):
        return {str(k): _pyify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_pyify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_pyify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def summary_to_dict(summary: RunSummary) -> dict:
    out = {}
    for key, val in vars(summary).items():
        if key == "wall_time_s":
            continue
        out[key] = _pyify(val)
    return out


def write_summary_json(summary: RunSummary, path):
    text = json.dumps(summary_to_dict(summary), sort_keys=True, indent=2)
    Path(path).write_text(text + "\n")


def write_energy_csv(traj, path):
    """One row per retained report, with the fixed versioned header."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for report, m in zip(traj.reports, traj.max_abs_u):
            writer.writerow(
                [repr(float(report.t))]
                + [
                    repr(float(getattr(report, name)))
                    for name in CSV_HEADER[1:-1]
                ]
                + [repr(float(m))]
            )


# ---------------------------------------------------------------------------
# catalog wiring
# ---------------------------------------------------------------------------


def build_system(cfg: ExperimentConfig):
    try:
        return builtin_system(cfg.system_name, **cfg.system_params)
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc


def build_profile(cfg: ExperimentConfig, system):
    n = cfg.n_components if cfg.n_components is not None else system.n
    if n != system.n:
        raise ConfigError(
            f"profile has {n} components but system {cfg.system_name!r} "
            f"has {system.n}"
        )
    kwargs = {"amplitude": cfg.amplitude, "n": n}
    if cfg.radius is not None:
        kwargs["radius"] = cfg.radius
    try:
        return builtin_profile(cfg.profile_name, **kwargs)
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc


def _l_max(cfg: ExperimentConfig, system) -> int:
    if cfg.l_max is not None:
        return cfg.l_max
    return 1 if system.semilinear else 2


def build_data(cfg: ExperimentConfig, system, grid):
    """Initial-data callables (u0, u1) plus the measured smallness.

    When [data].epsilon is set the amplitude is rescaled so that
    initial_smallness of the sampled data equals it (smallness is homogeneous
    of degree one in the amplitude).
    """
    n = system.n
    comp = int(cfg.data["component"])
    if not 0 <= comp < n:
        raise ConfigError(f"[data].component must lie in [0, {n})")
    amp = float(cfg.data["amplitude"])
    center = float(cfg.data["center"])
    width = float(cfg.data["width"])
    eps_target = cfg.data.get("epsilon")
    kind = cfg.data_kind

    if kind == "standing-wave" and grid.bc != "periodic":
        raise ConfigError("standing-wave data requires a periodic grid")
    if kind == "zero" and eps_target:
        raise ConfigError("zero data cannot be scaled to a positive epsilon")

    def place(vals, a):
        def fn(x):
            out = np.zeros((np.asarray(x).size, n))
            out[:, comp] = a * vals(np.asarray(x, dtype=float))
            return out

        return fn

    def g(y):
        return np.exp(-(((y - center) / width) ** 2))

    def gp(y):
        return -2.0 * (y - center) / width ** 2 * g(y)

    def make(a):
        if kind == "zero":
            return place(lambda x: np.zeros_like(x), 0.0), place(
                lambda x: np.zeros_like(x), 0.0
            )
        if kind == "bump":
            return place(g, a), place(lambda x: np.zeros_like(x), 0.0)
        if kind == "eta-pulse":
            return place(lambda x: g(-x / 2.0), a), place(
                lambda x: 0.5 * gp(-x / 2.0), a
            )
        if kind == "xi-pulse":
            return place(lambda x: g(x / 2.0), a), place(
                lambda x: 0.5 * gp(x / 2.0), a
            )
        # standing-wave: u0 = a cos(k x), u1 = 0, k = 2 pi / width
        k = 2.0 * math.pi / width
        return place(lambda x: np.cos(k * x), a), place(
            lambda x: np.zeros_like(x), 0.0
        )

    lmax = _l_max(cfg, system)
    u0_fn, u1_fn = make(amp)
    x = grid.x
    eps = initial_smallness(u0_fn(x), u1_fn(x), cfg.delta, lmax, grid)
    if eps_target is not None:
        if eps <= 0:
            raise ConfigError("cannot normalize data with zero smallness")
        amp *= float(eps_target) / eps
        u0_fn, u1_fn = make(amp)
        eps = initial_smallness(u0_fn(x), u1_fn(x), cfg.delta, lmax, grid)
    return u0_fn, u1_fn, float(eps)


# ---------------------------------------------------------------------------
# summary assembly
# ---------------------------------------------------------------------------


def _xi_probe(grid):
    return np.linspace(0.5 * grid.x_min, 0.5 * (grid.x_max + grid.t_end), 2001)


def _summarize(cfg, system, profile, traj, eps, ok, extras) -> RunSummary:
    dr = decay_report(profile, cfg.delta)
    hyp = traj.diagnostics.get("hyperbolicity") if traj is not None else None
    if hyp is None:
        hyp = hyperbolicity_margin(system, profile, _xi_probe(cfg.grid))
    structure = traj.diagnostics.get("structure") if traj is not None else None
    if traj is not None and traj.reports:
        sup_e = max(r.E_total for r in traj.reports)
        sup_boot = max(r.E_total + r.SE_total for r in traj.reports)
        final_e = traj.reports[-1].E_total
        final_se = traj.reports[-1].SE_total
    else:
        sup_e = sup_boot = final_e = final_se = 0.0
    return RunSummary(
        kind=cfg.kind,
        label=cfg.label,
        termination=(
            traj.termination.value if traj is not None else Termination.REACHED_T_END.value
        ),
        blowup_time=traj.blowup_time if traj is not None else None,
        epsilon=float(eps),
        sup_E_total=float(sup_e),
        final_E_total=float(final_e),
        final_SE_total=float(final_se),
        sup_bootstrap=float(sup_boot),
        ratio=(float(sup_boot / eps ** 2) if eps > 0 else None),
        hyperbolicity_lam=float(hyp.lam),
        boost=float(traj.diagnostics.get("boost", 0.0)) if traj is not None else 0.0,
        M0=float(dr.M0),
        M1=float(dr.M1),
        delta=float(cfg.delta),
        max_abs_u=float(np.max(traj.max_abs_u)) if traj is not None else 0.0,
        n_steps=int(traj.diagnostics.get("n_steps", 0)) if traj is not None else 0,
        structure_satisfied=bool(structure.satisfied) if structure else True,
        sup_weighted_gradient=(
            float(traj.diagnostics.get("sup_weighted_gradient", 0.0))
            if traj is not None else 0.0
        ),
        ok=bool(ok),
        extras=_pyify(extras),
        wall_time_s=(
            float(traj.diagnostics.get("wall_time_s", 0.0)) if traj is not None else 0.0
        ),
    )


def _energy_config(cfg: ExperimentConfig) -> EnergyConfig:
    return EnergyConfig(delta=cfg.delta, row_stride=cfg.row_stride, track=cfg.track)


def _single_run(cfg, system, profile, *, allow_violation=False, boost=0.0,
                grid=None, snapshot_stride=None):
    grid = grid if grid is not None else cfg.grid
    u0, u1, eps = build_data(cfg, system, grid)
    traj = run(
        system, profile, grid, (u0, u1), _energy_config(cfg),
        boost=boost, allow_violation=allow_violation,
        snapshot_stride=snapshot_stride,
    )
    return traj, eps


# ---------------------------------------------------------------------------
# experiment handlers
# ---------------------------------------------------------------------------


def _exp_zero(cfg, system, profile, out_dir):
    traj, eps = _single_run(cfg, system, profile)
    ok = (
        traj.termination == Termination.REACHED_T_END
        and float(np.max(traj.max_abs_u)) <= ZERO_RUN_TOL
    )
    extras = {"max_u_threshold": ZERO_RUN_TOL}
    return _summarize(cfg, system, profile, traj, eps, ok, extras), traj


def _exp_stability(cfg, system, profile, out_dir):
    traj, eps = _single_run(cfg, system, profile)
    ok = traj.termination == Termination.REACHED_T_END
    return _summarize(cfg, system, profile, traj, eps, ok, {}), traj


def _eta_centroid(grid, t, u, w, delta):
    """xi centroid of the <eta>-weighted |u_eta|^2 density on a slice."""
    x = grid.x
    u_x = d1(u, grid.h, grid.bc)
    u_eta = w - u_x
    dens = bracket(0.5 * (t - x)) ** (2.0 + 2.0 * delta) * np.sum(
        u_eta * u_eta, axis=-1
    )
    total = float(np.trapezoid(dens, x))
    if total <= 0.0:
        return None
    return float(np.trapezoid(0.5 * (t + x) * dens, x) / total)


def _exp_amplification(cfg, system, profile, out_dir):
    grid = cfg.grid
    dt_est = grid.dt if grid.dt is not None else grid.cfl * grid.h
    stride = max(1, int(round(1.0 / dt_est)))
    traj, eps = _single_run(cfg, system, profile, snapshot_stride=stride)

    hint = profile.support_hint or (-30.0, 30.0)
    margin = cfg.extras.get("amplification", {}).get("window_margin", 5.0)
    gate = hint[1] + margin
    passage = None
    for t, u, w in traj.snapshots:
        cen = _eta_centroid(grid, t, u, w, cfg.delta)
        if cen is not None and cen > gate:
            passage = float(t)
            break

    extras = {
        "window_margin": margin,
        "passage_gate_xi": gate,
        "passage_time": passage,
        "plateau_span": PLATEAU_SPAN,
    }
    ok = traj.termination == Termination.REACHED_T_END and passage is not None
    if passage is not None and traj.reports:
        ts = np.array([r.t for r in traj.reports])
        vals = np.array([r.E_total for r in traj.reports])
        mask = (ts >= passage) & (ts <= passage + PLATEAU_SPAN)
        covered = ts[-1] >= passage + PLATEAU_SPAN - 1e-9
        if covered and np.any(mask):
            window = vals[mask]
            mean = float(np.mean(window))
            flat = float((window.max() - window.min()) / mean) if mean > 0 else 0.0
            extras.update(
                plateau_mean=mean,
                plateau_flatness=flat,
                E_before=float(vals[0]),
                E_during=float(vals.max()),
                E_after=mean,
            )
            ok = ok and flat <= PLATEAU_FLATNESS_TOL
        else:
            extras["plateau_mean"] = None
            ok = False
        base = traj.reports[0].Ebar1
        if base > 0:
            extras["measured_factor"] = float(
                math.sqrt(traj.reports[-1].Ebar1 / base)
            )
        xi_dense = np.linspace(hint[0] - 10.0, hint[1] + 10.0, 20001)
        fp = np.asarray(profile.f1(xi_dense), dtype=float)
        if fp.ndim == 1:
            fp = fp[:, None]
        extras["predicted_factor"] = float(
            math.exp(np.trapezoid(fp[:, cfg.data["component"]], xi_dense))
        )
    else:
        ok = False
    return _summarize(cfg, system, profile, traj, eps, ok, extras), traj


def _exp_violation(cfg, system, profile, out_dir):
    table = cfg.extras.get("violation", {})
    compliant_name = table.get("compliant_system", "semilinear-bilinear")
    t_cap = table.get("t_cap")
    grid_v = cfg.grid if t_cap is None else cfg.grid.replace(t_end=float(t_cap))

    u0, u1, eps = build_data(cfg, system, cfg.grid)
    traj_v = run(
        system, profile, grid_v, (u0, u1), _energy_config(cfg),
        allow_violation=True,
    )
    compliant = builtin_system(compliant_name)
    if compliant.n != system.n:
        raise ConfigError("compliant system must have the same size")
    traj_c = run(compliant, profile, cfg.grid, (u0, u1), _energy_config(cfg))

    ok = (
        traj_v.termination == Termination.BLOWUP
        and traj_c.termination == Termination.REACHED_T_END
    )
    structure_v = traj_v.diagnostics.get("structure")
    extras = {
        "violating_termination": traj_v.termination.value,
        "violating_blowup_time": traj_v.blowup_time,
        "compliant_system": compliant_name,
        "compliant_termination": traj_c.termination.value,
        "compliant_sup_E_total": max(
            (r.E_total for r in traj_c.reports), default=0.0
        ),
        "violating_f_order": structure_v.f.fitted_order if structure_v else None,
    }
    if out_dir is not None and traj_c.reports:
        write_energy_csv(traj_c, Path(out_dir) / "energy_compliant.csv")
    summary = _summarize(cfg, system, profile, traj_v, eps, ok, extras)
    return summary, traj_v


def _exp_boost(cfg, system, profile, out_dir):
    if system.semilinear:
        raise ConfigError("boost-equivalence expects a quasilinear system")
    margin = cfg.extras.get("boost", {}).get("margin", 0.01)
    probe = _xi_probe(cfg.grid)
    c = find_boost(system, profile, probe, margin=margin)

    fp = np.asarray(profile.f1(probe), dtype=float)
    if fp.ndim == 1:
        fp = fp[:, None]
    zeros = np.zeros_like(fp)
    eye = np.eye(system.n)
    m = eye - np.asarray(system.A1(fp, zeros)) + np.asarray(system.A2(fp, zeros))
    untransformed_min = float(np.linalg.eigvalsh(m).min())

    u0, u1, eps = build_data(cfg, system, cfg.grid)
    traj_d = run(system, profile, cfg.grid, (u0, u1), _energy_config(cfg))
    bgrid, bmap = boost_grid(cfg.grid, c)
    traj_b = run(system, profile, bgrid, (u0, u1), _energy_config(cfg), boost=c)

    extras = {
        "boost_c": c,
        "margin": margin,
        "untransformed_min_eig": untransformed_min,
        "direct_termination": traj_d.termination.value,
        "boosted_termination": traj_b.termination.value,
        "diff_tolerance": BOOST_DIFF_TOL,
    }
    ok = (
        traj_d.termination == Termination.REACHED_T_END
        and traj_b.termination == Termination.REACHED_T_END
    )
    if ok:
        t_cmp = cfg.grid.t_end
        x = cfg.grid.x
        _, x_bar = bmap.to_bar(t_cmp, x)
        u_direct = traj_d.final_state.u
        u_bar = traj_b.final_state.u
        diffs = []
        for k in range(system.n):
            spline = CubicSpline(bgrid.x, u_bar[:, k])
            diffs.append(np.abs(u_direct[:, k] - spline(x_bar)))
        diff_sup = float(np.max(diffs))
        extras["diff_sup"] = diff_sup
        extras["compare_time"] = t_cmp
        ok = diff_sup <= BOOST_DIFF_TOL
    summary = _summarize(cfg, system, profile, traj_d, eps, ok, extras)
    summary.boost = c
    if out_dir is not None and traj_b.reports:
        write_energy_csv(traj_b, Path(out_dir) / "energy_boosted.csv")
    return summary, traj_d


def _exp_convergence(cfg, system, profile, out_dir):
    table = cfg.extras.get("convergence", {})
    levels = int(table.get("levels", 4))
    exact_name = table.get("exact", "none")
    base = cfg.grid
    grids = []
    for k in range(levels):
        nx = (base.nx - 1) * 2 ** k + 1 if base.bc == "compact" else base.nx * 2 ** k
        grids.append(base.replace(nx=nx))

    u0, u1, eps = build_data(cfg, system, base)

    exact = None
    if exact_name == "standing-wave":
        if cfg.data_kind != "standing-wave":
            raise ConfigError("exact standing-wave needs standing-wave data")
        amp = cfg.data["amplitude"]
        k_wave = 2.0 * math.pi / cfg.data["width"]
        comp = int(cfg.data["component"])
        n = system.n

        def exact(t, x):
            out = np.zeros((np.asarray(x).size, n))
            out[:, comp] = amp * np.cos(k_wave * np.asarray(x)) * math.cos(
                k_wave * t
            )
            return out

    elif exact_name != "none":
        raise ConfigError(f"unknown exact solution {exact_name!r}")

    report = convergence_study(system, profile, (u0, u1), grids, exact=exact)
    extras = {
        "hs": report.hs,
        "dts": report.dts,
        "errors": report.errors,
        "orders": report.orders,
        "order": report.order,
        "mean_order": report.mean_order,
        "against": report.against,
        "levels": levels,
    }
    if out_dir is not None:
        with open(Path(out_dir) / "convergence.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(("level", "h", "dt", "error"))
            errs = list(report.errors)
            if report.against == "self":
                errs = errs + [float("nan")]
            for k, (h, dt) in enumerate(zip(report.hs, report.dts)):
                writer.writerow([k, repr(h), repr(dt), repr(errs[k])])
    summary = _summarize(cfg, system, profile, None, eps, True, extras)
    return summary, None


_HANDLERS = {
    "zero-perturbation": _exp_zero,
    "stability": _exp_stability,
    "amplification": _exp_amplification,
    "violation": _exp_violation,
    "boost-equivalence": _exp_boost,
    "convergence": _exp_convergence,
}


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def run_experiment(cfg: ExperimentConfig, out_dir=None, quiet: bool = True) -> RunSummary:
    """Execute one experiment; optionally persist artifacts under out_dir."""
    if cfg.kind == "sweep":
        rows = run_sweep(cfg, out_dir=out_dir, quiet=quiet)
        flagged = [r for r in rows if r.extras.get("hypothesis_violation")]
        ok = all(r.ok or r.extras.get("hypothesis_violation") for r in rows)
        system = build_system(cfg)
        profile = build_profile(cfg, system)
        extras = {
            "parameter": cfg.extras["sweep"]["parameter"],
            "values": cfg.extras["sweep"]["values"],
            "rows_ok": sum(1 for r in rows if r.ok),
            "rows_flagged": len(flagged),
            "rows_total": len(rows),
        }
        summary = _summarize(cfg, system, profile, None, 0.0, ok, extras)
        if out_dir is not None:
            _ensure_dir(out_dir)
            (Path(out_dir) / "config.toml").write_text(dump_config(cfg))
            write_summary_json(summary, Path(out_dir) / "summary.json")
        return summary

    handler = _HANDLERS.get(cfg.kind)
    if handler is None:
        raise ConfigError(f"unknown experiment kind {cfg.kind!r}")
    system = build_system(cfg)
    profile = build_profile(cfg, system)
    if out_dir is not None:
        _ensure_dir(out_dir)
    summary, traj = handler(cfg, system, profile, out_dir)
    if out_dir is not None:
        out = Path(out_dir)
        (out / "config.toml").write_text(dump_config(cfg))
        write_summary_json(summary, out / "summary.json")
        if traj is not None:
            if traj.reports:
                write_energy_csv(traj, out / "energy.csv")
            emit_plots(traj, out)
    if not quiet:
        print(
            f"[{cfg.kind}] termination={summary.termination} "
            f"eps={summary.epsilon:.3e} supE={summary.sup_E_total:.3e} "
            f"ok={summary.ok}"
        )
    return summary


def _ensure_dir(path):
    Path(path).mkdir(parents=True, exist_ok=True)


def _apply_parameter(cfg: ExperimentConfig, param: str, value: float,
                     base_kind: str, index: int) -> ExperimentConfig:
    sub = copy.deepcopy(cfg)
    sub.kind = base_kind
    sub.extras = {}
    sub.label = f"{cfg.label or 'sweep'}-{index:03d}"
    if param == "data.epsilon":
        sub.data["epsilon"] = float(value)
    elif param == "data.amplitude":
        sub.data["amplitude"] = float(value)
        sub.data["epsilon"] = None
    elif param == "profile.amplitude":
        sub.amplitude = float(value)
    else:
        raise ConfigError(
            "sweep parameter must be data.epsilon, data.amplitude, "
            "or profile.amplitude"
        )
    return sub


def run_sweep(cfg: ExperimentConfig, out_dir=None, quiet: bool = True):
    """Run the parameter list sequentially; returns one RunSummary per value.

    Rows whose background fails the hyperbolicity condition are flagged
    (termination "HypothesisViolation") and the solver is not invoked.
    """
    if "sweep" not in cfg.extras:
        raise ConfigError("sweep experiment needs a [sweep] table")
    table = cfg.extras["sweep"]
    param = table["parameter"]
    values = table["values"]
    base_kind = table.get("base_kind", "stability")
    if base_kind not in _HANDLERS:
        raise ConfigError(f"sweep base_kind {base_kind!r} is not runnable")

    rows = []
    for k, value in enumerate(values):
        sub = _apply_parameter(cfg, param, value, base_kind, k)
        system = build_system(sub)
        profile = build_profile(sub, system)
        hyp = hyperbolicity_margin(system, profile, _xi_probe(sub.grid))
        if not system.semilinear and hyp.lam <= 0.0:
            summary = _summarize(
                sub, system, profile, None, 0.0, False,
                {"hypothesis_violation": True, "swept_value": value},
            )
            summary.termination = "HypothesisViolation"
            summary.hyperbolicity_lam = float(hyp.lam)
            rows.append(summary)
            if not quiet:
                print(f"[sweep {k}] value={value} flagged: lam={hyp.lam:.3e}")
            continue
        sub_out = None
        if out_dir is not None:
            sub_out = Path(out_dir) / f"run-{k:03d}"
        summary = run_experiment(sub, out_dir=sub_out, quiet=quiet)
        summary.extras["swept_value"] = value
        rows.append(summary)

    if out_dir is not None:
        _ensure_dir(out_dir)
        with open(Path(out_dir) / "sweep.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SWEEP_HEADER)
            for k, (value, row) in enumerate(zip(values, rows)):
                writer.writerow([
                    k, repr(float(value)), row.termination,
                    repr(row.epsilon), repr(row.sup_E_total),
                    repr(row.final_SE_total),
                    "" if row.ratio is None else repr(row.ratio),
                    "" if row.hyperbolicity_lam is None else repr(row.hyperbolicity_lam),
                    repr(row.max_abs_u), row.ok,
                ])
    return rows
