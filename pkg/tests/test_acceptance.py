"""End-to-end acceptance gate for the laboratory.

Eleven criteria, each with a stated tolerance and one printed
``[criterion NN] PASS/FAIL`` line. They exercise the full stack at real
experiment scale: exact-background transparency, the eps^2 bootstrap law,
scheme order, the weight and Fubini identities, the Gronwall verifier,
hyperbolicity gating, boost-frame equivalence, the product-condition
blowup contrast, amplification localization, and characteristic
separation.

Total runtime is a couple of minutes; the heavy criteria state their
measured walls in comments.
"""

import math
import time

import numpy as np
from scipy.integrate import quad

from wavestab.config import parse_config
from wavestab.energy import EnergyConfig, gronwall_verify, make_weights
from wavestab.experiments import run_experiment, run_sweep
from wavestab.geometry import bracket, fubini_residual
from wavestab.profiles import builtin_profile
from wavestab.solver import GridSpec, Termination, convergence_study, run
from wavestab.systems import builtin_system, hyperbolicity_margin


def _verdict(num, ok, detail):
    line = f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    assert ok, line


def _config(kind, system, profile, grid, data, energy=None, extras=None):
    doc = {
        "experiment": {"kind": kind, "label": f"acceptance-{kind}", "seed": 0},
        "system": system,
        "profile": profile,
        "grid": grid,
        "data": data,
        "energy": energy or {"delta": 0.5, "row_stride": 8},
    }
    if extras:
        doc.update(extras)
    return parse_config(doc)


def test_criterion_01_exact_wave_zero_perturbation():
    # quasilinear all-one coefficients, sech-gradient amplitude 0.5,
    # delta 0.5, zero data: ReachedTEnd with max|u| <= 1e-8, under 2 min
    start = time.monotonic()
    summary = run_experiment(_config(
        "zero-perturbation",
        {"name": "quasilinear-scalar", "alpha": 1.0, "beta": 1.0,
         "gamma": 1.0, "kappa": 1.0},
        {"name": "sech", "amplitude": 0.5},
        {"x_min": -120.0, "x_max": 120.0, "nx": 2048, "t_end": 50.0},
        {"kind": "zero"},
    ))
    wall = time.monotonic() - start
    ok = (
        summary.termination == "ReachedTEnd"
        and summary.max_abs_u <= 1e-8
        and summary.ok
        and wall < 120.0
    )
    _verdict(1, ok, f"termination={summary.termination} "
                    f"max|u|={summary.max_abs_u:.2e} (tol 1e-8) "
                    f"wall={wall:.0f}s (limit 120s)")


def test_criterion_02_epsilon_squared_scaling():
    # bilinear semilinear forcing, eps in {1,2,4}e-3 measured by the
    # initial-smallness norm, T=100: all runs finish and the ratios
    # sup_t(E_total + SE_total)/eps^2 agree within a factor of 4
    ratios, terms = [], []
    for eps in (1e-3, 2e-3, 4e-3):
        summary = run_experiment(_config(
            "stability",
            {"name": "semilinear-bilinear"},
            {"name": "sech", "amplitude": 0.5},
            {"x_min": -160.0, "x_max": 160.0, "nx": 4096, "t_end": 100.0},
            {"kind": "bump", "amplitude": 1e-3, "epsilon": eps, "width": 2.0},
        ))
        terms.append(summary.termination)
        ratios.append(summary.ratio)
    spread = max(ratios) / min(ratios)
    ok = all(t == "ReachedTEnd" for t in terms) and spread <= 4.0
    _verdict(2, ok, f"terminations={terms} "
                    f"ratios={[f'{r:.2f}' for r in ratios]} "
                    f"spread={spread:.3f} (tol 4)")


def test_criterion_03_scheme_order():
    # linear-core standing wave against the exact solution: order >= 3.5
    # over nx in {256, 512, 1024, 2048}; nonlinear self-comparison on
    # nested grids: order >= 3.0
    k, amp = 3, 0.1
    base = GridSpec(x_min=-math.pi, x_max=math.pi, nx=256, t_end=2.0,
                    bc="periodic")
    exact_report = convergence_study(
        builtin_system("linear"), builtin_profile("zero"),
        (lambda x: amp * np.cos(k * x), lambda x: np.zeros_like(x)),
        [base.replace(nx=256 * 2**j) for j in range(4)],
        exact=lambda t, x: amp * np.cos(k * np.asarray(x)) * math.cos(k * t),
    )
    base = GridSpec(x_min=-30.0, x_max=30.0, nx=257, t_end=4.0)
    self_report = convergence_study(
        builtin_system("semilinear-bilinear"),
        builtin_profile("sech", amplitude=0.5),
        (lambda x: 1e-2 * np.exp(-(x / 2.0) ** 2),
         lambda x: np.zeros_like(x)),
        [base, base.replace(nx=513), base.replace(nx=1025)],
    )
    ok = (
        min(exact_report.orders) >= 3.5
        and exact_report.order >= 3.5
        and self_report.order >= 3.0
    )
    _verdict(3, ok, f"exact orders={[f'{p:.2f}' for p in exact_report.orders]} "
                    f"(tol 3.5), self order={self_report.order:.2f} (tol 3.0)")


def test_criterion_04_weight_identities():
    # |psi' + psi <x>^(-1-delta)| <= 1e-10 on 1000 random points for each
    # delta; psi in [1/c_lower, 1] with c_lower from independent
    # quadrature; |phi'| <= 4 <x>^(1+2 delta)
    rng = np.random.default_rng(2026)
    worst_resid, worst_phi, bounds_ok = 0.0, 0.0, True
    for delta in (0.1, 0.5, 0.9):
        ws = make_weights(delta)
        x = rng.uniform(-50.0, 50.0, 1000)
        resid = np.max(np.abs(
            ws.psi_prime(x) + ws.psi(x) * bracket(x) ** (-1.0 - delta)
        ))
        worst_resid = max(worst_resid, float(resid))
        total, _ = quad(
            lambda r: (1.0 + r * r) ** (-(1.0 + delta) / 2.0),
            -np.inf, np.inf,
        )
        psi = ws.psi(x)
        bounds_ok = bounds_ok and bool(
            psi.max() <= 1.0 + 1e-15
            and psi.min() >= math.exp(-total) - 1e-9
        )
        phi_excess = np.max(
            np.abs(ws.phi_prime(x)) - 4.0 * bracket(x) ** (1.0 + 2.0 * delta)
        )
        worst_phi = max(worst_phi, float(phi_excess))
    ok = worst_resid <= 1e-10 and bounds_ok and worst_phi <= 0.0
    _verdict(4, ok, f"max|psi'+psi<x>^(-1-d)|={worst_resid:.2e} (tol 1e-10), "
                    f"psi bounds ok={bounds_ok}, "
                    f"max(|phi'|-4<x>^(1+2d))={worst_phi:.2e} (tol 0)")


def test_criterion_05_fubini_identity():
    # Gaussian field: region integral vs sqrt(2) x iterated characteristic
    # integral, relative residual <= 1e-6
    residual, lhs, _ = fubini_residual(
        lambda t, x: np.exp(-((x + 2.0) ** 2) - (t - 1.0) ** 2),
        t0=2.0, xi0=1.0, x_min=-12.0, return_parts=True,
    )
    rel = residual / abs(lhs)
    ok = lhs > 0.1 and rel <= 1e-6
    _verdict(5, ok, f"relative residual={rel:.2e} (tol 1e-6)")


def test_criterion_06_gronwall_triples():
    # three premise-satisfying triples: beta == 0, the closed-form
    # exponential equality case, and a discretely exact equality
    # construction; all must hold with slack >= -1e-9
    results = {}

    xi = np.linspace(0.0, 5.0, 4001)
    alpha = 1.0 + 0.2 * np.sin(xi)
    results["beta-zero"] = gronwall_verify(
        alpha - 0.1, alpha, np.zeros_like(xi), xi
    )

    xi = np.linspace(0.0, 3.0, 2001)
    a, b = 2.0, 0.5
    results["exponential"] = gronwall_verify(
        a * np.exp(b * xi), np.full(xi.size, a), np.full(xi.size, b), xi
    )

    n = 20001
    xi = np.linspace(0.0, 2.0, n)
    dxi = xi[1] - xi[0]
    alpha = 0.3 * (1.0 + 0.15 * np.sin(xi))
    beta = 0.3 * (1.0 + 0.5 * np.cos(xi) ** 2)
    h = np.empty(n)
    h[0] = alpha[0]
    running = 0.0
    for k in range(1, n):
        h[k] = (alpha[k] + running + 0.5 * dxi * beta[k - 1] * h[k - 1]) / (
            1.0 - 0.5 * dxi * beta[k]
        )
        running += 0.5 * dxi * (beta[k - 1] * h[k - 1] + beta[k] * h[k])
    results["equality"] = gronwall_verify(h, alpha, beta, xi)

    ok = all(holds and slack >= -1e-9 for holds, slack in results.values())
    detail = ", ".join(
        f"{name}: holds={holds} slack={slack:.1e}"
        for name, (holds, slack) in results.items()
    )
    _verdict(6, ok, detail + " (tol -1e-9)")


def test_criterion_07_hyperbolicity():
    # vanishing A1, A2 give margin exactly 1; the scalar catalog margin
    # matches the closed form 1 - (alpha + beta) * a to 1e-12; an
    # amplitude sweep flags lam <= 0 rows without invoking the solver
    xi = np.linspace(-10.0, 10.0, 2001)
    lam_unit = hyperbolicity_margin(
        builtin_system("semilinear-bilinear"),
        builtin_profile("sech", amplitude=0.9), xi,
    ).lam

    alpha, beta, a = 1.0, 0.7, 0.3
    lam = hyperbolicity_margin(
        builtin_system("quasilinear-scalar", alpha=alpha, beta=beta,
                       gamma=1.0, kappa=1.0),
        builtin_profile("sech", amplitude=a), xi,
    ).lam
    closed_form_err = abs(lam - (1.0 - (alpha + beta) * a))

    rows = run_sweep(_config(
        "sweep",
        {"name": "quasilinear-scalar", "alpha": 1.0, "beta": 1.0,
         "gamma": 1.0, "kappa": 1.0},
        {"name": "sech", "amplitude": 0.2},
        {"x_min": -30.0, "x_max": 30.0, "nx": 257, "t_end": 2.0},
        {"kind": "bump", "amplitude": 1e-3, "width": 2.0},
        energy={"delta": 0.5, "row_stride": 4},
        extras={"sweep": {"parameter": "profile.amplitude",
                          "values": [0.2, 0.7]}},
    ))
    flagged = rows[1]
    sweep_ok = (
        rows[0].termination == "ReachedTEnd"
        and flagged.termination == "HypothesisViolation"
        and flagged.hyperbolicity_lam <= 0.0
        and flagged.n_steps == 0
    )
    ok = lam_unit == 1.0 and closed_form_err <= 1e-12 and sweep_ok
    _verdict(7, ok, f"vanishing-A margin={lam_unit} (exact 1), "
                    f"closed-form err={closed_form_err:.1e} (tol 1e-12), "
                    f"sweep flags without solver={sweep_ok}")


def test_criterion_08_boost_equivalence():
    # the same quasilinear run executed directly and in the boosted frame
    # found by the coefficient search, mapped back: sup diff <= 1e-4 at
    # t=20 (measured 2.7e-7, boost c=0.08)
    summary = run_experiment(_config(
        "boost-equivalence",
        {"name": "quasilinear-scalar", "alpha": 1.0, "beta": -0.9,
         "gamma": 1.0, "kappa": 1.0},
        {"name": "sech", "amplitude": 0.45},
        {"x_min": -40.0, "x_max": 40.0, "nx": 1024, "t_end": 20.0},
        {"kind": "bump", "amplitude": 0.05, "width": 3.0},
        energy={"delta": 0.5, "row_stride": 4},
        extras={"boost": {"margin": 0.2}},
    ))
    e = summary.extras
    ok = (
        summary.ok
        and 0.0 < e["boost_c"] < 1.0
        and e["direct_termination"] == "ReachedTEnd"
        and e["boosted_termination"] == "ReachedTEnd"
        and e["diff_sup"] <= 1e-4
    )
    _verdict(8, ok, f"c={e['boost_c']} "
                    f"mapped-back diff={e['diff_sup']:.2e} (tol 1e-4)")


def test_criterion_09_null_condition_violation_contrast():
    # identical eps=0.5 pulse data: F = rho theta finishes with bounded
    # energy, F = theta^2 blows up before T=100
    summary = run_experiment(_config(
        "violation",
        {"name": "violating-F"},
        {"name": "zero"},
        {"x_min": -130.0, "x_max": 130.0, "nx": 1736, "t_end": 100.0},
        {"kind": "eta-pulse", "amplitude": 0.1, "epsilon": 0.5, "width": 2.0},
        extras={"violation": {"compliant_system": "semilinear-bilinear"}},
    ))
    e = summary.extras
    ok = (
        summary.ok
        and e["violating_termination"] == "Blowup"
        and e["violating_blowup_time"] < 100.0
        and e["compliant_termination"] == "ReachedTEnd"
        and np.isfinite(e["compliant_sup_E_total"])
    )
    _verdict(9, ok, f"theta^2: {e['violating_termination']} at "
                    f"t={e['violating_blowup_time']:.1f} (< 100), "
                    f"rho*theta: {e['compliant_termination']} with "
                    f"sup E={e['compliant_sup_E_total']:.2e}")


def test_criterion_10_amplification_localization():
    # pulse crossing a sech wave of amplitude 0.8: post-passage E_total
    # plateau flat to 1% over 20 further units, and the plateau level
    # agrees to 1% between t_end 88 and 95
    summaries = {}
    for t_end in (88.0, 95.0):
        summaries[t_end] = run_experiment(_config(
            "amplification",
            {"name": "semilinear-bilinear"},
            {"name": "sech", "amplitude": 0.8},
            {"x_min": -180.0, "x_max": 60.0, "nx": 4096, "t_end": t_end},
            {"kind": "eta-pulse", "amplitude": 1e-3, "center": 30.0,
             "width": 2.0},
        ))
    e88, e95 = summaries[88.0].extras, summaries[95.0].extras
    agreement = abs(e88["plateau_mean"] - e95["plateau_mean"]) / e95[
        "plateau_mean"
    ]
    factor_err = abs(e95["measured_factor"] - math.exp(0.8 * math.pi)) / (
        math.exp(0.8 * math.pi)
    )
    ok = (
        all(s.ok for s in summaries.values())
        and e88["plateau_flatness"] <= 0.01
        and e95["plateau_flatness"] <= 0.01
        and agreement <= 0.01
        and factor_err <= 0.05
    )
    _verdict(10, ok, f"flatness={e95['plateau_flatness']:.1e} (tol 1e-2), "
                     f"plateau agreement={agreement:.1e} (tol 1e-2), "
                     f"factor={e95['measured_factor']:.2f} vs "
                     f"exp(0.8 pi)={math.exp(0.8 * math.pi):.2f}")


def test_criterion_11_characteristic_separation():
    # one-directional pulse on the linear core: the opposite-family
    # energy ratio Ehat1/Ebar1 stays <= 1e-4 for t >= 10 on the finest
    # grid and decreases under refinement
    system = builtin_system("linear")
    profile = builtin_profile("zero")
    amp, width = 1.0, 2.0

    def u0(x):
        return amp * np.exp(-((-x / 2.0) / width) ** 2)

    def u1(x):
        return 0.5 * amp * (-2.0 * (-x / 2.0) / width**2) * np.exp(
            -((-x / 2.0) / width) ** 2
        )

    worst = []
    for nx in (1025, 2049, 4097):
        grid = GridSpec(x_min=-40.0, x_max=60.0, nx=nx, t_end=30.0)
        traj = run(system, profile, grid, (u0, u1),
                   EnergyConfig(delta=0.5, row_stride=8))
        assert traj.termination == Termination.REACHED_T_END
        worst.append(max(
            rep.Ehat1 / rep.Ebar1
            for rep in traj.reports if rep.t >= 10.0
        ))
    ok = worst[-1] <= 1e-4 and worst[0] > worst[1] > worst[2]
    _verdict(11, ok, f"Ehat1/Ebar1 after t=10: "
                     f"{[f'{q:.1e}' for q in worst]} "
                     f"(finest tol 1e-4, decreasing)")
