"""Method-of-lines evolution of perturbations around a traveling wave.

The unknown is the perturbation u(t, x) (components last), advanced with
classical RK4 on the first-order system (u, w = u_t) and 4th-order centered
stencils in x.  The right-hand side solves the pointwise linear system

    a00 u_tt = a11 u_xx + a_cross u_tx + source

with coefficients from :func:`wavestab.systems.cartesian_coefficients`,
optionally rewritten in a boosted frame t_bar = (1+c) t, x_bar = x + c t
(the same state arrays then live on the barred grid and the coefficient
matrices pick up the corresponding affine combinations).  Quasilinear
right-hand sides add a sixth-difference damping term, one order below the
truncation error, that keeps the marginally resolved band from being
pumped by the moving background (see :func:`_dissipation`).

Time stepping policy: the CFL estimate uses characteristic speeds at active
nodes only (nodes where the perturbation is numerically nonzero).  Marginal
backgrounds can make the frozen-coefficient speed enormous at points the
perturbation never touches; restricting the estimate to active nodes keeps
the step size meaningful while a singular coefficient at an active node
still terminates the run.  The estimate refreshes every 50 steps.

Termination is always explicit: reaching t_end, field blowup past 1e6,
contamination of the zero-extension halo at the boundary, or a singular
a00 block.  Each outcome is recorded on the returned Trajectory.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace as dc_replace
from enum import Enum

import numpy as np

from .energy import EnergyConfig, accumulate_spacetime, make_weights
from .errors import (
    BlowupError,
    BoundaryContaminationError,
    HypothesisViolationError,
    SingularCoefficientError,
    SolverEvent,
    StudyInvalidError,
    SupportViolationError,
)
from .geometry import _shifted, bracket, d1, d2
from .systems import (
    cartesian_coefficients,
    check_structure,
    hyperbolicity_margin,
    max_characteristic_speed,
)

__all__ = [
    "GridSpec",
    "SimState",
    "Termination",
    "Trajectory",
    "ConvergenceReport",
    "init_state",
    "rhs_utt",
    "step",
    "run",
    "convergence_study",
]

BLOWUP_THRESHOLD = 1e6
HALO_WIDTH = 4
HALO_RTOL = 1e-8
SPEED_REFRESH_STEPS = 50
DISSIPATION_SIGMA = 2.0


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid and stepping parameters.

    ``bc`` is "compact" (inclusive endpoints, zero extension beyond them) or
    "periodic" (x_max identified with x_min and excluded).  ``dt = None``
    selects adaptive steps of size cfl * h / max speed.
    """

    x_min: float
    x_max: float
    nx: int
    t_end: float
    dt: float | None = None
    cfl: float = 0.4
    bc: str = "compact"

    def __post_init__(self):
        if self.x_max <= self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.nx < 16:
            raise ValueError("nx must be at least 16")
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive when given")
        if not 0 < self.cfl <= 1:
            raise ValueError("cfl must lie in (0, 1]")
        if self.bc not in ("compact", "periodic"):
            raise ValueError("bc must be 'compact' or 'periodic'")

    @property
    def h(self) -> float:
        span = self.x_max - self.x_min
        return span / (self.nx - 1) if self.bc == "compact" else span / self.nx

    @property
    def x(self) -> np.ndarray:
        if self.bc == "compact":
            return np.linspace(self.x_min, self.x_max, self.nx)
        return self.x_min + self.h * np.arange(self.nx)

    def replace(self, **kwargs) -> "GridSpec":
        return dc_replace(self, **kwargs)


class _Level:
    __slots__ = ("t", "u", "w", "utt")

    def __init__(self, t, u, w, utt=None):
        self.t = t
        self.u = u
        self.w = w
        self.utt = utt


class SimState:
    """Current fields plus a short ring of time levels.

    The ring (three levels) is what the null-derivative engine differences
    to obtain the pure third-order time derivative; ``utt_level(i)`` lazily
    evaluates and caches the equation's right-hand side on level i.
    """

    def __init__(self, grid: GridSpec, rhs, history):
        self.grid = grid
        self._rhs = rhs
        self.history = list(history)

    @property
    def t(self) -> float:
        return self.history[-1].t

    @property
    def u(self) -> np.ndarray:
        return self.history[-1].u

    @property
    def w(self) -> np.ndarray:
        return self.history[-1].w

    def utt_level(self, i: int) -> np.ndarray:
        lvl = self.history[i]
        if lvl.utt is None:
            lvl.utt = self._rhs(lvl.t, lvl.u, lvl.w)
        return lvl.utt

    def history_times(self):
        return [lvl.t for lvl in self.history]

    def push(self, t, u, w):
        self.history.append(_Level(t, u, w))
        if len(self.history) > 3:
            del self.history[0]


class Termination(Enum):
    REACHED_T_END = "ReachedTEnd"
    BLOWUP = "Blowup"
    BOUNDARY_CONTAMINATION = "BoundaryContamination"
    SINGULAR_A00 = "SingularA00"


# ---------------------------------------------------------------------------
# right-hand side
# ---------------------------------------------------------------------------


def _null_gradient(grid: GridSpec, u, w, c: float):
    u_x = d1(u, grid.h, grid.bc)
    u_xi = (1.0 + c) * (w + u_x)
    u_eta = (1.0 + c) * w + (c - 1.0) * u_x
    return u_x, u_xi, u_eta


def _frame_coefficients(system, profile, grid, t, u, w, c):
    """Boosted-frame coefficient fields (a00, a11, a_cross, source)."""
    _, u_xi, u_eta = _null_gradient(grid, u, w, c)
    xi = 0.5 * (grid.x + (1.0 - c) * t / (1.0 + c))
    a00, a11, a_cross, source = cartesian_coefficients(system, profile, xi, u_xi, u_eta)
    if c != 0.0:
        a00, a11, a_cross = (
            (1.0 + c) ** 2 * a00,
            a11 + c * a_cross - c * c * a00,
            (1.0 + c) * a_cross - 2.0 * c * (1.0 + c) * a00,
        )
    return a00, a11, a_cross, source


def _dissipation(w, h, bc):
    """Sixth-difference damping of the marginally resolved band, O(h^5).

    Central stencils are dissipation-free, and on backgrounds whose
    principal coefficients vary in x the modes near the resolution limit
    travel at the wrong discrete group velocity; they can ride along with
    the moving wave and extract energy from it indefinitely instead of
    crossing it once.  The term sigma/(64 h) * (delta_+ delta_-)^3 w has
    symbol -sigma sin^6(kh/2)/h: it drains exactly that band while sitting
    one order below the scheme's truncation error on resolved fields.
    """
    acc = (
        _shifted(w, 3, bc) + _shifted(w, -3, bc)
        - 6.0 * (_shifted(w, 2, bc) + _shifted(w, -2, bc))
        + 15.0 * (_shifted(w, 1, bc) + _shifted(w, -1, bc))
        - 20.0 * w
    )
    return (DISSIPATION_SIGMA / (64.0 * h)) * acc


def rhs_utt(system, profile, grid: GridSpec, t, u, w, boost: float = 0.0):
    """u_tt (barred frame when boost > 0) for fields sampled on the grid.

    Semilinear systems have a constant principal part and need no damping;
    quasilinear right-hand sides include the sixth-difference term from
    :func:`_dissipation`.
    """
    c = float(boost)
    h, bc = grid.h, grid.bc
    u_xx = d2(u, h, bc)

    if system.semilinear:
        _, u_xi, u_eta = _null_gradient(grid, u, w, c)
        xi = 0.5 * (grid.x + (1.0 - c) * t / (1.0 + c))
        fp = np.asarray(profile.f1(xi), dtype=float)
        if fp.ndim == u.ndim - 1:
            fp = fp[..., None]
        forcing = np.asarray(system.F(fp + u_xi, u_eta), dtype=float)
        if c == 0.0:
            return u_xx + forcing
        w_x = d1(w, h, bc)
        return ((1.0 - c * c) * u_xx - 2.0 * c * (1.0 + c) * w_x + forcing) / (
            (1.0 + c) ** 2
        )

    w_x = d1(w, h, bc)
    diss = _dissipation(w, h, bc)
    a00, a11, a_cross, source = _frame_coefficients(system, profile, grid, t, u, w, c)
    if system.n == 1:
        num = a11[..., 0, 0] * u_xx[..., 0] + a_cross[..., 0, 0] * w_x[..., 0]
        num = num + source[..., 0]
        return (num / a00[..., 0, 0])[..., None] + diss
    rhs_val = (
        np.einsum("...ij,...j->...i", a11, u_xx)
        + np.einsum("...ij,...j->...i", a_cross, w_x)
        + source
    )
    try:
        return np.linalg.solve(a00, rhs_val[..., None])[..., 0] + diss
    except np.linalg.LinAlgError as exc:
        raise SingularCoefficientError(f"a00 singular at t = {t:.6g}") from exc


def _make_rhs(system, profile, grid, boost):
    def rhs(t, u, w):
        return rhs_utt(system, profile, grid, t, u, w, boost=boost)

    return rhs


# ---------------------------------------------------------------------------
# CFL speed estimate
# ---------------------------------------------------------------------------


def _estimate_speed(system, profile, grid, t, u, w, c):
    """Max characteristic speed over active nodes (see module docstring)."""
    if system.semilinear:
        return 1.0
    a00, a11, a_cross, _ = _frame_coefficients(system, profile, grid, t, u, w, c)
    amp = np.abs(u).sum(axis=-1) + np.abs(w).sum(axis=-1)
    scale = float(amp.max())
    active = amp > max(1e-14, 1e-9 * scale)
    if system.n == 1:
        low = a00[..., 0, 0]
    else:
        low = np.linalg.eigvalsh(a00).min(axis=-1)
    if not np.any(active):
        safe = low >= 0.25
        if not np.any(safe):
            raise SingularCoefficientError(
                f"background coefficient degenerate everywhere at t = {t:.6g}"
            )
        speeds = max_characteristic_speed(a00[safe], a11[safe], a_cross[safe])
        return max(1.0, float(np.max(speeds)))
    if np.any(active & (low < 1e-6)):
        k = int(np.argmin(np.where(active, low, np.inf)))
        raise SingularCoefficientError(
            f"a00 degenerate (min eig {low[k]:.3e}) at an active node, "
            f"x index {k}, t = {t:.6g}"
        )
    speeds = max_characteristic_speed(a00[active], a11[active], a_cross[active])
    s = float(np.max(speeds))
    if not np.isfinite(s):
        raise SingularCoefficientError(
            f"characteristic speed unbounded at an active node, t = {t:.6g}"
        )
    return s


# ---------------------------------------------------------------------------
# state construction and stepping
# ---------------------------------------------------------------------------


def _sample(fn_or_arr, x, n):
    if callable(fn_or_arr):
        vals = np.asarray(fn_or_arr(x), dtype=float)
    else:
        vals = np.array(fn_or_arr, dtype=float, copy=True)
    if vals.ndim == 0:
        vals = np.full((x.size, n), float(vals))
    if vals.ndim == 1:
        if n != 1 and vals.size == n:
            vals = np.broadcast_to(vals, (x.size, n)).copy()
        else:
            vals = vals[:, None]
    if vals.shape != (x.size, n):
        raise ValueError(f"data shape {vals.shape} incompatible with grid/{n}")
    return vals


def init_state(grid: GridSpec, u0, u1, system, profile, boost: float = 0.0,
               dt_seed: float | None = None) -> SimState:
    """Sample initial data and seed the three-level time history.

    The two extra levels at -dt/2 and -dt are produced by integrating the
    equation backwards with RK4 half-steps, so third-order time derivatives
    are available from the very first slice.  For boosted frames the data
    arrays are still the direct-frame (u0, u1); the barred velocity
    w_bar = (u1 - c u0') / (1 + c) is formed here.
    """
    x = grid.x
    n = system.n
    u_init = _sample(u0, x, n)
    w_init = _sample(u1, x, n)
    c = float(boost)
    if c != 0.0:
        w_init = (w_init - c * d1(u_init, grid.h, grid.bc)) / (1.0 + c)

    scale = max(np.abs(u_init).max(), np.abs(w_init).max())
    if grid.bc == "compact" and scale > 0.0:
        edge = max(
            np.abs(u_init[:HALO_WIDTH]).max(), np.abs(u_init[-HALO_WIDTH:]).max(),
            np.abs(w_init[:HALO_WIDTH]).max(), np.abs(w_init[-HALO_WIDTH:]).max(),
        )
        if edge > HALO_RTOL * scale:
            raise SupportViolationError(
                "initial data is not quiet within 4 nodes of the grid boundary"
            )

    rhs = _make_rhs(system, profile, grid, c)
    lvl0 = _Level(0.0, u_init, w_init)

    if dt_seed is None:
        if grid.dt is not None:
            dt_seed = grid.dt
        else:
            s0 = _estimate_speed(system, profile, grid, 0.0, u_init, w_init, c)
            dt_seed = grid.cfl * grid.h / s0

    back = SimState(grid, rhs, [lvl0])
    levels = []
    for _ in range(2):
        step(back, -0.5 * dt_seed, check=False)
        levels.append(back.history[-1])
    return SimState(grid, rhs, [levels[1], levels[0], lvl0])


def step(state: SimState, dt: float, check: bool = True):
    """One classical RK4 step of (u, w); mutates the state in place.

    The stage-1 acceleration is cached as the current level's u_tt so the
    derivative engine and the integrator agree on it exactly.  With
    ``check`` set, the new fields are screened for blowup and for
    contamination of the zero-extension halo before being committed.
    """
    rhs = state._rhs
    t, u, w = state.t, state.u, state.w

    k1u = w
    k1w = state.utt_level(-1)
    u2 = u + 0.5 * dt * k1u
    k2u = w + 0.5 * dt * k1w
    k2w = rhs(t + 0.5 * dt, u2, k2u)
    u3 = u + 0.5 * dt * k2u
    k3u = w + 0.5 * dt * k2w
    k3w = rhs(t + 0.5 * dt, u3, k3u)
    u4 = u + dt * k3u
    k4u = w + dt * k3w
    k4w = rhs(t + dt, u4, k4u)

    u_new = u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    w_new = w + (dt / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
    t_new = t + dt

    if check:
        peak = max(np.abs(u_new).max(), np.abs(w_new).max())
        if not np.isfinite(peak) or peak > BLOWUP_THRESHOLD:
            raise BlowupError(
                f"fields exceeded {BLOWUP_THRESHOLD:.0e} at t = {t_new:.6g}"
            )
        if state.grid.bc == "compact":
            edge = 0.0
            for arr in (u_new, w_new):
                edge = max(
                    edge,
                    np.abs(arr[:HALO_WIDTH]).max(),
                    np.abs(arr[-HALO_WIDTH:]).max(),
                )
            if edge > HALO_RTOL * max(peak, 1e-30):
                raise BoundaryContaminationError(
                    f"wave support reached the grid boundary at t = {t_new:.6g}"
                )
    state.push(t_new, u_new, w_new)


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------


@dataclass
class Trajectory:
    """Everything a run produces.

    ``reports`` are the retained energy rows (one per ``row_stride`` steps
    plus the final slice); ``max_abs_u`` is parallel to them.  Snapshots
    hold (t, u, w) copies at the snapshot stride for plotting and region
    integration.  ``termination`` is always one of the four explicit
    outcomes, with ``blowup_time`` set when it is not ReachedTEnd.
    """

    grid: GridSpec
    times: np.ndarray
    reports: list
    max_abs_u: np.ndarray
    snapshots: list
    termination: Termination
    blowup_time: float | None
    diagnostics: dict = field(default_factory=dict)
    final_state: SimState | None = None

    @property
    def final_report(self):
        return self.reports[-1] if self.reports else None

    def sup_E_total(self) -> float:
        return max((r.E_total for r in self.reports), default=0.0)


def run(system, profile, grid: GridSpec, data, energy: EnergyConfig | None = None,
        *, boost: float = 0.0, snapshot_stride: int | None = None,
        allow_violation: bool = False, precheck: bool = True) -> Trajectory:
    """Evolve initial data and track the energy hierarchy.

    ``data`` is the pair (u0, u1) of arrays on the grid or callables of x.
    Preconditions (unless ``precheck`` is off): the coefficient order
    conditions must pass (``allow_violation`` downgrades a failing product
    condition to a recorded diagnostic so blowup experiments can proceed)
    and quasilinear backgrounds must have a positive hyperbolicity margin
    over the xi range the run can touch.
    """
    if energy is None:
        energy = EnergyConfig()
    c = float(boost)
    if not 0.0 <= c < 1.0:
        raise ValueError("boost must lie in [0, 1)")

    diagnostics: dict = {"boost": c}
    if precheck:
        structure = check_structure(system)
        diagnostics["structure"] = structure
        if not structure.satisfied and not allow_violation:
            bad = [chk.name for chk in structure if not chk.satisfied]
            raise HypothesisViolationError(
                f"coefficient order conditions fail for {', '.join(bad)}"
            )
        if not system.semilinear:
            xi_lo = 0.5 * grid.x_min
            xi_hi = 0.5 * (grid.x_max + (1.0 - c) * grid.t_end / (1.0 + c))
            xi_probe = np.linspace(xi_lo, xi_hi, 2001)
            hyp = hyperbolicity_margin(system, profile, xi_probe)
            diagnostics["hyperbolicity"] = hyp
            if hyp.lam <= 0.0:
                raise HypothesisViolationError(
                    f"hyperbolicity margin {hyp.lam:.3e} <= 0 "
                    f"at xi = {hyp.argmin_xi:.6g}"
                )

    t_end = grid.t_end
    state = init_state(grid, data[0], data[1], system, profile, boost=c)
    weights = make_weights(energy.delta) if energy.track else None
    stride = max(1, int(energy.row_stride))
    snap_stride = snapshot_stride if snapshot_stride else max(
        1, int(round(t_end / (40.0 * (grid.dt or grid.cfl * grid.h)))))

    wall_start = time.perf_counter()
    report = accumulate_spacetime(None, state, weights) if energy.track else None
    reports = [report] if report else []
    times = [0.0]
    max_u = [float(np.abs(state.u).max())]
    snapshots = [(0.0, state.u.copy(), state.w.copy())]
    sup_grad = 0.0

    termination = Termination.REACHED_T_END
    blowup_time = None
    dt = grid.dt
    n_step = 0
    try:
        while state.t < t_end - 1e-12:
            if grid.dt is None and n_step % SPEED_REFRESH_STEPS == 0:
                s = _estimate_speed(
                    system, profile, grid, state.t, state.u, state.w, c
                )
                dt = grid.cfl * grid.h / max(s, 1e-12)
            dt_step = min(dt, t_end - state.t)
            step(state, dt_step)
            n_step += 1
            if energy.track:
                report = accumulate_spacetime(report, state, weights, dt=dt_step)
                last = n_step % stride == 0 or state.t >= t_end - 1e-12
                if last:
                    reports.append(report)
                    times.append(state.t)
                    max_u.append(float(np.abs(state.u).max()))
                    _, u_xi, u_eta = _null_gradient(grid, state.u, state.w, c)
                    p = 1.0 + energy.delta
                    xi = 0.5 * (state.t + grid.x)
                    eta = 0.5 * (state.t - grid.x)
                    wg = float(
                        np.max(bracket(xi) ** p
                               * np.sqrt(np.sum(u_xi * u_xi, axis=-1)))
                        + np.max(bracket(eta) ** p
                                 * np.sqrt(np.sum(u_eta * u_eta, axis=-1)))
                    )
                    sup_grad = max(sup_grad, wg)
            if n_step % snap_stride == 0 or state.t >= t_end - 1e-12:
                snapshots.append((state.t, state.u.copy(), state.w.copy()))
    except SolverEvent as ev:
        termination = Termination(ev.termination)
        blowup_time = state.t
        diagnostics["event"] = str(ev)

    diagnostics["n_steps"] = n_step
    diagnostics["sup_weighted_gradient"] = sup_grad
    diagnostics["wall_time_s"] = time.perf_counter() - wall_start

    return Trajectory(
        grid=grid,
        times=np.asarray(times),
        reports=reports,
        max_abs_u=np.asarray(max_u),
        snapshots=snapshots,
        termination=termination,
        blowup_time=blowup_time,
        diagnostics=diagnostics,
        final_state=state,
    )


# ---------------------------------------------------------------------------
# convergence study
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceReport:
    """Grid sizes, sup-norm errors at t_end, and fitted orders.

    ``order`` is the finest-pair estimate (the asymptotically meaningful
    one); ``mean_order`` averages all pairs.  ``against`` records whether
    errors are measured against an exact solution or by successive grid
    differences on shared nodes.
    """

    hs: tuple
    dts: tuple
    errors: tuple
    orders: tuple
    order: float
    mean_order: float
    against: str


def _check_nested(grids):
    g0 = grids[0]
    for k, g in enumerate(grids):
        if (g.x_min, g.x_max, g.bc, g.t_end) != (g0.x_min, g0.x_max, g0.bc, g0.t_end):
            raise StudyInvalidError("grids must share domain, bc, and t_end")
        expect = (g0.nx - 1) * 2 ** k + 1 if g0.bc == "compact" else g0.nx * 2 ** k
        if g.nx != expect:
            raise StudyInvalidError(
                f"grid {k} must have nx = {expect} for nested refinement"
            )


def convergence_study(system, profile, data, grids, *, exact=None,
                      energy: EnergyConfig | None = None) -> ConvergenceReport:
    """Self- or exact-solution convergence of the final slice in sup norm.

    The grids must be nested refinements (nx - 1 doubling on compact grids,
    nx doubling on periodic ones); the time step is fixed per level and
    halved with h so the combined order is meaningful.  Every run must
    reach t_end, otherwise the study is invalid.
    """
    grids = list(grids)
    need = 2 if exact is not None else 3
    if len(grids) < need:
        raise StudyInvalidError(f"need at least {need} grids")
    _check_nested(grids)
    if energy is None:
        energy = EnergyConfig(track=False)

    g0 = grids[0]
    if g0.dt is not None:
        dt0 = g0.dt
    else:
        x0 = g0.x
        n = system.n
        u_init = _sample(data[0], x0, n)
        w_init = _sample(data[1], x0, n)
        s0 = _estimate_speed(system, profile, g0, 0.0, u_init, w_init, 0.0)
        dt0 = g0.cfl * g0.h / max(s0, 1e-12)
    n_steps0 = max(1, math.ceil(g0.t_end / dt0))

    finals = []
    hs, dts = [], []
    for k, g in enumerate(grids):
        dt_k = g.t_end / (n_steps0 * 2 ** k)
        traj = run(system, profile, g.replace(dt=dt_k), data, energy,
                   snapshot_stride=10 ** 9, precheck=(k == 0))
        if traj.termination != Termination.REACHED_T_END:
            raise StudyInvalidError(
                f"run on grid {k} terminated with {traj.termination.value}"
            )
        finals.append(traj.final_state.u)
        hs.append(g.h)
        dts.append(dt_k)

    if exact is not None:
        errors = []
        for g, u_num in zip(grids, finals):
            ref = _sample(lambda x: exact(g.t_end, x), g.x, system.n)
            errors.append(float(np.abs(u_num - ref).max()))
        against = "exact"
    else:
        errors = []
        for u_coarse, u_fine in zip(finals[:-1], finals[1:]):
            errors.append(float(np.abs(u_fine[::2] - u_coarse).max()))
        against = "self"

    errors_arr = np.asarray(errors)
    if np.any(errors_arr <= 0):
        raise StudyInvalidError("zero error between levels; refine the setup")
    orders = tuple(float(v) for v in np.log2(errors_arr[:-1] / errors_arr[1:]))
    return ConvergenceReport(
        hs=tuple(hs),
        dts=tuple(dts),
        errors=tuple(float(e) for e in errors_arr),
        orders=orders,
        order=orders[-1],
        mean_order=float(np.mean(orders)),
        against=against,
    )
