"""Wave-system definitions and structural diagnostics.

A system is the tuple (A1, A2, A3, F) of coefficient maps in

    u_{xi eta} = A1 u_{xi eta} + A2 u_{eta eta} + A3 u_{xi xi} + F,

with the order conditions A1 = O(|rho| + |theta|), A2 = O(|rho|),
A3 = O(|theta|), F = O(|rho| |theta|) playing the role of a null condition.
This module provides the builtin catalog, sampling-based verification of the
order conditions, hyperbolicity margins along a traveling wave, the Cartesian
reformulation used by the solver, and the Galilean boost that restores
positivity of the time-direction coefficient when 1 - A1 + A2 fails to be
positive definite.

Evaluation convention: coefficient maps take (rho, theta) with shape
(..., n) and return (..., n, n) for the A_i and (..., n) for F.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    EvaluationFailureError,
    NoBoostFoundError,
    NonSymmetricCoefficientsError,
    UnknownNameError,
)

__all__ = [
    "SystemKind",
    "CoefficientSet",
    "ConditionCheck",
    "StructureReport",
    "HyperbolicityReport",
    "builtin_system",
    "check_structure",
    "hyperbolicity_margin",
    "cartesian_coefficients",
    "find_boost",
    "boost_grid",
    "BoostMap",
    "max_characteristic_speed",
]


class SystemKind(Enum):
    SEMILINEAR = "semilinear"
    QUASILINEAR = "quasilinear"


@dataclass(frozen=True)
class CoefficientSet:
    """The maps A1, A2, A3, F defining a wave system.

    ``kind`` is Semilinear when all A_i vanish identically (the solver then
    takes the d'Alembert fast path).
    """

    n: int
    A1: callable
    A2: callable
    A3: callable
    F: callable
    kind: SystemKind
    name: str = "custom"
    params: dict = field(default_factory=dict)

    @property
    def semilinear(self) -> bool:
        return self.kind == SystemKind.SEMILINEAR


def _zeros_matrix_map(n):
    def mapped(rho, theta):
        rho = np.asarray(rho, dtype=float)
        return np.zeros(rho.shape[:-1] + (n, n))

    return mapped


def _eval_points(rho, theta, n):
    rho = np.atleast_2d(np.asarray(rho, dtype=float))
    theta = np.atleast_2d(np.asarray(theta, dtype=float))
    if rho.shape[-1] != n or theta.shape[-1] != n:
        raise EvaluationFailureError("rho/theta have wrong component count")
    return rho, theta


# ---------------------------------------------------------------------------
# builtin catalog
# ---------------------------------------------------------------------------

_VEC_COUPLING = np.array(
    [[[1.0, 0.4], [0.3, 0.0]], [[0.0, 0.5], [0.2, 0.8]]]
)
_VEC_P = np.array([[0.3, 0.1], [0.1, 0.2]])
_VEC_Q = np.array([[0.25, 0.05], [0.05, 0.15]])
_VEC_R = np.array([[0.2, 0.04], [0.04, 0.3]])


def builtin_system(name: str, **params) -> CoefficientSet:
    """Catalog of example systems.

    - ``linear``: n=1, all nonlinearities off.
    - ``semilinear-bilinear``: n=1, F = rho * theta.
    - ``semilinear-vector``: n=2, F_i = sum_jk c_ijk rho_j theta_k with fixed
      coupling constants.
    - ``quasilinear-scalar``: n=1, A1 = alpha (rho + theta), A2 = beta rho,
      A3 = gamma theta, F = kappa rho theta (alpha, beta, gamma, kappa
      configurable, default 1).
    - ``quasilinear-vector``: n=2 multilinear symmetric-matrix analogue with a
      single ``scale`` parameter.
    - ``violating-F``: n=1, F = theta^2, which fails the product order
      condition on F.
    """
    known = {
        "linear",
        "semilinear-bilinear",
        "semilinear-vector",
        "quasilinear-scalar",
        "quasilinear-vector",
        "violating-F",
    }
    if name not in known:
        raise UnknownNameError(f"unknown system {name!r}")

    if name == "linear":
        _require_params(name, params, set())

        def F(rho, theta):
            rho = np.asarray(rho, dtype=float)
            return np.zeros_like(rho)

        return CoefficientSet(
            1, _zeros_matrix_map(1), _zeros_matrix_map(1), _zeros_matrix_map(1),
            F, SystemKind.SEMILINEAR, name=name,
        )

    if name == "semilinear-bilinear":
        _require_params(name, params, set())

        def F(rho, theta):
            return np.asarray(rho, dtype=float) * np.asarray(theta, dtype=float)

        return CoefficientSet(
            1, _zeros_matrix_map(1), _zeros_matrix_map(1), _zeros_matrix_map(1),
            F, SystemKind.SEMILINEAR, name=name,
        )

    if name == "violating-F":
        _require_params(name, params, set())

        def F(rho, theta):
            theta = np.asarray(theta, dtype=float)
            return theta * theta

        return CoefficientSet(
            1, _zeros_matrix_map(1), _zeros_matrix_map(1), _zeros_matrix_map(1),
            F, SystemKind.SEMILINEAR, name=name,
        )

    if name == "semilinear-vector":
        _require_params(name, params, set())

        def F(rho, theta):
            rho = np.asarray(rho, dtype=float)
            theta = np.asarray(theta, dtype=float)
            return np.einsum("ijk,...j,...k->...i", _VEC_COUPLING, rho, theta)

        return CoefficientSet(
            2, _zeros_matrix_map(2), _zeros_matrix_map(2), _zeros_matrix_map(2),
            F, SystemKind.SEMILINEAR, name=name,
        )

    if name == "quasilinear-scalar":
        _require_params(name, params, {"alpha", "beta", "gamma", "kappa"})
        alpha = float(params.get("alpha", 1.0))
        beta = float(params.get("beta", 1.0))
        gamma = float(params.get("gamma", 1.0))
        kappa = float(params.get("kappa", 1.0))

        def A1(rho, theta):
            rho = np.asarray(rho, dtype=float)
            theta = np.asarray(theta, dtype=float)
            return (alpha * (rho + theta))[..., None]

        def A2(rho, theta):
            return (beta * np.asarray(rho, dtype=float))[..., None]

        def A3(rho, theta):
            return (gamma * np.asarray(theta, dtype=float))[..., None]

        def F(rho, theta):
            return kappa * np.asarray(rho, dtype=float) * np.asarray(theta, dtype=float)

        return CoefficientSet(
            1, A1, A2, A3, F, SystemKind.QUASILINEAR, name=name,
            params={"alpha": alpha, "beta": beta, "gamma": gamma, "kappa": kappa},
        )

    # quasilinear-vector
    _require_params(name, params, {"scale"})
    scale = float(params.get("scale", 1.0))

    def A1(rho, theta):
        rho = np.asarray(rho, dtype=float)
        theta = np.asarray(theta, dtype=float)
        s = np.sum(rho + theta, axis=-1)
        return scale * s[..., None, None] * _VEC_P

    def A2(rho, theta):
        rho = np.asarray(rho, dtype=float)
        s = rho[..., 0] + 0.5 * rho[..., 1]
        return scale * s[..., None, None] * _VEC_Q

    def A3(rho, theta):
        theta = np.asarray(theta, dtype=float)
        s = theta[..., 0] - 0.5 * theta[..., 1]
        return scale * s[..., None, None] * _VEC_R

    def F(rho, theta):
        rho = np.asarray(rho, dtype=float)
        theta = np.asarray(theta, dtype=float)
        return scale * np.einsum("ijk,...j,...k->...i", _VEC_COUPLING, rho, theta)

    return CoefficientSet(
        2, A1, A2, A3, F, SystemKind.QUASILINEAR, name=name,
        params={"scale": scale},
    )


def _require_params(name, params, allowed):
    extra = set(params) - allowed
    if extra:
        raise UnknownNameError(f"system {name!r} does not accept {sorted(extra)}")


# ---------------------------------------------------------------------------
# structure (order-condition) checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    satisfied: bool
    fitted_order: float
    worst_point: tuple
    constant: float


@dataclass(frozen=True)
class StructureReport:
    a1: ConditionCheck
    a2: ConditionCheck
    a3: ConditionCheck
    f: ConditionCheck
    radii: tuple
    directions: int
    tol: float

    @property
    def satisfied(self) -> bool:
        return all(c.satisfied for c in (self.a1, self.a2, self.a3, self.f))

    def __iter__(self):
        return iter((self.a1, self.a2, self.a3, self.f))


def _matrix_norm(m):
    return np.sqrt(np.sum(m * m, axis=(-2, -1)))


def _vector_norm(v):
    return np.sqrt(np.sum(v * v, axis=-1))


def _assert_symmetric(name, mat):
    asym = np.max(np.abs(mat - np.swapaxes(mat, -1, -2)))
    scale = 1.0 + np.max(np.abs(mat))
    if asym > 1e-12 * scale:
        raise NonSymmetricCoefficientsError(
            f"{name} asymmetry {asym:.3e} at a sampled point"
        )


def _fit_orders(radii, vals):
    """Per-direction log-log slopes; exact-zero columns fit as +inf."""
    vals = np.asarray(vals, dtype=float)  # shape (n_radii, n_dirs)
    log_r = np.log(radii)
    orders = np.full(vals.shape[1], np.inf)
    live = np.all(vals > 1e-290, axis=0)
    if np.any(live):
        logs = np.log(vals[:, live])
        slopes = np.polyfit(log_r, logs, 1)[0]
        orders[live] = slopes
    return orders


def check_structure(system: CoefficientSet, radii=None, directions: int = 32,
                    tol: float = 0.1, seed: int = 0) -> StructureReport:
    """Verify the order conditions by sampling and log-log slope fitting.

    Each condition is checked on ``directions`` random unit directions and a
    decreasing radius ladder: A1 against scaling of both arguments, A2 with
    theta left at unit size, A3 with rho left at unit size, and F against
    independent scaling of each factor.  A condition passes when every fitted
    order is at least 1 - tol (each factor separately for F).  Symmetry of
    the A_i is asserted at every sample.
    """
    if radii is None:
        radii = np.logspace(-1, -6, 6)
    radii = np.asarray(sorted(radii, reverse=True), dtype=float)
    if radii.size < 2:
        raise ValueError("need at least 2 radii for a slope fit")
    if directions < 16:
        raise ValueError("need at least 16 sample directions")

    rng = np.random.default_rng(seed)
    n = system.n

    def unit(count):
        v = rng.standard_normal((count, n))
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    rho_hat, theta_hat = unit(directions), unit(directions)

    def evaluate(fn, rho, theta, matrix, label):
        try:
            out = np.asarray(fn(rho, theta), dtype=float)
        except Exception as exc:  # noqa: BLE001 - opaque user maps
            raise EvaluationFailureError(f"{label} evaluation failed: {exc}") from exc
        if not np.all(np.isfinite(out)):
            raise EvaluationFailureError(f"{label} returned non-finite values")
        if matrix:
            _assert_symmetric(label, out)
            return _matrix_norm(out)
        return _vector_norm(out)

    def condition(label, fn, scale_rho, scale_theta, matrix=True):
        vals = np.empty((radii.size, directions))
        for k, r in enumerate(radii):
            rho = (r if scale_rho else 1.0) * rho_hat
            theta = (r if scale_theta else 1.0) * theta_hat
            vals[k] = evaluate(fn, rho, theta, matrix, label)
        orders = _fit_orders(radii, vals)
        worst = int(np.argmin(orders))
        denom = radii[:, None]
        constant = float(np.max(vals / denom)) if np.any(vals > 0) else 0.0
        fitted = float(np.min(orders))
        point = (
            (radii[-1] if scale_rho else 1.0) * rho_hat[worst],
            (radii[-1] if scale_theta else 1.0) * theta_hat[worst],
        )
        return ConditionCheck(
            name=label,
            satisfied=bool(fitted >= 1.0 - tol),
            fitted_order=fitted,
            worst_point=point,
            constant=constant,
        )

    c_a1 = condition("A1", system.A1, True, True)
    c_a2 = condition("A2", system.A2, True, False)
    c_a3 = condition("A3", system.A3, False, True)

    # F needs order >= 1 in each factor separately.
    c_f_rho = condition("F|rho", system.F, True, False, matrix=False)
    c_f_theta = condition("F|theta", system.F, False, True, matrix=False)
    diag = np.empty((radii.size, directions))
    for k, r in enumerate(radii):
        diag[k] = evaluate(system.F, r * rho_hat, r * theta_hat, False, "F")
    const_f = float(np.max(diag / (radii ** 2)[:, None])) if np.any(diag > 0) else 0.0
    worse = c_f_rho if c_f_rho.fitted_order <= c_f_theta.fitted_order else c_f_theta
    c_f = ConditionCheck(
        name="F",
        satisfied=c_f_rho.satisfied and c_f_theta.satisfied,
        fitted_order=worse.fitted_order,
        worst_point=worse.worst_point,
        constant=const_f,
    )

    return StructureReport(
        a1=c_a1, a2=c_a2, a3=c_a3, f=c_f,
        radii=tuple(float(r) for r in radii),
        directions=directions, tol=tol,
    )


# ---------------------------------------------------------------------------
# hyperbolicity along the traveling wave
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HyperbolicityReport:
    """Minimum eigenvalues of 1 - A1 - A2 and 1 - A1 along the wave."""

    lam: float
    argmin_xi: float
    min_1_minus_a1_a2: float
    min_1_minus_a1: float


def _background_a1_a2(system, profile, xi_grid):
    xi_grid = np.asarray(xi_grid, dtype=float)
    fp = np.asarray(profile.f1(xi_grid), dtype=float)
    if fp.ndim == 1:
        fp = fp[:, None]
    zeros = np.zeros_like(fp)
    a1 = np.asarray(system.A1(fp, zeros), dtype=float)
    a2 = np.asarray(system.A2(fp, zeros), dtype=float)
    for label, m in (("A1", a1), ("A2", a2)):
        _assert_symmetric(label, m)
    return xi_grid, a1, a2


def hyperbolicity_margin(system: CoefficientSet, profile, xi_grid) -> HyperbolicityReport:
    """Minimum eigenvalues of 1 - A1(f',0) - A2(f',0) and 1 - A1(f',0)."""
    xi_grid, a1, a2 = _background_a1_a2(system, profile, xi_grid)
    eye = np.eye(system.n)
    m12 = np.linalg.eigvalsh(eye - a1 - a2).min(axis=-1)
    m1 = np.linalg.eigvalsh(eye - a1).min(axis=-1)
    k12, k1 = int(np.argmin(m12)), int(np.argmin(m1))
    if m12[k12] <= m1[k1]:
        lam, arg = float(m12[k12]), float(xi_grid[k12])
    else:
        lam, arg = float(m1[k1]), float(xi_grid[k1])
    return HyperbolicityReport(
        lam=lam,
        argmin_xi=arg,
        min_1_minus_a1_a2=float(m12[k12]),
        min_1_minus_a1=float(m1[k1]),
    )


# ---------------------------------------------------------------------------
# Cartesian reformulation
# ---------------------------------------------------------------------------


def cartesian_coefficients(system: CoefficientSet, profile, xi, u_xi, u_eta):
    """Coefficients of a00 u_tt = a11 u_xx + a_cross u_tx + source.

    With At_i = A_i(f'(xi) + u_xi, u_eta):

        a00     = 1 - At_1 - At_2 - At_3
        a11     = 1 - At_1 + At_2 + At_3
        a_cross = 2 (At_3 - At_2)
        source  = At_3 f''(xi) + F(f'(xi) + u_xi, u_eta)

    which is the null-form system rewritten through u_{xi eta} = u_tt - u_xx,
    u_{xi xi} = u_tt + 2 u_tx + u_xx, u_{eta eta} = u_tt - 2 u_tx + u_xx.
    """
    xi = np.asarray(xi, dtype=float)
    u_xi = np.asarray(u_xi, dtype=float)
    u_eta = np.asarray(u_eta, dtype=float)
    fp = np.asarray(profile.f1(xi), dtype=float)
    fpp = np.asarray(profile.f2(xi), dtype=float)
    if fp.ndim == u_xi.ndim - 1:
        fp = fp[..., None]
        fpp = fpp[..., None]
    rho = fp + u_xi
    theta = u_eta
    eye = np.eye(system.n)
    a1 = np.asarray(system.A1(rho, theta), dtype=float)
    a2 = np.asarray(system.A2(rho, theta), dtype=float)
    a3 = np.asarray(system.A3(rho, theta), dtype=float)
    a00 = eye - a1 - a2 - a3
    a11 = eye - a1 + a2 + a3
    a_cross = 2.0 * (a3 - a2)
    source = np.einsum("...ij,...j->...i", a3, fpp) + np.asarray(
        system.F(rho, theta), dtype=float
    )
    return a00, a11, a_cross, source


def max_characteristic_speed(a00, a11, a_cross):
    """Per-point maximum modulus of roots s of a00 s^2 + a_cross s - a11 = 0.

    Plane waves u = G(x - s t) of the frozen-coefficient principal part give
    the quadratic (matrix) pencil; n = 1 uses the closed form, larger systems
    a companion linearization.  Points where the pencil is degenerate (a00
    nearly singular) report +inf.
    """
    a00 = np.asarray(a00, dtype=float)
    a11 = np.asarray(a11, dtype=float)
    a_cross = np.asarray(a_cross, dtype=float)
    n = a00.shape[-1]
    if n == 1:
        A = a00[..., 0, 0]
        B = a11[..., 0, 0]
        C = a_cross[..., 0, 0]
        disc = C * C + 4.0 * A * B
        out = np.full(A.shape, np.inf)
        ok = (np.abs(A) > 1e-14) & (disc >= 0.0)
        root = np.sqrt(np.where(disc >= 0, disc, 0.0))
        denom = np.where(ok, 2.0 * A, 1.0)
        s1 = np.abs((-C + root) / denom)
        s2 = np.abs((-C - root) / denom)
        out[ok] = np.maximum(s1, s2)[ok]
        return out
    eye = np.eye(n)
    shape = a00.shape[:-2]
    flat = int(np.prod(shape)) if shape else 1
    a00f = a00.reshape(flat, n, n)
    a11f = a11.reshape(flat, n, n)
    acf = a_cross.reshape(flat, n, n)
    out = np.empty(flat)
    for k in range(flat):
        try:
            m_b = np.linalg.solve(a00f[k], a11f[k])
            m_c = np.linalg.solve(a00f[k], acf[k])
        except np.linalg.LinAlgError:
            out[k] = np.inf
            continue
        comp = np.zeros((2 * n, 2 * n))
        comp[:n, n:] = eye
        comp[n:, :n] = m_b
        comp[n:, n:] = m_c
        roots = np.linalg.eigvals(comp)
        if np.max(np.abs(roots.imag)) > 1e-8 * (1.0 + np.max(np.abs(roots))):
            out[k] = np.inf
        else:
            out[k] = np.max(np.abs(roots.real))
    return out.reshape(shape) if shape else float(out[0])


# ---------------------------------------------------------------------------
# Galilean boost
# ---------------------------------------------------------------------------


def find_boost(system: CoefficientSet, profile, xi_grid, margin: float = 0.01) -> float:
    """Smallest boost speed c on the search ladder restoring positivity.

    Returns 0 when 1 - A1 + A2 is already positive definite with the given
    margin (the untransformed coefficients then satisfy both positivity
    conditions).  Otherwise walks the ladder 0.1, ..., 0.9, 0.99, 0.999,
    0.9999 until the boosted conditions

        (1+c)^2 [1 - A1 - A2]                      > margin,
        (1-c) [(1+c)(1 - A1) + (1-c) A2]           > margin

    hold over the grid, then refines one decade below the first passing
    rung.  Raises :class:`NoBoostFoundError` when the ladder is exhausted.
    """
    _, a1, a2 = _background_a1_a2(system, profile, xi_grid)
    eye = np.eye(system.n)
    m_hyp = eye - a1 - a2
    m_wave = eye - a1

    def passes(c: float) -> bool:
        lhs1 = (1.0 + c) ** 2 * m_hyp
        lhs2 = (1.0 - c) * ((1.0 + c) * m_wave + (1.0 - c) * a2)
        low1 = np.linalg.eigvalsh(lhs1).min()
        low2 = np.linalg.eigvalsh(lhs2).min()
        return min(low1, low2) > margin

    ladder = [0.0] + [0.1 * k for k in range(1, 10)] + [0.99, 0.999, 0.9999]
    prev = None
    for c in ladder:
        if passes(c):
            if prev is None or c == 0.0:
                return 0.0 if c == 0.0 else c
            step = (c - prev) / 10.0
            fine = prev + step
            while fine < c - 1e-15:
                if passes(fine):
                    return float(round(fine, 12))
                fine += step
            return c
        prev = c
    raise NoBoostFoundError(
        f"no boost speed on the ladder meets margin {margin}"
    )


@dataclass(frozen=True)
class BoostMap:
    """Affine change of variables t_bar = (1+c) t, x_bar = x + c t."""

    c: float

    def to_bar(self, t, x):
        t = np.asarray(t, dtype=float)
        x = np.asarray(x, dtype=float)
        return ((1.0 + self.c) * t)[()], (x + self.c * t)[()]

    def from_bar(self, t_bar, x_bar):
        t_bar = np.asarray(t_bar, dtype=float)
        x_bar = np.asarray(x_bar, dtype=float)
        t = t_bar / (1.0 + self.c)
        return t[()], (x_bar - self.c * t)[()]


def boost_grid(grid, c: float):
    """Transformed grid covering the boosted image of a direct-frame run.

    Keeps the spatial spacing; extends the right edge so every point
    (t, x) with 0 <= t <= t_end maps inside, and stretches t_end by (1+c).
    Returns the new grid and the invertible point map.
    """
    if not 0.0 <= c < 1.0:
        raise ValueError("boost speed must lie in [0, 1)")
    mapping = BoostMap(c)
    if c == 0.0:
        return grid, mapping
    extra = c * grid.t_end
    pad = math.ceil(extra / grid.h) * grid.h
    new_grid = grid.replace(
        x_max=grid.x_max + pad,
        nx=grid.nx + int(round(pad / grid.h)),
        t_end=(1.0 + c) * grid.t_end,
        dt=None,
    )
    return new_grid, mapping
