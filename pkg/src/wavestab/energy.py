"""Weighted energies, weight functions, and integral-inequality checks.

The hierarchy tracked along a solution consists of seven slice components,

    Ebar_k: <eta>^(1+delta)-weighted L2 norms of Z^a u_eta, |a| = k - 1,
    Ehat_k: <xi>^(1+delta)-weighted L2 norms of Z^a u_xi,  |a| = k - 1,

for k = 1, 2, 3, with the two mixed third-order derivatives split off into a
separate component Etilde3 (the <eta>-weighted d_xi^2 d_eta u piece together
with the <xi>-weighted d_xi d_eta^2 u piece).  Each slice component has a
spacetime companion obtained by damping the integrand with the opposite
bracket to the power -(1+delta) and integrating in time, which is what makes
the spacetime norms finite without smallness of the slice norms.

The module also provides the polynomial weight phi = <x>^(2+2delta), the
bounded integrating factor psi = exp(-int_{-inf}^x <r>^(-1-delta) dr), the
initial-data smallness functional, and numerical verification helpers for
the Gronwall-type inequality and the weighted Sobolev bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.special import gamma as gamma_fn
from scipy.special import hyp2f1

from .errors import HypothesisViolationError, SupportViolationError
from .geometry import apply_null_derivative, bracket, dx_power

__all__ = [
    "WeightSet",
    "EnergyConfig",
    "EnergyReport",
    "COMPONENT_NAMES",
    "make_weights",
    "eval_psi",
    "slice_energy",
    "accumulate_spacetime",
    "initial_smallness",
    "gronwall_verify",
    "sobolev_check",
]


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


class WeightSet:
    """The pair of multiplier weights at a fixed decay rate delta in (0, 1].

    phi is the growing polynomial weight <x>^(2+2delta) whose derivative
    satisfies |phi'| <= 4 <x>^(1+2delta); psi is the decreasing integrating
    factor exp(-S(x)) with S(x) = int_{-inf}^x <r>^(-1-delta) dr, bounded
    between 1/c_lower and 1 where c_lower = exp(S(inf)).  S has the closed
    form S(x) = S(inf)/2 + x 2F1(1/2, (1+delta)/2; 3/2; -x^2), so all
    evaluations are pointwise exact up to special-function accuracy.
    """

    def __init__(self, delta: float):
        delta = float(delta)
        if not 0.0 < delta <= 1.0:
            raise ValueError("delta must lie in (0, 1]")
        self.delta = delta
        self.total_mass = float(
            math.sqrt(math.pi) * gamma_fn(delta / 2.0) / gamma_fn((1.0 + delta) / 2.0)
        )
        self.c_lower = float(math.exp(self.total_mass))

    def phi(self, x):
        return bracket(x) ** (2.0 + 2.0 * self.delta)

    def phi_prime(self, x):
        x = np.asarray(x, dtype=float)
        return (2.0 + 2.0 * self.delta) * x * bracket(x) ** (2.0 * self.delta)

    def cumulative(self, x):
        """S(x) = int_{-inf}^x <r>^(-1-delta) dr."""
        x = np.asarray(x, dtype=float)
        s = 0.5 * (1.0 + self.delta)
        out = 0.5 * self.total_mass + x * hyp2f1(0.5, s, 1.5, -x * x)
        return out[()]

    def psi(self, x):
        return np.exp(-self.cumulative(x))

    def psi_prime(self, x):
        return -self.psi(x) * bracket(x) ** (-1.0 - self.delta)

    def __repr__(self):
        return f"WeightSet(delta={self.delta})"


def make_weights(delta: float) -> WeightSet:
    return WeightSet(delta)


_PSI_CACHE: dict = {}


def eval_psi(delta: float, x):
    """psi(x) for the given delta, with the WeightSet cached per delta."""
    key = float(delta)
    ws = _PSI_CACHE.get(key)
    if ws is None:
        ws = WeightSet(key)
        _PSI_CACHE[key] = ws
    return ws.psi(x)


# ---------------------------------------------------------------------------
# slice and spacetime energies
# ---------------------------------------------------------------------------

# Each component is a sum of squared-L2 pieces; a piece is (weight kind,
# multi-index), where kind "eta" means the <eta>^(1+delta) weight (and a
# <xi>^-(1+delta) damping factor in the spacetime companion) and "xi" the
# mirror-image choice.
_PIECES = {
    "Ebar1": (("eta", (0, 1)),),
    "Ehat1": (("xi", (1, 0)),),
    "Ebar2": (("eta", (1, 1)), ("eta", (0, 2))),
    "Ehat2": (("xi", (2, 0)), ("xi", (1, 1))),
    "Ebar3": (("eta", (1, 2)), ("eta", (0, 3))),
    "Ehat3": (("xi", (2, 1)), ("xi", (3, 0))),
    "Etilde3": (("eta", (2, 1)), ("xi", (1, 2))),
}

COMPONENT_NAMES = tuple(_PIECES)

_ORDER_OF = {
    "Ebar1": 1, "Ehat1": 1,
    "Ebar2": 2, "Ehat2": 2,
    "Ebar3": 3, "Ehat3": 3, "Etilde3": 3,
}


@dataclass(frozen=True)
class EnergyConfig:
    """How the run loop tracks energies.

    ``row_stride`` controls which reports are retained in the trajectory
    (spacetime accumulation still happens every step).
    """

    delta: float = 0.5
    row_stride: int = 1
    track: bool = True


@dataclass(frozen=True)
class EnergyReport:
    """All slice components, their running spacetime companions, and totals."""

    t: float
    Ebar1: float
    Ehat1: float
    Ebar2: float
    Ehat2: float
    Ebar3: float
    Ehat3: float
    Etilde3: float
    E_total: float
    SEbar1: float = 0.0
    SEhat1: float = 0.0
    SEbar2: float = 0.0
    SEhat2: float = 0.0
    SEbar3: float = 0.0
    SEhat3: float = 0.0
    SEtilde3: float = 0.0
    SE_total: float = 0.0
    st_integrands: tuple = field(default=(0.0,) * 7, repr=False, compare=False)


def _component_values(state, weights):
    """Slice values and spacetime integrands for all seven components."""
    x = np.asarray(state.grid.x, dtype=float)
    t = float(state.t)
    xi = 0.5 * (t + x)
    eta = 0.5 * (t - x)
    p = 1.0 + weights.delta
    w2 = {"eta": bracket(eta) ** (2.0 * p), "xi": bracket(xi) ** (2.0 * p)}
    damp = {"eta": bracket(xi) ** (-p), "xi": bracket(eta) ** (-p)}

    cache: dict = {}
    slice_vals = {}
    st_vals = {}
    for name, pieces in _PIECES.items():
        e = 0.0
        se = 0.0
        for kind, a in pieces:
            v = apply_null_derivative(state, a, cache=cache)
            sq = np.sum(v * v, axis=-1)
            e += float(np.trapezoid(w2[kind] * sq, x))
            se += float(np.trapezoid(w2[kind] * damp[kind] * sq, x))
        slice_vals[name] = e
        st_vals[name] = se
    return slice_vals, st_vals


def slice_energy(state, weights: WeightSet, order: int) -> dict:
    """The slice components of one order: {1, 2, 3} -> two or three values."""
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2, or 3")
    names = [n for n, k in _ORDER_OF.items() if k == order]
    x = np.asarray(state.grid.x, dtype=float)
    t = float(state.t)
    xi = 0.5 * (t + x)
    eta = 0.5 * (t - x)
    p = 1.0 + weights.delta
    w2 = {"eta": bracket(eta) ** (2.0 * p), "xi": bracket(xi) ** (2.0 * p)}
    cache: dict = {}
    out = {}
    for name in names:
        e = 0.0
        for kind, a in _PIECES[name]:
            v = apply_null_derivative(state, a, cache=cache)
            e += float(np.trapezoid(w2[kind] * np.sum(v * v, axis=-1), x))
        out[name] = e
    return out


def accumulate_spacetime(prev: EnergyReport | None, state, weights: WeightSet,
                         dt: float | None = None) -> EnergyReport:
    """Slice report at the state's time plus trapezoid-advanced spacetime sums.

    Pass ``prev=None`` for the first slice (spacetime sums start at zero);
    subsequent calls add 0.5 dt (previous integrand + current integrand) to
    each component, with dt defaulting to the time difference between the
    reports.
    """
    vals, integ = _component_values(state, weights)
    integrands = tuple(integ[n] for n in COMPONENT_NAMES)
    t = float(state.t)
    if prev is None:
        se = {n: 0.0 for n in COMPONENT_NAMES}
    else:
        if dt is None:
            dt = t - prev.t
        if dt < 0:
            raise ValueError("states must be fed in increasing time order")
        se = {}
        for k, n in enumerate(COMPONENT_NAMES):
            se[n] = getattr(prev, "SE" + n[1:]) + 0.5 * dt * (
                prev.st_integrands[k] + integrands[k]
            )
    return EnergyReport(
        t=t,
        **vals,
        E_total=sum(vals.values()),
        **{"SE" + n[1:]: se[n] for n in COMPONENT_NAMES},
        SE_total=sum(se.values()),
        st_integrands=integrands,
    )


# ---------------------------------------------------------------------------
# initial-data smallness
# ---------------------------------------------------------------------------


def initial_smallness(u0, u1, delta: float, l_max: int, grid) -> float:
    """The weighted-Sobolev size of initial data (u0, u1),

        sum_{l=0}^{l_max} ( ||<x>^(1+delta) d_x^(l+1) u0||_L2
                          + ||<x>^(1+delta) d_x^l     u1||_L2 ).

    u0 only enters through its gradient, so constant shifts are free.  Data
    must be quiet near the boundary when the grid is zero-extended.
    """
    x = np.asarray(grid.x, dtype=float)
    u0 = np.asarray(u0, dtype=float)
    u1 = np.asarray(u1, dtype=float)
    if u0.ndim == 1:
        u0 = u0[:, None]
    if u1.ndim == 1:
        u1 = u1[:, None]
    if l_max < 0:
        raise ValueError("l_max must be nonnegative")

    if grid.bc == "compact":
        # only the gradient of u0 enters, so remove the edge plateau before
        # differencing; zero-extended stencils then see genuinely quiet data
        u0 = u0 - u0[0]
        scale = max(np.abs(u0).max(), np.abs(u1).max())
        if scale > 0.0:
            edge = max(
                np.abs(u1[:4]).max(), np.abs(u1[-4:]).max(),
                np.abs(u0[:4]).max(), np.abs(u0[-4:]).max(),
            )
            if edge > 1e-8 * scale:
                raise SupportViolationError(
                    "initial data is not quiet near the grid boundary"
                )

    w = bracket(x) ** (1.0 + delta)

    def weighted_l2(v):
        return math.sqrt(float(np.trapezoid(w * w * np.sum(v * v, axis=-1), x)))

    eps = 0.0
    for l in range(l_max + 1):
        eps += weighted_l2(dx_power(u0, l + 1, grid.h, grid.bc))
        eps += weighted_l2(dx_power(u1, l, grid.h, grid.bc))
    return float(eps)


# ---------------------------------------------------------------------------
# inequality checks
# ---------------------------------------------------------------------------


def gronwall_verify(h, alpha, beta, xi_grid):
    """Check the integral-inequality conclusion on sampled data.

    Given nonnegative samples with h <= alpha + int_{xi_min}^{xi} beta h
    (the premise, verified numerically and raised as a hypothesis violation
    when it fails), the conclusion

        h(xi) <= alpha(xi) + int_{xi_min}^{xi} alpha beta
                             exp(int_s^{xi} beta) ds

    is evaluated with cumulative trapezoids.  Returns (holds, slack) where
    slack is the minimum of bound - h over the grid and holds allows a
    1e-9-level quadrature tolerance.
    """
    xi_grid = np.asarray(xi_grid, dtype=float)
    h = np.asarray(h, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if not (h.shape == alpha.shape == beta.shape == xi_grid.shape):
        raise ValueError("h, alpha, beta, xi_grid must share one shape")
    if np.any(beta < 0):
        raise HypothesisViolationError("beta must be nonnegative")

    premise_rhs = alpha + cumulative_trapezoid(beta * h, xi_grid, initial=0.0)
    ptol = 1e-9 * (1.0 + float(np.abs(premise_rhs).max()))
    gap = h - premise_rhs
    if np.any(gap > ptol):
        k = int(np.argmax(gap))
        raise HypothesisViolationError(
            f"premise h <= alpha + int(beta h) fails at xi = {xi_grid[k]:.6g} "
            f"by {gap[k]:.3e}"
        )

    big_b = cumulative_trapezoid(beta, xi_grid, initial=0.0)
    inner = cumulative_trapezoid(alpha * beta * np.exp(-big_b), xi_grid, initial=0.0)
    bound = alpha + np.exp(big_b) * inner
    slack = float(np.min(bound - h))
    holds = bool(slack >= -1e-9 * (1.0 + float(np.abs(bound).max())))
    return holds, slack


def sobolev_check(state, weights: WeightSet):
    """Compare the weighted sup norm of (u_xi, u_eta) with the energy bound.

    Returns (lhs, rhs, ratio) with

        lhs = sup <xi>^(1+delta) |u_xi| + sup <eta>^(1+delta) |u_eta|,
        rhs = sqrt(E_1) + sqrt(E_2),

    E_k summing the bar and hat components of order k.  The inequality
    lhs <= C rhs holds with an absolute constant; the returned ratio is the
    measured quotient (zero when rhs vanishes).
    """
    x = np.asarray(state.grid.x, dtype=float)
    t = float(state.t)
    xi = 0.5 * (t + x)
    eta = 0.5 * (t - x)
    p = 1.0 + weights.delta
    cache: dict = {}
    u_xi = apply_null_derivative(state, (1, 0), cache=cache)
    u_eta = apply_null_derivative(state, (0, 1), cache=cache)
    mag_xi = np.sqrt(np.sum(u_xi * u_xi, axis=-1))
    mag_eta = np.sqrt(np.sum(u_eta * u_eta, axis=-1))
    lhs = float(np.max(bracket(xi) ** p * mag_xi) + np.max(bracket(eta) ** p * mag_eta))

    e1 = slice_energy(state, weights, 1)
    e2 = slice_energy(state, weights, 2)
    rhs = math.sqrt(sum(e1.values())) + math.sqrt(sum(e2.values()))
    ratio = lhs / rhs if rhs > 0 else 0.0
    return lhs, rhs, ratio
