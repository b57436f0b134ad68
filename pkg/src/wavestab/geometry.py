"""Null-coordinate transforms, discrete null-derivative calculus, and
quadrature over characteristic spacetime regions.

Conventions used throughout:

    xi  = (t + x) / 2        d_xi  = d_t + d_x
    eta = (t - x) / 2        d_eta = d_t - d_x

so ``t = xi + eta`` and ``x = xi - eta``.  The operator
``Z^a = d_xi^{a1} d_eta^{a2}`` is realized on gridded fields by expanding the
null vector fields into Cartesian partials: spatial derivatives use 4th-order
centered stencils, time derivatives of order >= 2 are eliminated through the
evolution equation (the state exposes ``u_tt`` as a callable), and the single
pure third-order time derivative is obtained by differencing the substituted
``u_tt`` across the stored time levels.

Line integrals over the leftward characteristic segment C^- carry the
Euclidean sqrt(2) factor; slice and region integrals are plain dx and dx dt.
Integrals whose exact extent is unbounded are truncated at the grid edge,
which is exact under the solver's compact-support policy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    HaloExhaustedError,
    InsufficientHistoryError,
    RegionOutsideDomainError,
)

__all__ = [
    "NullPoint",
    "MultiIndex",
    "RegionKind",
    "RegionSpec",
    "SampledField",
    "bracket",
    "to_null",
    "from_null",
    "d1",
    "d2",
    "dx_power",
    "apply_null_derivative",
    "integrate_region",
    "fubini_residual",
]


def bracket(x):
    """Japanese bracket <x> = (1 + x^2)^(1/2), elementwise."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(1.0 + x * x)


@dataclass(frozen=True)
class NullPoint:
    """A point in null coordinates; fields may be scalars or arrays."""

    xi: float
    eta: float


def to_null(t, x) -> NullPoint:
    """Map Cartesian (t, x) to null coordinates ((t+x)/2, (t-x)/2)."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    return NullPoint(xi=((t + x) / 2.0)[()], eta=((t - x) / 2.0)[()])


def from_null(p: NullPoint):
    """Inverse of :func:`to_null`: returns (t, x) = (xi + eta, xi - eta)."""
    xi = np.asarray(p.xi, dtype=float)
    eta = np.asarray(p.eta, dtype=float)
    return (xi + eta)[()], (xi - eta)[()]


class MultiIndex:
    """Multi-index a = (a1, a2) for Z^a = d_xi^{a1} d_eta^{a2}, |a| <= 3."""

    __slots__ = ("a1", "a2")

    def __init__(self, a1: int, a2: int):
        if a1 < 0 or a2 < 0:
            raise ValueError("multi-index entries must be nonnegative")
        if a1 + a2 > 3:
            raise ValueError("only |a| <= 3 is supported")
        object.__setattr__(self, "a1", int(a1))
        object.__setattr__(self, "a2", int(a2))

    def __setattr__(self, *args):
        raise AttributeError("MultiIndex is immutable")

    @property
    def order(self) -> int:
        return self.a1 + self.a2

    def __iter__(self):
        return iter((self.a1, self.a2))

    def __eq__(self, other):
        other = MultiIndex(*other) if not isinstance(other, MultiIndex) else other
        return (self.a1, self.a2) == (other.a1, other.a2)

    def __hash__(self):
        return hash((self.a1, self.a2))

    def __repr__(self):
        return f"MultiIndex({self.a1}, {self.a2})"


# ---------------------------------------------------------------------------
# finite-difference stencils
# ---------------------------------------------------------------------------


def _shifted(v: np.ndarray, k: int, bc: str) -> np.ndarray:
    """v evaluated k nodes to the right, with zero or periodic extension."""
    if k == 0:
        return v
    if bc == "periodic":
        return np.roll(v, -k, axis=0)
    out = np.zeros_like(v)
    if k > 0:
        out[:-k] = v[k:]
    else:
        out[-k:] = v[:k]
    return out


def d1(v: np.ndarray, h: float, bc: str = "compact") -> np.ndarray:
    """4th-order centered first derivative along axis 0."""
    return (
        -_shifted(v, 2, bc)
        + 8.0 * _shifted(v, 1, bc)
        - 8.0 * _shifted(v, -1, bc)
        + _shifted(v, -2, bc)
    ) / (12.0 * h)


def d2(v: np.ndarray, h: float, bc: str = "compact") -> np.ndarray:
    """4th-order centered second derivative along axis 0."""
    return (
        -_shifted(v, 2, bc)
        + 16.0 * _shifted(v, 1, bc)
        - 30.0 * v
        + 16.0 * _shifted(v, -1, bc)
        - _shifted(v, -2, bc)
    ) / (12.0 * h * h)


def dx_power(v: np.ndarray, q: int, h: float, bc: str = "compact") -> np.ndarray:
    """q-fold application of the 4th-order first-derivative stencil."""
    for _ in range(q):
        v = d1(v, h, bc)
    return v


# ---------------------------------------------------------------------------
# Z^a on simulation states
# ---------------------------------------------------------------------------


def _binomial_terms(a1: int, a2: int):
    """Expansion of (d_t + d_x)^{a1} (d_t - d_x)^{a2} into d_t^p d_x^q."""
    terms = []
    for i in range(a1 + 1):
        for j in range(a2 + 1):
            coeff = math.comb(a1, i) * math.comb(a2, j) * (-1) ** (a2 - j)
            terms.append((float(coeff), i + j, (a1 - i) + (a2 - j)))
    return terms


def _check_halo_quiet(state, width: int, tol: float = 1e-8):
    scale = max(np.abs(state.u).max(), np.abs(state.w).max(), 1.0)
    for arr in (state.u, state.w):
        edge = max(np.abs(arr[:width]).max(), np.abs(arr[-width:]).max())
        if edge > tol * scale:
            raise HaloExhaustedError(
                f"field magnitude {edge:.3e} within {width} nodes of the "
                f"boundary; zero-extended stencils are invalid"
            )


def apply_null_derivative(state, a, cache: dict | None = None) -> np.ndarray:
    """Z^a u at the state's current time level.

    ``state`` must expose ``u``, ``w`` (= u_t), ``grid`` (with ``h`` and
    ``bc``), and for |a| >= 2 the substituted second time derivative via
    ``utt_level(i)`` together with ``history_times()`` (ascending, the last
    entry being the current time).  Pure third-order time derivatives use a
    3-point differentiation of u_tt across the stored levels.

    ``cache`` may be a dict shared across calls at one fixed state to avoid
    recomputing mixed Cartesian derivatives; never reuse it after the state
    advances.
    """
    if not isinstance(a, MultiIndex):
        a = MultiIndex(*a)
    h = state.grid.h
    bc = state.grid.bc
    order = a.order
    if order == 0:
        return state.u.copy()
    if bc == "compact":
        _check_halo_quiet(state, width=2 * order)

    if cache is None:
        cache = {}

    def dt_pow_dx_pow(p: int, q: int) -> np.ndarray:
        key = (p, q)
        if key in cache:
            return cache[key]
        if p == 0:
            out = dx_power(state.u, q, h, bc)
        elif p == 1:
            out = dx_power(state.w, q, h, bc)
        elif p == 2:
            out = dx_power(_utt(state, -1), q, h, bc)
        elif p == 3:
            times = np.asarray(state.history_times(), dtype=float)
            if times.size < 3:
                raise InsufficientHistoryError(
                    "third-order time derivative needs 3 stored levels"
                )
            ts = times[-3:]
            wts = _lagrange_derivative_weights(ts, ts[-1])
            out = sum(
                wt * _utt(state, i - 3) for i, wt in enumerate(wts) if wt != 0.0
            )
            if q:
                out = dx_power(out, q, h, bc)
        else:  # pragma: no cover - excluded by the |a| <= 3 constraint
            raise InsufficientHistoryError(f"time-derivative order {p} unsupported")
        cache[key] = out
        return out

    total = np.zeros_like(state.u)
    for coeff, p, q in _binomial_terms(a.a1, a.a2):
        total = total + coeff * dt_pow_dx_pow(p, q)
    return total


def _utt(state, level: int) -> np.ndarray:
    utt_fn = getattr(state, "utt_level", None)
    if utt_fn is None:
        raise InsufficientHistoryError(
            "state does not expose u_tt; derivatives of order >= 2 need the "
            "evolution equation"
        )
    return utt_fn(level)


def _lagrange_derivative_weights(nodes: np.ndarray, at: float) -> np.ndarray:
    """Weights w_i with sum_i w_i f(nodes_i) = f'(at) for the interpolant."""
    n = len(nodes)
    wts = np.zeros(n)
    for i in range(n):
        others = [nodes[j] for j in range(n) if j != i]
        denom = np.prod([nodes[i] - xj for xj in others])
        num = 0.0
        for k in range(len(others)):
            num += np.prod([at - xj for m, xj in enumerate(others) if m != k])
        wts[i] = num / denom
    return wts


# ---------------------------------------------------------------------------
# spacetime regions and quadrature
# ---------------------------------------------------------------------------


class RegionKind(Enum):
    SEGMENT_C = "segment-c"
    SLICE_SIGMA_MINUS = "slice-sigma-minus"
    REGION_S_MINUS = "region-s-minus"
    SLICE_SIGMA = "slice-sigma"
    STRIP_S = "strip-s"


@dataclass(frozen=True)
class RegionSpec:
    """One of the spacetime regions C^-, Sigma^-, S^-, Sigma_t, S_t.

    ``xi0`` is required for the three "minus" kinds and ignored otherwise.
    """

    kind: RegionKind
    t0: float
    xi0: float | None = None

    def __post_init__(self):
        if self.t0 < 0:
            raise ValueError("t0 must be nonnegative")
        needs_xi = self.kind in (
            RegionKind.SEGMENT_C,
            RegionKind.SLICE_SIGMA_MINUS,
            RegionKind.REGION_S_MINUS,
        )
        if needs_xi and self.xi0 is None:
            raise ValueError(f"{self.kind.value} requires xi0")


class SampledField:
    """A scalar field stored on time slices of a fixed spatial grid.

    Values are linearly interpolated in x and in t; points outside the
    spatial grid evaluate to zero, consistent with the compact-support
    truncation policy.
    """

    def __init__(self, ts, xs, vals):
        self.ts = np.asarray(ts, dtype=float)
        self.xs = np.asarray(xs, dtype=float)
        self.vals = np.asarray(vals, dtype=float)
        if self.vals.shape != (self.ts.size, self.xs.size):
            raise ValueError("vals must have shape (len(ts), len(xs))")
        if self.ts.size >= 2 and not np.all(np.diff(self.ts) > 0):
            raise ValueError("ts must be strictly increasing")

    @classmethod
    def from_callable(cls, fn, ts, xs):
        ts = np.asarray(ts, dtype=float)
        xs = np.asarray(xs, dtype=float)
        tt, xx = np.meshgrid(ts, xs, indexing="ij")
        return cls(ts, xs, np.asarray(fn(tt, xx), dtype=float))

    def _time_weights(self, t: float):
        ts = self.ts
        if t < ts[0] - 1e-12 or t > ts[-1] + 1e-12:
            raise RegionOutsideDomainError(
                f"time {t} outside stored trajectory [{ts[0]}, {ts[-1]}]"
            )
        k = int(np.clip(np.searchsorted(ts, t) - 1, 0, ts.size - 2)) if ts.size > 1 else 0
        if ts.size == 1:
            return 0, 0, 0.0
        frac = (t - ts[k]) / (ts[k + 1] - ts[k])
        return k, k + 1, float(np.clip(frac, 0.0, 1.0))

    def slice_at(self, t: float) -> np.ndarray:
        k0, k1, frac = self._time_weights(t)
        return (1.0 - frac) * self.vals[k0] + frac * self.vals[k1]

    def at_points(self, t: float, x: np.ndarray) -> np.ndarray:
        """Bilinear sample at (t, x_i); zero outside the spatial grid."""
        row = self.slice_at(t)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.interp(x, self.xs, row, left=0.0, right=0.0)
        return out


def _trapz_until(xs: np.ndarray, vals: np.ndarray, x_cut: float) -> float:
    """Trapezoid of vals over {x <= x_cut}, with a partial final cell."""
    if x_cut <= xs[0]:
        return 0.0
    if x_cut >= xs[-1]:
        return float(np.trapezoid(vals, xs))
    k = int(np.searchsorted(xs, x_cut)) - 1
    total = float(np.trapezoid(vals[: k + 1], xs[: k + 1])) if k >= 1 else 0.0
    frac = (x_cut - xs[k]) / (xs[k + 1] - xs[k])
    v_cut = (1.0 - frac) * vals[k] + frac * vals[k + 1]
    total += 0.5 * (vals[k] + v_cut) * (x_cut - xs[k])
    return total


def _region_times(field: SampledField, t0: float) -> np.ndarray:
    ts = field.ts[field.ts <= t0 + 1e-12]
    if ts.size == 0 or t0 > field.ts[-1] + 1e-12:
        raise RegionOutsideDomainError(
            f"trajectory does not cover [0, {t0}]"
        )
    if ts[-1] < t0 - 1e-12:
        ts = np.append(ts, t0)
    return ts


def integrate_region(field: SampledField, region: RegionSpec) -> float:
    """Integrate a stored scalar field over one of the spacetime regions.

    Segment integrals carry the Euclidean sqrt(2) factor; slice integrals
    are dx; region integrals are dx dt (trapezoid across the stored times).
    """
    t0, xi0 = region.t0, region.xi0
    kind = region.kind

    if kind == RegionKind.SLICE_SIGMA:
        return float(np.trapezoid(field.slice_at(t0), field.xs))

    if kind == RegionKind.SLICE_SIGMA_MINUS:
        return _trapz_until(field.xs, field.slice_at(t0), 2.0 * xi0 - t0)

    if kind == RegionKind.SEGMENT_C:
        ts = _region_times(field, t0)
        vals = np.array([field.at_points(t, 2.0 * xi0 - t)[0] for t in ts])
        return float(math.sqrt(2.0) * np.trapezoid(vals, ts))

    if kind == RegionKind.REGION_S_MINUS:
        ts = _region_times(field, t0)
        slices = np.array(
            [_trapz_until(field.xs, field.slice_at(t), 2.0 * xi0 - t) for t in ts]
        )
        return float(np.trapezoid(slices, ts))

    if kind == RegionKind.STRIP_S:
        ts = _region_times(field, t0)
        slices = np.array([np.trapezoid(field.slice_at(t), field.xs) for t in ts])
        return float(np.trapezoid(slices, ts))

    raise ValueError(f"unknown region kind {kind!r}")  # pragma: no cover


def _simpson_nodes(a: float, b: float, n: int):
    """n (odd) Simpson nodes and weights on [a, b]."""
    if n % 2 == 0:
        n += 1
    xs = np.linspace(a, b, n)
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= (b - a) / (n - 1) / 3.0
    return xs, w


def fubini_residual(w, t0: float, xi0: float, *, x_min: float | None = None,
                    nodes: int = 801, return_parts: bool = False):
    """|integral of w over S^-  -  sqrt(2) * iterated characteristic integral|.

    The two sides are computed with genuinely different quadrature point
    sets so that their agreement is a check of the Fubini identity rather
    than an arithmetic tautology.

    ``w`` may be a vectorized callable ``w(t, x)`` (the identity is then
    checked with fixed-step Simpson quadrature at the requested node count)
    or a :class:`SampledField` (trapezoid on the stored grid; accuracy is
    then limited by the grid resolution).
    """
    if isinstance(w, SampledField):
        lhs = integrate_region(w, RegionSpec(RegionKind.REGION_S_MINUS, t0, xi0))
        xi_lo = w.xs[0] / 2.0
        step = (w.xs[1] - w.xs[0]) / 2.0
        xi_grid = np.arange(xi_lo, xi0 + step / 2, step)
        lines = np.array(
            [
                integrate_region(w, RegionSpec(RegionKind.SEGMENT_C, t0, xi))
                for xi in xi_grid
            ]
        )
        rhs = math.sqrt(2.0) * float(np.trapezoid(lines, xi_grid))
    else:
        if x_min is None:
            raise ValueError("x_min is required for callable fields")
        # Left side: iterated Simpson directly in (t, x).
        t_nodes, t_wts = _simpson_nodes(0.0, t0, nodes)
        lhs = 0.0
        for t, wt in zip(t_nodes, t_wts):
            x_nodes, x_wts = _simpson_nodes(x_min, 2.0 * xi0 - t, nodes)
            lhs += wt * float(np.dot(x_wts, w(np.full_like(x_nodes, t), x_nodes)))
        # Right side: sqrt(2) * integral over xi of the C^- line integrals,
        # each sampled along the characteristic x = 2 xi - t.
        xi_nodes, xi_wts = _simpson_nodes(x_min / 2.0, xi0, nodes)
        tt, _ = _simpson_nodes(0.0, t0, nodes)
        _, tw = _simpson_nodes(0.0, t0, nodes)
        tt_grid = tt[None, :]
        xx_grid = 2.0 * xi_nodes[:, None] - tt_grid
        vals = w(np.broadcast_to(tt_grid, xx_grid.shape), xx_grid)
        lines = math.sqrt(2.0) * vals @ tw
        rhs = math.sqrt(2.0) * float(np.dot(xi_wts, lines))

    residual = abs(lhs - rhs)
    if return_parts:
        return residual, float(lhs), float(rhs)
    return residual
