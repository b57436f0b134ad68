"""Tests for null coordinates, stencils, Z^a application, and region quadrature.

The Z^a oracle is a d'Alembert superposition u = g(x - t) + k(x + t) with
Gaussian bumps, for which every null derivative has a closed form:

    Z^(a1,0) u = 2^a1 k^(a1)(x + t)      (the g part is annihilated)
    Z^(0,a2) u = (-2)^a2 g^(a2)(x - t)   (the k part is annihilated)
    Z^a    u = 0 whenever a1 >= 1 and a2 >= 1.
"""

import math
from types import SimpleNamespace

import numpy as np
import pytest

from wavestab.errors import (
    HaloExhaustedError,
    InsufficientHistoryError,
    RegionOutsideDomainError,
)
from wavestab.geometry import (
    MultiIndex,
    RegionKind,
    RegionSpec,
    SampledField,
    _binomial_terms,
    apply_null_derivative,
    bracket,
    d1,
    d2,
    dx_power,
    from_null,
    fubini_residual,
    integrate_region,
    to_null,
)


# ---------------------------------------------------------------------------
# coordinates and multi-indices
# ---------------------------------------------------------------------------


def test_bracket_values():
    assert bracket(0.0) == 1.0
    assert np.allclose(bracket(np.array([0.0, math.sqrt(3.0)])), [1.0, 2.0])
    # even and monotone on [0, inf)
    xs = np.linspace(0.0, 10.0, 101)
    assert np.all(np.diff(bracket(xs)) > 0)
    assert np.allclose(bracket(-xs), bracket(xs))


def test_null_map_values_and_round_trip():
    p = to_null(3.0, 1.0)
    assert p.xi == 2.0 and p.eta == 1.0
    t, x = from_null(p)
    assert t == 3.0 and x == 1.0

    rng = np.random.default_rng(7)
    ts = rng.normal(size=50)
    xs = rng.normal(size=50)
    t2, x2 = from_null(to_null(ts, xs))
    assert np.allclose(t2, ts, atol=1e-15)
    assert np.allclose(x2, xs, atol=1e-15)


def test_multi_index_validation_and_identity():
    a = MultiIndex(2, 1)
    assert a.order == 3
    assert tuple(a) == (2, 1)
    assert a == (2, 1)
    assert hash(a) == hash(MultiIndex(2, 1))
    with pytest.raises(ValueError):
        MultiIndex(2, 2)
    with pytest.raises(ValueError):
        MultiIndex(-1, 0)
    with pytest.raises(AttributeError):
        a.a1 = 0


def test_binomial_expansion_of_mixed_null_derivative():
    # (d_t + d_x)(d_t - d_x) = d_t^2 - d_x^2: cross terms must cancel.
    collected = {}
    for coeff, p, q in _binomial_terms(1, 1):
        collected[(p, q)] = collected.get((p, q), 0.0) + coeff
    assert collected[(2, 0)] == 1.0
    assert collected[(0, 2)] == -1.0
    assert collected.get((1, 1), 0.0) == 0.0


# ---------------------------------------------------------------------------
# finite-difference stencils
# ---------------------------------------------------------------------------


def test_stencils_exact_on_cubics_interior():
    xs = np.linspace(-1.0, 1.0, 41)
    v = xs**3
    got1 = d1(v, xs[1] - xs[0])[4:-4]
    got2 = d2(v, xs[1] - xs[0])[4:-4]
    assert np.max(np.abs(got1 - 3.0 * xs[4:-4] ** 2)) < 1e-12
    assert np.max(np.abs(got2 - 6.0 * xs[4:-4])) < 1e-12


def _periodic_error(n, op, exact):
    xs = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    h = xs[1] - xs[0]
    return np.max(np.abs(op(np.sin(xs), h) - exact(xs)))


def test_stencils_fourth_order_periodic():
    for op, exact in (
        (lambda v, h: d1(v, h, bc="periodic"), np.cos),
        (lambda v, h: d2(v, h, bc="periodic"), lambda x: -np.sin(x)),
        (lambda v, h: dx_power(v, 3, h, bc="periodic"), lambda x: -np.cos(x)),
    ):
        e_coarse = _periodic_error(64, op, exact)
        e_fine = _periodic_error(128, op, exact)
        order = math.log2(e_coarse / e_fine)
        assert 3.7 < order < 4.3


def test_stencils_fourth_order_compact_bump():
    def err(n):
        xs = np.linspace(-10.0, 10.0, n)
        h = xs[1] - xs[0]
        v = np.exp(-(xs**2))
        return np.max(np.abs(d1(v, h) - (-2.0 * xs * v)))

    e_coarse, e_fine = err(401), err(801)
    assert 3.7 < math.log2(e_coarse / e_fine) < 4.3


def test_dx_power_zero_is_identity():
    v = np.arange(10.0)
    assert dx_power(v, 0, 0.1) is v


# ---------------------------------------------------------------------------
# Z^a on a manufactured d'Alembert state
# ---------------------------------------------------------------------------


def _gauss_deriv(y, m, center=0.0):
    """m-th derivative of exp(-(y - center)^2) via Hermite polynomials."""
    z = y - center
    coeffs = np.zeros(m + 1)
    coeffs[m] = 1.0
    return (-1.0) ** m * np.polynomial.hermite.hermval(z, coeffs) * np.exp(-z * z)


class _DAlembertState:
    """Exact left+right moving state on three stored time levels."""

    def __init__(self, xs, times, bc="compact"):
        self.grid = SimpleNamespace(h=xs[1] - xs[0], bc=bc)
        self.xs = xs
        self.times = list(times)

    def _parts(self, t, m):
        g = _gauss_deriv(self.xs - t, m)
        k = 0.7 * _gauss_deriv(self.xs + t, m, center=1.0)
        return g, k

    @property
    def u(self):
        g, k = self._parts(self.times[-1], 0)
        return g + k

    @property
    def w(self):
        g, k = self._parts(self.times[-1], 1)
        return -g + k

    def utt_level(self, level):
        g, k = self._parts(self.times[level], 2)
        return g + k

    def history_times(self):
        return list(self.times)


def test_null_derivatives_match_dalembert_closed_forms():
    xs = np.linspace(-12.0, 12.0, 3601)
    t = 0.3
    dt = 1e-4
    state = _DAlembertState(xs, [t - 2 * dt, t - dt, t])
    y_g = xs - t
    y_k = xs + t

    expected = {(0, 0): state.u}
    for a1 in (1, 2, 3):
        expected[(a1, 0)] = 2.0**a1 * 0.7 * _gauss_deriv(y_k, a1, center=1.0)
    for a2 in (1, 2, 3):
        expected[(0, a2)] = (-2.0) ** a2 * _gauss_deriv(y_g, a2)
    for mixed in ((1, 1), (2, 1), (1, 2)):
        expected[mixed] = np.zeros_like(xs)

    cache = {}
    for a, exact in expected.items():
        got = apply_null_derivative(state, a, cache=cache)
        # error budget: composed h^4 stencils against the Gaussian's 7th
        # derivative (~2e-7 at h = 1/150) plus the 3-point endpoint
        # differentiation of u_tt for |a| = 3 (~dt^2 * |g''''| ~ 4e-8)
        assert np.max(np.abs(got - exact)) < 1e-6, f"Z^{a} mismatch"


def test_null_derivative_order_zero_returns_copy():
    xs = np.linspace(-12.0, 12.0, 101)
    state = _DAlembertState(xs, [0.1, 0.2, 0.3])
    out = apply_null_derivative(state, (0, 0))
    assert out is not state.u
    assert np.array_equal(out, state.u)


def test_null_derivative_requires_three_levels_for_time_cubed():
    xs = np.linspace(-12.0, 12.0, 801)
    state = _DAlembertState(xs, [0.1, 0.3])
    with pytest.raises(InsufficientHistoryError):
        apply_null_derivative(state, (3, 0))


def test_null_derivative_requires_utt_for_second_order():
    xs = np.linspace(-12.0, 12.0, 801)
    state = SimpleNamespace(
        grid=SimpleNamespace(h=xs[1] - xs[0], bc="compact"),
        u=np.exp(-(xs**2)),
        w=np.zeros_like(xs),
    )
    with pytest.raises(InsufficientHistoryError):
        apply_null_derivative(state, (2, 0))


def test_halo_check_rejects_boundary_contamination():
    xs = np.linspace(-12.0, 12.0, 801)
    state = SimpleNamespace(
        grid=SimpleNamespace(h=xs[1] - xs[0], bc="compact"),
        u=np.ones_like(xs),
        w=np.zeros_like(xs),
    )
    with pytest.raises(HaloExhaustedError):
        apply_null_derivative(state, (1, 0))


def test_periodic_states_skip_halo_check():
    xs = np.linspace(0.0, 2.0 * math.pi, 128, endpoint=False)
    state = SimpleNamespace(
        grid=SimpleNamespace(h=xs[1] - xs[0], bc="periodic"),
        u=np.ones_like(xs),
        w=np.zeros_like(xs),
    )
    out = apply_null_derivative(state, (1, 0))
    assert np.max(np.abs(out)) < 1e-12


# ---------------------------------------------------------------------------
# regions and quadrature
# ---------------------------------------------------------------------------


def _unit_field():
    ts = np.linspace(0.0, 1.0, 21)
    xs = np.linspace(-1.0, 1.0, 201)
    return SampledField.from_callable(lambda t, x: np.ones_like(x), ts, xs)


def test_region_integrals_closed_forms_on_constant_field():
    field = _unit_field()
    t0, xi0 = 0.8, 0.0
    got = integrate_region(field, RegionSpec(RegionKind.SLICE_SIGMA, t0))
    assert abs(got - 2.0) < 1e-12

    got = integrate_region(field, RegionSpec(RegionKind.SLICE_SIGMA_MINUS, 0.5, 0.25))
    assert abs(got - 1.0) < 1e-12

    got = integrate_region(field, RegionSpec(RegionKind.SEGMENT_C, t0, xi0))
    assert abs(got - math.sqrt(2.0) * t0) < 1e-12

    # S^-: integral of (1 + 2 xi0 - t) dt from 0 to t0
    got = integrate_region(field, RegionSpec(RegionKind.REGION_S_MINUS, t0, xi0))
    assert abs(got - (t0 * (1.0 + 2.0 * xi0) - t0**2 / 2.0)) < 1e-12

    got = integrate_region(field, RegionSpec(RegionKind.STRIP_S, t0))
    assert abs(got - 2.0 * t0) < 1e-12


def test_region_spec_validation():
    with pytest.raises(ValueError):
        RegionSpec(RegionKind.SLICE_SIGMA, -1.0)
    with pytest.raises(ValueError):
        RegionSpec(RegionKind.SEGMENT_C, 1.0)  # xi0 required
    # xi0 optional for full slices
    RegionSpec(RegionKind.SLICE_SIGMA, 1.0)


def test_region_outside_stored_trajectory():
    field = _unit_field()
    with pytest.raises(RegionOutsideDomainError):
        integrate_region(field, RegionSpec(RegionKind.STRIP_S, 2.0))
    with pytest.raises(RegionOutsideDomainError):
        field.slice_at(1.5)


def test_sampled_field_zero_extension_and_shape_check():
    field = _unit_field()
    vals = field.at_points(0.5, np.array([-2.0, 0.0, 2.0]))
    assert np.allclose(vals, [0.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        SampledField([0.0, 1.0], [0.0, 1.0], np.zeros((3, 2)))
    with pytest.raises(ValueError):
        SampledField([1.0, 0.0], [0.0, 1.0], np.zeros((2, 2)))


def _fubini_gaussian(t, x):
    return np.exp(-((x + 2.0) ** 2) - (t - 1.0) ** 2)


def test_fubini_identity_callable_gaussian():
    residual, lhs, rhs = fubini_residual(
        _fubini_gaussian, t0=2.0, xi0=1.0, x_min=-12.0, return_parts=True
    )
    assert lhs > 0.1  # the region genuinely captures mass
    assert residual / abs(lhs) < 1e-6


def test_fubini_identity_sampled_field_refines():
    def make(nt, nx):
        ts = np.linspace(0.0, 2.0, nt)
        xs = np.linspace(-12.0, 4.0, nx)
        return SampledField.from_callable(_fubini_gaussian, ts, xs)

    r_coarse, lhs, _ = fubini_residual(make(41, 161), t0=2.0, xi0=1.0, return_parts=True)
    r_fine = fubini_residual(make(81, 321), t0=2.0, xi0=1.0)
    assert r_fine / abs(lhs) < 1e-3
    assert r_fine < r_coarse


def test_fubini_callable_requires_x_min():
    with pytest.raises(ValueError):
        fubini_residual(_fubini_gaussian, t0=1.0, xi0=0.0)
