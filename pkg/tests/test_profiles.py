"""Tests for traveling-wave profiles, decay norms, and the residual check."""

import numpy as np
import pytest

from wavestab.errors import ResidualExceedsTolError, UnknownNameError
from wavestab.profiles import (
    TravelingWaveProfile,
    builtin_profile,
    decay_M0,
    decay_M1,
    decay_report,
    verify_exact_solution,
)
from wavestab.systems import CoefficientSet, SystemKind, builtin_system


# ---------------------------------------------------------------------------
# derivative chains
# ---------------------------------------------------------------------------


def _check_chain(profile, points, orders=(0, 1, 2, 3), tol=1e-7, h=1e-5):
    """Central difference of f^(k) must match the stored f^(k+1)."""
    for k in orders:
        lo = np.asarray(profile.derivative(k)(points - h), dtype=float)
        hi = np.asarray(profile.derivative(k)(points + h), dtype=float)
        fd = (hi - lo) / (2.0 * h)
        exact = np.asarray(profile.derivative(k + 1)(points), dtype=float)
        assert np.max(np.abs(fd - exact)) < tol, f"chain broken at order {k}"


def test_sech_profile_chain_and_peak():
    prof = builtin_profile("sech", amplitude=0.8)
    pts = np.linspace(-6.0, 6.0, 61)
    _check_chain(prof, pts)
    # f' at the crest equals the amplitude
    crest = np.asarray(prof.f1(np.array([0.0])), dtype=float).ravel()
    assert abs(crest[0] - 0.8) < 1e-14


def test_gaussian_bump_profile_chain():
    prof = builtin_profile("gaussian-bump", amplitude=0.5)
    _check_chain(prof, np.linspace(-4.0, 4.0, 41))


def test_compact_bump_profile_chain_and_support():
    prof = builtin_profile("compact-bump", amplitude=1.0, radius=3.0)
    _check_chain(prof, np.linspace(-2.4, 2.4, 49))
    outside = np.array([-3.5, 3.1, 10.0])
    for k in range(1, 5):
        assert np.max(np.abs(prof.derivative(k)(outside))) == 0.0


def test_zero_profile_is_identically_zero():
    prof = builtin_profile("zero")
    xs = np.linspace(-10.0, 10.0, 11)
    for k in range(5):
        assert np.max(np.abs(prof.derivative(k)(xs))) == 0.0


def test_unknown_profile_name():
    with pytest.raises(UnknownNameError):
        builtin_profile("no-such-profile")


def test_multi_component_scaling():
    prof = builtin_profile("sech", amplitude=1.0, n=2)
    vals = np.asarray(prof.f1(np.array([0.0])))
    assert vals.shape == (1, 2)
    # component i carries amplitude / (i + 1)
    assert np.allclose(vals[0], [1.0, 0.5], atol=1e-14)


# ---------------------------------------------------------------------------
# decay norms
# ---------------------------------------------------------------------------


def _oracle_sup(profile, delta, power_factor, orders, grid):
    weight = np.power(1.0 + grid * grid, power_factor * (1.0 + delta) / 2.0)
    total = np.zeros_like(grid)
    for k in orders:
        vals = np.asarray(profile.derivative(k)(grid), dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        total += np.sqrt(np.sum(vals * vals, axis=-1))
    return float(np.max(weight * total))


def test_decay_norms_match_independent_dense_grid():
    prof = builtin_profile("sech", amplitude=1.0)
    fine = np.arange(-50.0, 50.0, 5e-4)
    for delta in (0.1, 0.5, 0.9):
        m0 = decay_M0(prof, delta)
        m1 = decay_M1(prof, delta)
        o0 = _oracle_sup(prof, delta, 1.5, (1, 2), fine)
        o1 = _oracle_sup(prof, delta, 3.0, (1, 2, 3, 4), fine)
        # both grids resolve the smooth interior maximum; the residual
        # difference is O(step^2) of the coarser sampling
        assert abs(m0 - o0) / o0 < 1e-4
        assert abs(m1 - o1) / o1 < 1e-4


def test_decay_norms_scale_linearly_with_amplitude():
    base = builtin_profile("sech", amplitude=0.5)
    doubled = builtin_profile("sech", amplitude=1.0)
    assert abs(decay_M0(doubled, 0.5) - 2.0 * decay_M0(base, 0.5)) < 1e-12
    assert abs(decay_M1(doubled, 0.5) - 2.0 * decay_M1(base, 0.5)) < 1e-10


def test_decay_report_interior_maximum():
    prof = builtin_profile("sech", amplitude=1.0)
    report = decay_report(prof, 0.5)
    assert not report.boundary_attained
    assert report.M0 > 0 and report.M1 > 0
    assert report.grid_min < report.argmax_M0 < report.grid_max
    assert report.grid_min < report.argmax_M1 < report.grid_max


def test_decay_report_flags_slow_tails():
    # f' ~ 1/|x| decays too slowly for the <x>^{3(1+delta)} weight, so the
    # weighted sup runs off the edge of any finite grid
    prof = TravelingWaveProfile(
        f=np.arcsinh,
        f1=lambda x: (1.0 + x * x) ** -0.5,
        f2=lambda x: -x * (1.0 + x * x) ** -1.5,
        f3=lambda x: (2.0 * x * x - 1.0) * (1.0 + x * x) ** -2.5,
        f4=lambda x: (9.0 * x - 6.0 * x**3) * (1.0 + x * x) ** -3.5,
        n=1,
        amplitude=1.0,
        name="slow-tail",
    )
    report = decay_report(prof, 0.5)
    assert report.boundary_attained


def test_decay_norm_rejects_bad_delta():
    prof = builtin_profile("sech")
    with pytest.raises(ValueError):
        decay_M0(prof, 0.0)
    with pytest.raises(ValueError):
        decay_M1(prof, 1.0)


# ---------------------------------------------------------------------------
# exact traveling-wave residual
# ---------------------------------------------------------------------------


def test_profiles_solve_their_systems_exactly():
    sech = builtin_profile("sech", amplitude=0.7)
    for sys_name, kwargs in (
        ("semilinear-bilinear", {}),
        ("quasilinear-scalar", dict(alpha=1.0, beta=1.0, gamma=1.0, kappa=1.0)),
        # F = theta^2 also vanishes at theta = 0: breaking the structure
        # hypotheses does not break the background solution itself
        ("violating-F", {}),
    ):
        system = builtin_system(sys_name, **kwargs)
        assert verify_exact_solution(sech, system) == 0.0


def test_residual_raises_when_forcing_survives_at_background():
    n = 1

    def zero_mat(rho, theta):
        rho = np.asarray(rho, dtype=float)
        return np.zeros(rho.shape[:-1] + (n, n))

    bad = CoefficientSet(
        n=n,
        A1=zero_mat,
        A2=zero_mat,
        A3=zero_mat,
        F=lambda rho, theta: np.asarray(rho, dtype=float),
        kind=SystemKind.SEMILINEAR,
        name="forcing-at-background",
    )
    prof = builtin_profile("sech", amplitude=0.3)
    with pytest.raises(ResidualExceedsTolError):
        verify_exact_solution(prof, bad)
    # the returned residual equals max |f'| when the tolerance allows it
    worst = verify_exact_solution(prof, bad, tol=1.0)
    assert abs(worst - 0.3) < 1e-6
