import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clifford_lab import otsuki


def test_equilibrium_and_period():
    assert otsuki.equilibrium(3) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert otsuki.linear_period(3) == pytest.approx(2 * math.pi / math.sqrt(6), rel=1e-15)
    assert otsuki.is_equilibrium(4, 1 / math.sqrt(3))
    assert not otsuki.is_equilibrium(4, 0.5)


def test_ode_rhs_values():
    assert otsuki.ode_rhs(3, 1.0, 0.0) == pytest.approx(-3.0, rel=1e-15)
    # 5/(4*0.5)*0.04 - 4*0.5*(3*0.25 - 1) = 0.1 + 0.5
    assert otsuki.ode_rhs(4, 0.5, 0.2) == pytest.approx(0.6, rel=1e-14)
    assert otsuki.ode_rhs(3, otsuki.equilibrium(3), 0.0) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        otsuki.ode_rhs(3, 0.0, 1.0)
    with pytest.raises(ValueError):
        otsuki.ode_rhs(3, -1.0, 0.0)


def test_first_integral_at_equilibrium():
    # value frozen from an independent symbolic evaluation of E(1/sqrt2, 0), n = 3
    assert otsuki.first_integral(3, otsuki.equilibrium(3), 0.0) == pytest.approx(17.008934173580787, rel=1e-14)


@given(st.integers(3, 8), st.floats(0.2, 3.0), st.floats(-2.0, 2.0))
def test_first_integral_conserved_by_vector_field(n, lam, lamdot):
    # dE/dt along the flow, by the chain rule
    a = 2.0 * (n + 1) / n
    b = 2.0 * (n - 1) / n
    c = 2.0 / n
    dE_dlam = -a * lamdot**2 * lam ** (-a - 1) + n * n * (b * lam ** (b - 1) - c * lam ** (-c - 1))
    dE_dlamdot = 2 * lamdot * lam ** (-a)
    rate = dE_dlam * lamdot + dE_dlamdot * otsuki.ode_rhs(n, lam, lamdot)
    scale = abs(dE_dlam * lamdot) + abs(dE_dlamdot * otsuki.ode_rhs(n, lam, lamdot)) + 1.0
    assert abs(rate) <= 1e-12 * scale


def test_turning_points_oracle():
    # lambda_min for n=3 through 0.9, frozen from a separate brentq solve
    lo, hi = otsuki.turning_points(3, 0.9)
    assert hi == 0.9
    assert lo == pytest.approx(0.548046991143449, rel=1e-13)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 6), st.floats(0.4, 1.6))
def test_turning_points_straddle_and_share_energy(n, factor):
    lam_e = otsuki.equilibrium(n)
    lam0 = factor * lam_e
    if abs(factor - 1.0) < 1e-6:
        return
    lo, hi = otsuki.turning_points(n, lam0)
    assert lo < lam_e < hi
    assert otsuki.potential(n, lo) == pytest.approx(otsuki.potential(n, hi), rel=1e-12)


def test_period_quadrature_tends_to_linear_period():
    for n in (3, 4, 5):
        lam_e = otsuki.equilibrium(n)
        T = otsuki.period_quadrature(n, lam_e * (1 + 1e-4))
        assert T == pytest.approx(otsuki.linear_period(n), rel=1e-6)


def test_profile_properties(standard_profiles):
    for prof in standard_profiles:
        assert prof.energy_drift < 1e-9
        assert prof.closure_error < 1e-10
        assert prof.period == pytest.approx(otsuki.period_quadrature(prof.n, prof.lam0), rel=1e-7)
        assert len(prof.t) % 2 == 1
        assert prof.lam_min < otsuki.equilibrium(prof.n) < prof.lam_max
        assert prof.lam.min() >= prof.lam_min * (1 - 1e-9)
        assert prof.lam.max() <= prof.lam_max * (1 + 1e-9)
        assert not prof.lam.flags.writeable


def test_reversibility(profile_cache):
    # time reversal maps (lam, lamdot) to (lam, -lamdot); the orbit is symmetric about the half period
    prof = profile_cache(3, 0.9)
    N = len(prof.t) - 1
    assert np.allclose(prof.lam, prof.lam[::-1], rtol=0, atol=1e-9)
    assert np.allclose(prof.lamdot, -prof.lamdot[::-1], rtol=0, atol=1e-8)
    assert abs(prof.lamdot[N // 2]) < 1e-3


def test_profile_starting_from_minimum(profile_cache):
    prof = profile_cache(3, 0.9)
    other = otsuki.profile_from_min(3, prof.lam_min)
    assert other.period == pytest.approx(prof.period, rel=1e-9)
    assert other.lam_max == pytest.approx(0.9, rel=1e-10)


def test_constant_profile():
    prof = otsuki.integrate_profile(4, otsuki.equilibrium(4))
    assert prof.degenerate
    assert np.all(prof.lamdot == 0.0)
    assert prof.period == otsuki.linear_period(4)


def test_convergence_order_four():
    errs = []
    for h in (0.1, 0.05, 0.025):
        prof = otsuki.integrate_profile(3, 0.9, h, drift_tol=1.0, closure_tol=1.0)
        errs.append(prof.energy_drift)
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert all(3.5 < p < 4.5 for p in orders)


def test_amplitude_guard():
    with pytest.raises(otsuki.AmplitudeGuardError):
        otsuki.integrate_profile(3, 2.0)
    prof = otsuki.integrate_profile(3, 2.0, guard_ratio=0.1, step=2e-4)
    assert prof.lam_min == pytest.approx(0.18851, rel=1e-3)


def test_drift_failure_is_reported():
    with pytest.raises(otsuki.IntegrationError, match="drift"):
        otsuki.integrate_profile(3, 0.9, 0.2)


def test_bad_inputs():
    with pytest.raises(ValueError):
        otsuki.integrate_profile(2, 0.9)
    with pytest.raises(ValueError):
        otsuki.integrate_profile(3, 0.9, -1e-3)
    with pytest.raises(ValueError):
        otsuki.grad_A_norm_sq(3, 0.1, coefficient="other")


def test_grad_A_coefficients():
    assert otsuki.grad_A_norm_sq(3, 2.0) == pytest.approx(40.0)
    assert otsuki.grad_A_norm_sq(3, 2.0, "printed") == pytest.approx(24.0)
    assert otsuki.profile_abs_A2(3, 1 / math.sqrt(2)) == pytest.approx(3.0)
