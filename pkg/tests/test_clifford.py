import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clifford_lab.clifford import (
    SIXTEEN_PI_SQ,
    clifford_abs_A2_exact,
    clifford_euler,
    clifford_gbc_check,
    clifford_model,
    clifford_sigma,
    clifford_spectrum,
    half_integer_gamma,
    sphere_gbc_check,
    sphere_volume,
)
from clifford_lab.spectra import power_sum


@pytest.mark.parametrize("n", range(2, 9))
def test_sigma_is_power_of_n(n):
    for m in range(1, n):
        assert clifford_abs_A2_exact(n, m) == Fraction(n)
        for k in range(1, 6):
            assert clifford_sigma(n, m, k) == n**k


def test_spectrum_is_minimal_with_abs_A2_n():
    for n in range(2, 9):
        for m in range(1, n):
            spec = clifford_spectrum(n, m)
            assert spec.n == n and spec.is_minimal
            assert power_sum(spec, 2) == pytest.approx(n, rel=1e-14)


def test_radii_on_unit_sphere():
    model = clifford_model(4, 1)
    a, b = model.radii
    assert a * a + b * b == pytest.approx(1.0, rel=1e-15)
    assert a == pytest.approx(0.5)


@given(st.integers(2, 8), st.data())
def test_swap_factors_negates_spectrum(n, data):
    m = data.draw(st.integers(1, n - 1))
    a = sorted(clifford_spectrum(n, m).values())
    b = sorted(-clifford_spectrum(n, n - m).values())
    assert a == pytest.approx(b, rel=1e-14)


@pytest.mark.parametrize("twice_x", range(1, 14))
def test_half_integer_gamma_matches_math(twice_x):
    assert half_integer_gamma(twice_x) == pytest.approx(math.gamma(twice_x / 2), rel=1e-14)


def test_sphere_volumes():
    assert sphere_volume(1) == pytest.approx(2 * math.pi, rel=1e-15)
    assert sphere_volume(2) == pytest.approx(4 * math.pi, rel=1e-15)
    assert sphere_volume(3) == pytest.approx(2 * math.pi**2, rel=1e-15)
    assert sphere_volume(4) == pytest.approx(26.318945069571622, rel=1e-15)
    assert sphere_volume(2, 0.5) == pytest.approx(math.pi, rel=1e-15)


def test_euler_characteristics():
    assert [clifford_euler(4, m) for m in (1, 2, 3)] == [0, 4, 0]
    assert clifford_euler(3, 1) == 0


def test_gbc_integrals():
    lhs, rhs = sphere_gbc_check()
    assert lhs == pytest.approx(32 * math.pi**2, rel=1e-13) and rhs == 2 * SIXTEEN_PI_SQ
    lhs, rhs = clifford_gbc_check(2)
    assert lhs == pytest.approx(64 * math.pi**2, rel=1e-13) and rhs == 4 * SIXTEEN_PI_SQ
    for m in (1, 3):
        lhs, rhs = clifford_gbc_check(m)
        assert rhs == 0 and abs(lhs) < 1e-10 * SIXTEEN_PI_SQ


@pytest.mark.parametrize("n,m", [(1, 1), (3, 0), (3, 3)])
def test_bad_dimensions(n, m):
    with pytest.raises(ValueError):
        clifford_spectrum(n, m)


def test_bad_gbc_and_sigma_args():
    with pytest.raises(ValueError):
        clifford_gbc_check(4)
    with pytest.raises(ValueError):
        clifford_sigma(3, 1, 0)
