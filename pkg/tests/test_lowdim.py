import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clifford_lab.lowdim import (
    GaussEquationError,
    SurfaceData,
    choi_wang_lower,
    genus_poly_bound,
    sigma_from_genus,
    sigma_k_dim2,
)


def test_sigma_from_genus_examples():
    assert sigma_from_genus(SurfaceData(4 * math.pi, 0)) == pytest.approx(0.0, abs=1e-15)
    assert sigma_from_genus(SurfaceData(2 * math.pi**2, 1)) == pytest.approx(2.0, rel=1e-15)
    assert sigma_from_genus(SurfaceData(8 * math.pi * 3, 2)) == pytest.approx(7 / 3, rel=1e-15)
    assert choi_wang_lower(2) == pytest.approx(7 / 3)


def test_genus_poly_counterexample():
    assert genus_poly_bound(4.0, 3) == pytest.approx(-16.0)


@given(st.floats(-50.0, 1.0), st.integers(2, 8))
def test_genus_poly_nonnegative(K, k):
    assert genus_poly_bound(K, k) >= -1e-9 * (1 + abs(K)) ** k


@given(st.floats(-5.0, 5.0), st.integers(2, 8))
def test_genus_poly_is_binomial_tail(K, k):
    tail = sum(math.comb(k, i) * (-K) ** i for i in range(2, k + 1))
    assert genus_poly_bound(K, k) == pytest.approx(tail, rel=1e-9, abs=1e-9 * (1 + abs(K)) ** k)


def test_grid_nonnegative():
    K = np.linspace(-50, 1, 2001)
    for k in range(2, 9):
        assert genus_poly_bound(K, k).min() >= 0.0


def test_certificate():
    s = SurfaceData(8 * math.pi * 3, 2)
    cert = sigma_k_dim2(s, np.linspace(-3, 1, 50), 3)
    assert cert.exceeds_2k
    assert cert.lower_bound == pytest.approx(8 * (1 + 4 * math.pi * 3 / s.area))
    cert0 = sigma_k_dim2(SurfaceData(4 * math.pi, 0), [1.0], 2)
    assert cert0.lower_bound is None and not cert0.exceeds_2k


def test_certificate_rejects_bad_curvature():
    with pytest.raises(GaussEquationError):
        sigma_k_dim2(SurfaceData(10.0, 2), [0.5, 1.5], 2)
    with pytest.raises(ValueError):
        sigma_k_dim2(SurfaceData(10.0, 2), [], 2)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        SurfaceData(-1.0, 1)
    with pytest.raises(ValueError):
        SurfaceData(1.0, -1)
    with pytest.raises(ValueError):
        choi_wang_lower(1)
    with pytest.raises(ValueError):
        genus_poly_bound(0.0, 1)
