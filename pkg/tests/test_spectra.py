import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clifford_lab.spectra import (
    PrincipalSpectrum,
    classify,
    curvature_invariants_dim4,
    curvature_tensor_oracle,
    gbc_integrand,
    power_sum,
    random_minimal_spectrum,
    spectrum_from_text,
)

OTSUKI_4 = PrincipalSpectrum(((-3.0, 1), (1.0, 3)))
S2S2 = PrincipalSpectrum(((1.0, 2), (-1.0, 2)))
S1S3 = PrincipalSpectrum(((math.sqrt(3.0), 1), (-1.0 / math.sqrt(3.0), 3)))

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)


@st.composite
def minimal_spectra(draw, n=4):
    head = [draw(finite) for _ in range(n - 1)]
    return PrincipalSpectrum.from_values([*head, -math.fsum(head)])


def rel(x, y):
    return abs(x - y) / max(abs(x), abs(y), 1.0)


def test_spectrum_validation():
    assert OTSUKI_4.n == 4
    assert OTSUKI_4.is_minimal
    assert not PrincipalSpectrum(((1.0, 1), (0.5, 3))).is_minimal
    with pytest.raises(ValueError):
        PrincipalSpectrum(((1.0, 0),))
    with pytest.raises(ValueError):
        PrincipalSpectrum(((1.0, 1.5),))
    assert list(OTSUKI_4.values()) == [-3.0, 1.0, 1.0, 1.0]


def test_power_sum_examples():
    assert power_sum(PrincipalSpectrum.zero(4), 2) == 0.0
    assert power_sum(OTSUKI_4, 2) == 12.0
    assert power_sum(OTSUKI_4, 4) == 84.0
    lam = 0.37
    assert power_sum(OTSUKI_4.scaled(lam), 2) == pytest.approx(12 * lam**2, rel=1e-15)


def test_invariants_totally_geodesic():
    inv = curvature_invariants_dim4(PrincipalSpectrum.zero(4))
    assert (inv.scalar, inv.ricci_sq, inv.weyl_sq, inv.gbc_integrand) == (12.0, 36.0, 0.0, 12.0)
    oracle = curvature_tensor_oracle(PrincipalSpectrum.zero(4))
    assert oracle.scalar == 12.0 and oracle.ricci_sq == 36.0 and oracle.weyl_sq == 0.0


def test_invariants_s2xs2():
    inv = curvature_invariants_dim4(S2S2)
    assert inv.scalar == 8.0
    assert inv.ricci_sq == 16.0
    assert inv.weyl_sq == pytest.approx(64.0 / 3.0, rel=1e-15)
    oracle = curvature_tensor_oracle(S2S2)
    assert oracle.weyl_sq == pytest.approx(64.0 / 3.0, rel=1e-14)


def test_invariants_otsuki_spectrum():
    inv = curvature_invariants_dim4(OTSUKI_4)
    assert inv.scalar == 0.0
    assert inv.ricci_sq == 48.0
    assert inv.weyl_sq == 0.0
    oracle = curvature_tensor_oracle(OTSUKI_4)
    assert oracle.ricci_sq == pytest.approx(48.0, rel=1e-14)
    assert abs(oracle.weyl_sq) < 1e-12


def test_gbc_examples():
    assert gbc_integrand(PrincipalSpectrum.zero(4)) == (12.0, 12.0)
    a, b = gbc_integrand(S2S2)
    assert a == pytest.approx(16.0, rel=1e-15) and b == pytest.approx(16.0, rel=1e-14)
    scaled = PrincipalSpectrum(((-3 * 0.9, 1), (0.9, 3)))
    a2 = 12 * 0.81
    expected = -0.25 * a2**2 - 2 * a2 + 12  # = -31.0596
    a, b = gbc_integrand(scaled)
    assert a == pytest.approx(expected, rel=1e-13)
    assert b == pytest.approx(expected, rel=1e-13)


def test_oracle_clifford_s1s3_conformally_flat():
    assert abs(curvature_tensor_oracle(S1S3).weyl_sq) < 1e-13


def test_domain_errors():
    with pytest.raises(ValueError):
        curvature_invariants_dim4(PrincipalSpectrum(((1.0, 1), (-1.0, 1))))
    with pytest.raises(ValueError):
        curvature_invariants_dim4(PrincipalSpectrum(((1.0, 4),)))
    with pytest.raises(ValueError):
        gbc_integrand(PrincipalSpectrum(((1.0, 4),)))
    with pytest.raises(ValueError):
        curvature_tensor_oracle(PrincipalSpectrum(((1.0, 1), (-1.0, 1))))
    with pytest.raises(ValueError):
        classify(PrincipalSpectrum(((1.0, 2), (-2.0, 1))))


def test_oracle_general_n():
    spec = PrincipalSpectrum(((2.0, 1), (-1.0, 2)))
    inv = curvature_tensor_oracle(spec)
    # s = n(n-1) - |A|^2 holds in every dimension for minimal hypersurfaces
    assert inv.scalar == pytest.approx(6 - 6.0, abs=1e-14)
    assert inv.weyl_sq is None and inv.gbc_integrand is None


def test_classify_examples():
    c = classify(OTSUKI_4)
    assert c.lcf and not c.einstein
    c = classify(S2S2)
    assert c.einstein and not c.lcf
    c = classify(PrincipalSpectrum.zero(4))
    assert c.lcf and c.einstein


@given(minimal_spectra())
def test_gbc_forms_agree(spec):
    a, b = gbc_integrand(spec)
    scale = max(abs(a), abs(b), power_sum(spec, 2) ** 2, 1.0)
    assert abs(a - b) <= 1e-10 * scale


@given(minimal_spectra())
def test_closed_forms_match_oracle(spec):
    closed = curvature_invariants_dim4(spec)
    oracle = curvature_tensor_oracle(spec)
    scale = 1.0 + power_sum(spec, 2) ** 2
    for key in ("scalar", "ricci_sq", "weyl_sq", "tracefree_ricci_sq", "gbc_integrand"):
        assert abs(getattr(closed, key) - getattr(oracle, key)) <= 1e-9 * scale, key


@given(minimal_spectra())
def test_tracefree_ricci_matches_oracle_difference(spec):
    closed = curvature_invariants_dim4(spec)
    oracle = curvature_tensor_oracle(spec)
    assert abs(closed.tracefree_ricci_sq - (oracle.ricci_sq - oracle.scalar**2 / 4)) <= 1e-10 * (
        1.0 + power_sum(spec, 2) ** 2
    )


@given(minimal_spectra(), st.permutations(range(4)))
def test_classify_invariant_under_permutation_and_sign(spec, perm):
    vals = spec.values()
    permuted = PrincipalSpectrum.from_values(vals[list(perm)])
    base = classify(spec)
    for other in (permuted, spec.negated()):
        c = classify(other)
        assert (c.lcf, c.einstein) == (base.lcf, base.einstein)


@settings(max_examples=25)
@given(st.integers(min_value=3, max_value=7), st.data())
def test_scalar_curvature_any_n(n, data):
    head = [data.draw(finite) for _ in range(n - 1)]
    spec = PrincipalSpectrum.from_values([*head, -math.fsum(head)])
    inv = curvature_tensor_oracle(spec)
    assert inv.scalar == pytest.approx(n * (n - 1) - power_sum(spec, 2), rel=1e-12, abs=1e-9)


def test_weyl_of_orbit_family_is_zero():
    # every (1,3) spectrum is conformally flat, the n = 4 Otsuki case
    for lam in np.linspace(0.1, 3.0, 7):
        assert abs(curvature_tensor_oracle(OTSUKI_4.scaled(lam)).weyl_sq) < 1e-10 * (1 + 144 * lam**4)


def test_random_spectrum_is_minimal_and_seeded():
    a = random_minimal_spectrum(np.random.default_rng(3))
    b = random_minimal_spectrum(np.random.default_rng(3))
    assert a == b and a.is_minimal and a.n == 4


def test_spectrum_from_text():
    assert spectrum_from_text("1:2,-1:2") == S2S2
    assert spectrum_from_text("3, -1, -2").n == 3


def test_permutation_enumeration_small():
    vals = [2.0, -0.5, -0.5, -1.0]
    flags = {
        (classify(PrincipalSpectrum.from_values(p)).lcf, classify(PrincipalSpectrum.from_values(p)).einstein)
        for p in itertools.permutations(vals)
    }
    assert len(flags) == 1
