"""Clifford product hypersurfaces S^m(sqrt(m/n)) x S^(n-m)(sqrt((n-m)/n))."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .spectra import PrincipalSpectrum, gbc_integrand

SIXTEEN_PI_SQ = 16.0 * math.pi**2


@dataclass(frozen=True)
class CliffordModel:
    n: int
    m: int
    radii: tuple[float, float]
    spectrum: PrincipalSpectrum


def _check_nm(n: int, m: int) -> None:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 1 <= m <= n - 1:
        raise ValueError(f"need 1 <= m <= n-1, got n={n}, m={m}")


def clifford_spectrum(n: int, m: int) -> PrincipalSpectrum:
    _check_nm(n, m)
    return PrincipalSpectrum(((math.sqrt((n - m) / m), m), (-math.sqrt(m / (n - m)), n - m)))


def clifford_model(n: int, m: int) -> CliffordModel:
    _check_nm(n, m)
    radii = (math.sqrt(m / n), math.sqrt((n - m) / n))
    return CliffordModel(n, m, radii, clifford_spectrum(n, m))


def clifford_abs_A2_exact(n: int, m: int) -> Fraction:
    # squared curvatures are rational even though the curvatures are not
    _check_nm(n, m)
    return m * Fraction(n - m, m) + (n - m) * Fraction(m, n - m)


def clifford_sigma(n: int, m: int, k: int) -> int:
    """sigma_k of a Clifford model; |A|^2 is constant so this is (|A|^2)^k = n^k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    value = clifford_abs_A2_exact(n, m) ** k
    assert value.denominator == 1
    return int(value)


def half_integer_gamma(twice_x: int) -> float:
    """Gamma(twice_x / 2) by recursion from Gamma(1) = 1 and Gamma(1/2) = sqrt(pi)."""
    if twice_x < 1:
        raise ValueError("argument must be a positive half-integer")
    if twice_x % 2 == 0:
        return float(math.factorial(twice_x // 2 - 1))
    g = math.sqrt(math.pi)
    x = 0.5
    while 2 * x < twice_x:
        g *= x
        x += 1.0
    return g


def sphere_volume(d: int, r: float = 1.0) -> float:
    """Volume of the round d-sphere of radius r."""
    if d < 1 or r <= 0:
        raise ValueError("need d >= 1 and r > 0")
    return 2.0 * math.pi ** ((d + 1) / 2) / half_integer_gamma(d + 1) * r**d


def clifford_volume(n: int, m: int) -> float:
    a, b = clifford_model(n, m).radii
    return sphere_volume(m, a) * sphere_volume(n - m, b)


def sphere_euler(d: int) -> int:
    return 1 + (-1) ** d


def clifford_euler(n: int, m: int) -> int:
    # Kunneth: chi(A x B) = chi(A) chi(B)
    _check_nm(n, m)
    return sphere_euler(m) * sphere_euler(n - m)


def clifford_gbc_check(m: int) -> tuple[float, float]:
    """Integrated GBC integrand on S^m x S^(4-m) against 16 pi^2 chi."""
    if m not in (1, 2, 3):
        raise ValueError(f"m must be 1, 2 or 3 for n = 4, got {m}")
    integrand, _ = gbc_integrand(clifford_spectrum(4, m))
    return integrand * clifford_volume(4, m), SIXTEEN_PI_SQ * clifford_euler(4, m)


def sphere_gbc_check() -> tuple[float, float]:
    """Totally geodesic S^4: integrand 12 over volume 8 pi^2 / 3."""
    integrand, _ = gbc_integrand(PrincipalSpectrum.zero(4))
    return integrand * sphere_volume(4, 1.0), SIXTEEN_PI_SQ * sphere_euler(4)
