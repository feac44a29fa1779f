"""Pinching thresholds delta_k(n) as roots of the sign polynomial.

With x = lambda^2 the sign factor of the sigma_k identity, multiplied by x, is

    P(x) = sum_{i=1}^{k-1} (n-1)^i c_i x^i - (n-2)/n,

with c_i = (2i-1) + 2/n (differentiated) or 1/(2i-1) + 2/n (as printed).
All non-constant coefficients are positive and the constant is negative, so
P has exactly one positive root x*. The threshold on |A|^2 = n(n-1) lambda^2
is delta_k(n) = n(n-1) x*.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VARIANTS = ("corrected", "printed")


def sign_coefficient(n: int, i: int, variant: str = "corrected") -> float:
    if variant == "corrected":
        return (2 * i - 1) + 2.0 / n
    if variant == "printed":
        return 1.0 / (2 * i - 1) + 2.0 / n
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def _check(n: int, k: int) -> None:
    if n < 3:
        raise ValueError(f"pinching constants need n >= 3, got {n}")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")


def poly_coefficients(n: int, k: int, variant: str = "corrected") -> np.ndarray:
    """Coefficients of P in increasing degree, constant term first."""
    _check(n, k)
    coeffs = [-(n - 2) / n]
    coeffs += [(n - 1) ** i * sign_coefficient(n, i, variant) for i in range(1, k)]
    return np.array(coeffs)


def pinching_poly(n: int, k: int, x, variant: str = "corrected"):
    return np.polynomial.polynomial.polyval(x, poly_coefficients(n, k, variant))


def sign_factor(n: int, k: int, lam, variant: str = "corrected"):
    """S(lambda) = P(lambda^2) / lambda^2, the weight multiplying lambda'^2."""
    lam = np.asarray(lam, dtype=float)
    return pinching_poly(n, k, lam * lam, variant) / (lam * lam)


def pinching_root(n: int, k: int, variant: str = "corrected") -> tuple[float, tuple[float, float]]:
    """Unique positive root of P by bisection; returns (root, initial bracket)."""
    coeffs = poly_coefficients(n, k, variant)
    P = np.polynomial.Polynomial(coeffs)
    hi = 1.0
    while P(hi) <= 0:
        hi *= 2.0
    bracket = (0.0, hi)
    lo = 0.0
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if P(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi), bracket


def delta_k(n: int, k: int, variant: str = "corrected") -> float:
    x, _ = pinching_root(n, k, variant)
    return n * (n - 1) * x


@dataclass(frozen=True)
class PinchingEntry:
    k: int
    root_x: float
    delta: float
    variant: str
    bracket: tuple[float, float]


@dataclass(frozen=True)
class PinchingTable:
    n: int
    variant: str
    entries: tuple[PinchingEntry, ...]

    def deltas(self) -> list[float]:
        return [e.delta for e in self.entries]

    def csv_rows(self) -> list[dict]:
        return [
            {"n": self.n, "k": e.k, "variant": e.variant, "root_x": e.root_x, "delta": e.delta}
            for e in self.entries
        ]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "variant": self.variant,
            "entries": [
                {
                    "k": e.k,
                    "root_x": e.root_x,
                    "delta": e.delta,
                    "variant": e.variant,
                    "bracket": list(e.bracket),
                }
                for e in self.entries
            ],
        }


def monotonicity_table(n: int, kmax: int, variant: str = "corrected") -> PinchingTable:
    """delta_k(n) for k = 2..kmax; raises if the sequence is not strictly decreasing below n."""
    if kmax < 2:
        raise ValueError("kmax must be >= 2")
    entries = []
    for k in range(2, kmax + 1):
        x, bracket = pinching_root(n, k, variant)
        entries.append(PinchingEntry(k, x, n * (n - 1) * x, variant, bracket))
    deltas = [e.delta for e in entries]
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise RuntimeError(f"delta_k({n}) not strictly decreasing: {deltas}")
    if any(d >= n for d in deltas):
        raise RuntimeError(f"delta_k({n}) reaches n: {deltas}")
    return PinchingTable(n, variant, tuple(entries))
