"""Surface (n = 2) bookkeeping: Gauss-Bonnet, genus and area bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


class GaussEquationError(ValueError):
    """A Gaussian curvature sample exceeds 1, impossible for a minimal surface in S^3."""


@dataclass(frozen=True)
class SurfaceData:
    area: float
    genus: int

    def __post_init__(self):
        if not self.area > 0:
            raise ValueError(f"area must be positive, got {self.area}")
        if self.genus < 0 or int(self.genus) != self.genus:
            raise ValueError(f"genus must be a nonnegative integer, got {self.genus}")


def sigma_from_genus(s: SurfaceData) -> float:
    """Mean of |A|^2 from K = 1 - |A|^2/2 integrated with Gauss-Bonnet."""
    return 2.0 - 8.0 * math.pi * (1 - s.genus) / s.area


def genus_poly_bound(K, k: int):
    """sum_{i=2}^k C(k,i) (-K)^i in closed form, (1-K)^k - 1 + kK.

    Nonnegative for K <= 1; for odd k it goes negative beyond K = 1.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    K = np.asarray(K, dtype=float)
    return (1.0 - K) ** k - 1.0 + k * K


def choi_wang_lower(genus: int) -> float:
    """sigma_1 >= 2 + (g-1)/(g+1) from the area bound |M| <= 8 pi (g+1)."""
    if genus < 2:
        raise ValueError("the area estimate argument needs genus >= 2")
    return 2.0 + (genus - 1) / (genus + 1)


@dataclass(frozen=True)
class DimTwoCertificate:
    k: int
    lower_bound: Optional[float]
    poly_min: float
    exceeds_2k: bool


def sigma_k_dim2(s: SurfaceData, K_samples: Sequence[float], k: int) -> DimTwoCertificate:
    """Lower bound 2^k (1 + 4 pi k (g-1)/|M|) on sigma_k, certified on K samples.

    The remaining term of sigma_k is the average of genus_poly_bound(K, k),
    nonnegative because K <= 1; the samples are checked against that. Genus
    zero gets no bound (the only such minimal surface is totally geodesic).
    """
    K = np.asarray(K_samples, dtype=float)
    if K.size == 0:
        raise ValueError("need at least one curvature sample")
    if np.any(K > 1.0):
        raise GaussEquationError(f"K sample {K.max():g} > 1 violates K = 1 - |A|^2/2")
    poly_min = float(genus_poly_bound(K, k).min())
    if s.genus == 0:
        return DimTwoCertificate(k, None, poly_min, False)
    bound = 2.0**k * (1.0 + 4.0 * math.pi * k * (s.genus - 1) / s.area)
    return DimTwoCertificate(k, bound, poly_min, poly_min >= 0.0 and bound >= 2.0**k)
