"""Principal-curvature spectra and the curvature invariants they induce.

All curvature here comes from the Gauss equation of a hypersurface in the
unit sphere with diagonal second fundamental form,

    R_ijkl = d_ik d_jl - d_il d_jk + h_ik h_jl - h_il h_jk,

so a spectrum (values with multiplicities) determines everything pointwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

MINIMAL_TOL = 1e-12
CLASSIFY_RTOL = 1e-10


@dataclass(frozen=True)
class PrincipalSpectrum:
    """Principal curvatures stored as ``(value, multiplicity)`` pairs."""

    entries: tuple[tuple[float, int], ...]

    def __post_init__(self):
        cleaned = []
        for value, mult in self.entries:
            if int(mult) != mult or mult < 1:
                raise ValueError(f"multiplicity must be a positive integer, got {mult!r}")
            cleaned.append((float(value), int(mult)))
        if not cleaned:
            raise ValueError("spectrum needs at least one entry")
        object.__setattr__(self, "entries", tuple(cleaned))

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "PrincipalSpectrum":
        return cls(tuple((v, 1) for v in values))

    @classmethod
    def zero(cls, n: int) -> "PrincipalSpectrum":
        return cls(((0.0, n),))

    @property
    def n(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def trace(self) -> float:
        return math.fsum(m * v for v, m in self.entries)

    @property
    def is_minimal(self) -> bool:
        return abs(self.trace) <= MINIMAL_TOL

    def values(self) -> np.ndarray:
        """Expanded length-n vector of principal curvatures."""
        return np.repeat([v for v, _ in self.entries], [m for _, m in self.entries])

    def scaled(self, c: float) -> "PrincipalSpectrum":
        return PrincipalSpectrum(tuple((c * v, m) for v, m in self.entries))

    def negated(self) -> "PrincipalSpectrum":
        return self.scaled(-1.0)


def require_minimal(spec: PrincipalSpectrum) -> None:
    if not spec.is_minimal:
        raise ValueError(f"spectrum is not minimal: trace = {spec.trace:.3e}")


def _require_dim4(spec: PrincipalSpectrum) -> None:
    if spec.n != 4:
        raise ValueError(f"dimension-4 formula called with n = {spec.n}")
    require_minimal(spec)


def power_sum(spec: PrincipalSpectrum, p: int) -> float:
    """Sum of m_i * lambda_i**p."""
    if p < 1:
        raise ValueError("p must be a positive integer")
    return math.fsum(m * v**p for v, m in spec.entries)


def random_minimal_spectrum(rng: np.random.Generator, n: int = 4, bound: float = 10.0) -> PrincipalSpectrum:
    """n-1 values uniform in [-bound, bound]; the last one restores zero trace."""
    head = rng.uniform(-bound, bound, size=n - 1)
    return PrincipalSpectrum.from_values([*head, -math.fsum(head)])


@dataclass(frozen=True)
class CurvatureInvariants:
    scalar: float
    ricci_sq: float
    weyl_sq: Optional[float]
    tracefree_ricci_sq: float
    gbc_integrand: Optional[float]

    def as_dict(self) -> dict:
        return {
            "scalar": self.scalar,
            "ricci_sq": self.ricci_sq,
            "weyl_sq": self.weyl_sq,
            "tracefree_ricci_sq": self.tracefree_ricci_sq,
            "gbc_integrand": self.gbc_integrand,
        }


def _nonneg(x: float, scale: float) -> float:
    # closed forms that vanish identically (LCF, Einstein) can land at -1e-15
    if -1e-13 * max(scale, 1.0) < x < 0.0:
        return 0.0
    return x


def curvature_invariants_dim4(spec: PrincipalSpectrum) -> CurvatureInvariants:
    """Closed-form s, |Ric|^2, |W|^2, |Ric_0|^2 and the GBC integrand for n = 4."""
    _require_dim4(spec)
    a2 = power_sum(spec, 2)
    q4 = power_sum(spec, 4)
    scale = a2 * a2 + q4
    return CurvatureInvariants(
        scalar=12.0 - a2,
        ricci_sq=36.0 - 6.0 * a2 + q4,
        weyl_sq=_nonneg(7.0 / 3.0 * a2 * a2 - 4.0 * q4, scale),
        tracefree_ricci_sq=_nonneg(q4 - 0.25 * a2 * a2, scale),
        gbc_integrand=1.5 * a2 * a2 - 3.0 * q4 - 2.0 * a2 + 12.0,
    )


def gbc_integrand(spec: PrincipalSpectrum) -> tuple[float, float]:
    """The Gauss-Bonnet-Chern integrand two ways.

    Returns ``(principal_form, curvature_form)`` where the first is
    3/2 |A|^4 - 3 sum(lambda^4) - 2|A|^2 + 12 and the second is
    s^2/3 - |Ric|^2 + |W|^2/2 built from the closed-form invariants.
    """
    inv = curvature_invariants_dim4(spec)
    a2 = power_sum(spec, 2)
    q4 = power_sum(spec, 4)
    principal = 1.5 * a2 * a2 - 3.0 * q4 - 2.0 * a2 + 12.0
    curvature = inv.scalar**2 / 3.0 - inv.ricci_sq + inv.weyl_sq / 2.0
    return principal, curvature


def gauss_curvature_tensor(h: np.ndarray) -> np.ndarray:
    """R_ijkl from the Gauss equation for diagonal h; batched over leading axes."""
    h = np.asarray(h, dtype=float)
    n = h.shape[-1]
    eye = np.eye(n)
    H = h[..., :, None] * eye  # diagonal h_ij
    g = np.einsum("ik,jl->ijkl", eye, eye) - np.einsum("il,jk->ijkl", eye, eye)
    return g + np.einsum("...ik,...jl->...ijkl", H, H) - np.einsum("...il,...jk->...ijkl", H, H)


def oracle_arrays(h: np.ndarray) -> dict[str, np.ndarray]:
    """Raw contractions of the Gauss-equation curvature tensor.

    ``h`` has shape (..., n). Weyl and GBC entries are present only for n = 4.
    """
    h = np.asarray(h, dtype=float)
    n = h.shape[-1]
    R = gauss_curvature_tensor(h)
    ric = np.einsum("...ikjk->...ij", R)
    s = np.einsum("...ii->...", ric)
    ric_sq = np.einsum("...ij,...ij->...", ric, ric)
    out = {"scalar": s, "ricci_sq": ric_sq, "tracefree_ricci_sq": ric_sq - s * s / n}
    if n == 4:
        eye = np.eye(4)
        kulkarni_ric = (
            np.einsum("...ik,jl->...ijkl", ric, eye)
            - np.einsum("...il,jk->...ijkl", ric, eye)
            + np.einsum("...jl,ik->...ijkl", ric, eye)
            - np.einsum("...jk,il->...ijkl", ric, eye)
        )
        metric_part = np.einsum("ik,jl->ijkl", eye, eye) - np.einsum("il,jk->ijkl", eye, eye)
        W = R - 0.5 * kulkarni_ric + (s / 6.0)[..., None, None, None, None] * metric_part
        w_sq = np.einsum("...ijkl,...ijkl->...", W, W)
        out["weyl_sq"] = w_sq
        out["gbc_integrand"] = s * s / 3.0 - ric_sq + w_sq / 2.0
    return out


def curvature_tensor_oracle(spec: PrincipalSpectrum) -> CurvatureInvariants:
    """Invariants by assembling R_ijkl and contracting, with no closed forms."""
    if spec.n < 3:
        raise ValueError(f"oracle needs n >= 3, got {spec.n}")
    require_minimal(spec)
    arr = oracle_arrays(spec.values())
    weyl = arr.get("weyl_sq")
    gbc = arr.get("gbc_integrand")
    return CurvatureInvariants(
        scalar=float(arr["scalar"]),
        ricci_sq=float(arr["ricci_sq"]),
        weyl_sq=None if weyl is None else float(weyl),
        tracefree_ricci_sq=float(arr["tracefree_ricci_sq"]),
        gbc_integrand=None if gbc is None else float(gbc),
    )


@dataclass(frozen=True)
class Classification:
    lcf: bool
    einstein: bool
    lcf_residual: float
    einstein_residual: float


def _rel_gap(x: float, y: float) -> float:
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0.0 else abs(x - y) / scale


def classify(spec: PrincipalSpectrum, rtol: float = CLASSIFY_RTOL) -> Classification:
    """Locally-conformally-flat and Einstein flags for n = 4.

    LCF iff |A|^4 = 12/7 sum(lambda^4); Einstein iff 4 sum(lambda^4) = |A|^4.
    """
    _require_dim4(spec)
    a4 = power_sum(spec, 2) ** 2
    q4 = power_sum(spec, 4)
    lcf_res = _rel_gap(a4, 12.0 / 7.0 * q4)
    ein_res = _rel_gap(4.0 * q4, a4)
    return Classification(lcf_res <= rtol, ein_res <= rtol, lcf_res, ein_res)


def spectrum_from_text(text: str) -> PrincipalSpectrum:
    """Parse ``"1:2,-1:2"`` (value:multiplicity pairs; multiplicity defaults to 1)."""
    entries: list[tuple[float, int]] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        value, _, mult = chunk.partition(":")
        entries.append((float(value), int(mult) if mult else 1))
    return PrincipalSpectrum(tuple(entries))


def spectrum_to_list(spec: PrincipalSpectrum) -> list[list]:
    return [[v, m] for v, m in spec.entries]

