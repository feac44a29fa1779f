"""Period integrals against the leaf measure of an Otsuki profile.

Along a profile the umbilic leaves have volume proportional to
lambda^(-(n-1)/n), so the hypersurface measure over one period is
rho(lambda) dt with rho that power (normalized at lambda(0)). For any radial
function f the Laplacian satisfies  Delta f * rho = d/dt (f' lambda' rho),
which is what makes all the integral identities below close over a period.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import otsuki
from .otsuki import OtsukiProfile, grad_A_norm_sq, profile_abs_A2
from .pinching import sign_factor

FD_RTOL = 1e-6


class InconsistentRadialFunction(ValueError):
    """f'' does not match the derivative of f'."""


def leaf_density(n: int, lam, lam_ref: float):
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0) or lam_ref <= 0:
        raise ValueError("lambda must be positive")
    return (lam / lam_ref) ** (-(n - 1) / n)


def _simpson_weights(nsteps: int) -> np.ndarray:
    # periodic composite Simpson: sample N wraps onto sample 0
    if nsteps % 2:
        raise ValueError("Simpson quadrature needs an even number of intervals")
    w = np.full(nsteps, 4.0)
    w[0::2] = 2.0
    return w / 3.0


def period_integral(profile: OtsukiProfile, g: Callable) -> float:
    """Integral of g(lambda, lambda') * rho dt over one period."""
    lam = profile.lam[:-1]
    lamdot = profile.lamdot[:-1]
    values = np.broadcast_to(g(lam, lamdot), lam.shape) * leaf_density(profile.n, lam, profile.lam[0])
    return float(profile.step * np.dot(_simpson_weights(len(lam)), values))


def measure_total(profile: OtsukiProfile) -> float:
    return period_integral(profile, lambda lam, lamdot: 1.0)


def period_average(profile: OtsukiProfile, g: Callable) -> float:
    return period_integral(profile, g) / measure_total(profile)


def sigma_k(profile: OtsukiProfile, k: int) -> float:
    """Normalized k-th moment of |A|^2; the leaf-volume constant cancels."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n = profile.n
    return period_average(profile, lambda lam, lamdot: profile_abs_A2(n, lam) ** k)


@dataclass(frozen=True)
class RadialFunction:
    f: Callable
    df: Callable
    d2f: Callable
    label: str = "f"

    def consistency_error(self, lam_grid) -> float:
        """Max centered-difference mismatch of f' against f'', scaled to the grid."""
        lam = np.asarray(lam_grid, dtype=float)
        h = 1e-4 * lam
        fd = (self.df(lam + h) - self.df(lam - h)) / (2.0 * h)
        d2 = self.d2f(lam)
        scale = np.max(np.abs(d2)) + np.max(np.abs(self.df(lam) / lam))
        return float(np.max(np.abs(fd - d2)) / scale)

    def validate(self, lam_grid, rtol: float = FD_RTOL) -> None:
        err = self.consistency_error(lam_grid)
        if not err <= rtol:
            raise InconsistentRadialFunction(f"{self.label}: f'' mismatch {err:.3e} > {rtol:.0e}")


def power_function(p: float) -> RadialFunction:
    return RadialFunction(
        lambda x: x**p,
        lambda x: p * x ** (p - 1),
        lambda x: p * (p - 1) * x ** (p - 2),
        f"lambda^{p:g}",
    )


def log_function() -> RadialFunction:
    return RadialFunction(np.log, lambda x: 1.0 / x, lambda x: -1.0 / (x * x), "ln lambda")


def f_k(n: int, k: int, variant: str = "corrected") -> RadialFunction:
    """Test function n^(k-1) (ln lambda + sum_{i<k} (n-1)^i lambda^(2i) / (2i)).

    ``variant="printed"`` swaps in the second derivative with coefficients
    (n-1)^i / (2i-1), which disagrees with d/dlambda of f' once k >= 3.
    """
    if k < 2:
        raise ValueError(f"f_k needs k >= 2, got {k}")
    if variant not in ("corrected", "printed"):
        raise ValueError(f"unknown variant {variant!r}")
    scale = float(n) ** (k - 1)
    idx = range(1, k)

    def f(x):
        return scale * (np.log(x) + sum((n - 1) ** i / (2 * i) * x ** (2 * i) for i in idx))

    def df(x):
        return scale * (1.0 / x + sum((n - 1) ** i * x ** (2 * i - 1) for i in idx))

    if variant == "corrected":
        def d2f(x):
            return scale * (-1.0 / (x * x) + sum((2 * i - 1) * (n - 1) ** i * x ** (2 * i - 2) for i in idx))
    else:
        def d2f(x):
            return scale * (-1.0 / (x * x) + sum((n - 1) ** i / (2 * i - 1) * x ** (2 * i - 2) for i in idx))

    return RadialFunction(f, df, d2f, f"f_{k}[{variant}]")


def laplacian_radial(n: int, f: RadialFunction, lam, lamdot):
    """Delta f = (f'' + 2 f'/(n lambda)) lambda'^2 - n lambda ((n-1) lambda^2 - 1) f'."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0):
        raise ValueError("lambda must be positive")
    d1 = f.df(lam)
    return (f.d2f(lam) + 2.0 / (n * lam) * d1) * lamdot**2 - n * lam * ((n - 1) * lam**2 - 1.0) * d1


@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float
    residual: float


def normalized_residual(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + 1.0)


def _lam_grid(profile: OtsukiProfile) -> np.ndarray:
    lo, hi = profile.lam_min, profile.lam_max
    if hi - lo < 1e-6 * hi:
        lo, hi = 0.99 * lo, 1.01 * hi
    return np.linspace(lo, hi, 33)


def verify_keyeq(profile: OtsukiProfile, f: RadialFunction, strict: bool = True) -> IdentityCheck:
    """Average over one period of  n lambda((n-1)lambda^2-1) f'  vs  (f'' + 2f'/(n lambda)) lambda'^2.

    Averages (rather than raw integrals) keep the residual independent of the
    leaf-volume normalization. ``strict=False`` skips the f'/f'' consistency
    gate so inconsistent functions can be shown to fail the identity.
    """
    if strict:
        f.validate(_lam_grid(profile))
    n = profile.n
    lhs = period_average(profile, lambda lam, lamdot: n * lam * ((n - 1) * lam**2 - 1.0) * f.df(lam))
    rhs = period_average(profile, lambda lam, lamdot: (f.d2f(lam) + 2.0 / (n * lam) * f.df(lam)) * lamdot**2)
    return IdentityCheck(lhs, rhs, normalized_residual(lhs, rhs))


@dataclass(frozen=True)
class SigmaIdentity:
    lhs: float
    rhs: float
    residual: float
    s_min: float
    s_max: float


def verify_sigma_identity(profile: OtsukiProfile, k: int, variant: str = "corrected") -> SigmaIdentity:
    """Average of |A|^(2k) - n^k against n^(k-1) S(lambda) lambda'^2 over one period."""
    if k < 2:
        raise ValueError("k must be >= 2")
    n = profile.n
    lhs = period_average(profile, lambda lam, lamdot: profile_abs_A2(n, lam) ** k - float(n) ** k)
    rhs = period_average(
        profile, lambda lam, lamdot: float(n) ** (k - 1) * sign_factor(n, k, lam, variant) * lamdot**2
    )
    s = sign_factor(n, k, profile.lam, variant)
    return SigmaIdentity(lhs, rhs, normalized_residual(lhs, rhs), float(s.min()), float(s.max()))


def perdomo_margin(profile: OtsukiProfile) -> float:
    return profile.n - sigma_k(profile, 1)


def _abs_A2_function(n: int) -> RadialFunction:
    c = float(n * (n - 1))
    return RadialFunction(lambda x: c * x * x, lambda x: 2.0 * c * x, lambda x: np.full_like(x, 2.0 * c), "|A|^2")


def simons_residuals(profile: OtsukiProfile, coefficient: str = "corrected") -> np.ndarray:
    """Pointwise 1/2 Delta|A|^2 - (n - |A|^2)|A|^2 - |nabla A|^2 on every sample."""
    n = profile.n
    lam, lamdot = profile.lam, profile.lamdot
    a2 = profile_abs_A2(n, lam)
    half_lap = 0.5 * laplacian_radial(n, _abs_A2_function(n), lam, lamdot)
    return half_lap - (n - a2) * a2 - grad_A_norm_sq(n, lamdot, coefficient)


def simons_pointwise(profile: OtsukiProfile, coefficient: str = "corrected") -> float:
    return float(np.max(np.abs(simons_residuals(profile, coefficient))))


def simons_integrated(profile: OtsukiProfile, coefficient: str = "corrected") -> float:
    """Residual of  avg|A|^4 = avg|nabla A|^2 + n avg|A|^2."""
    n = profile.n
    lhs = period_average(profile, lambda lam, lamdot: profile_abs_A2(n, lam) ** 2)
    rhs = period_average(
        profile, lambda lam, lamdot: grad_A_norm_sq(n, lamdot, coefficient) + n * profile_abs_A2(n, lam)
    )
    return normalized_residual(lhs, rhs)


def euler_integral_n4(profile: OtsukiProfile) -> float:
    """Period integral of (|A|^4/4 + 2|A|^2 - 12) rho for n = 4, the negated GBC integrand."""
    if profile.n != 4:
        raise ValueError("the Euler integrand is specific to n = 4")
    return period_integral(profile, lambda lam, lamdot: 0.25 * profile_abs_A2(4, lam) ** 2 + 2.0 * profile_abs_A2(4, lam) - 12.0)


def sigma_k_quadrature(n: int, lam0: float, k: int) -> float:
    """sigma_k from lambda-space quadrature; independent of the RK4 samples."""
    lam_ref = lam0

    def rho(lam):
        return (lam / lam_ref) ** (-(n - 1) / n)

    num = otsuki.level_set_integral(n, lam0, lambda lam: (n * (n - 1) * lam * lam) ** k * rho(lam))
    den = otsuki.level_set_integral(n, lam0, rho)
    return num / den


@dataclass(frozen=True)
class SigmaReport:
    n: int
    kmax: int
    sigma: dict[int, float]
    minA2: float
    maxA2: float
    perdomo_margin: float
    keyeq_residual: float
    identity_residual: dict[int, float]
    simons_pointwise_max: float
    simons_integrated_residual: float
    measure_total: float

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "kmax": self.kmax,
            "sigma": {str(k): v for k, v in self.sigma.items()},
            "minA2": self.minA2,
            "maxA2": self.maxA2,
            "perdomo_margin": self.perdomo_margin,
            "keyeq_residual": self.keyeq_residual,
            "identity_residual": {str(k): v for k, v in self.identity_residual.items()},
            "simons_pointwise_max": self.simons_pointwise_max,
            "simons_integrated_residual": self.simons_integrated_residual,
            "measure_total": self.measure_total,
        }


def sigma_report(profile: OtsukiProfile, kmax: int = 3, variant: str = "corrected") -> SigmaReport:
    """All per-profile quantities; keyeq_residual is the worst over f_2..f_kmax."""
    if kmax < 2:
        raise ValueError("kmax must be >= 2")
    n = profile.n
    a2 = profile.abs_A2
    return SigmaReport(
        n=n,
        kmax=kmax,
        sigma={k: sigma_k(profile, k) for k in range(1, kmax + 1)},
        minA2=float(a2.min()),
        maxA2=float(a2.max()),
        perdomo_margin=perdomo_margin(profile),
        keyeq_residual=max(verify_keyeq(profile, f_k(n, k)).residual for k in range(2, kmax + 1)),
        identity_residual={k: verify_sigma_identity(profile, k, variant).residual for k in range(2, kmax + 1)},
        simons_pointwise_max=simons_pointwise(profile),
        simons_integrated_residual=simons_integrated(profile),
        measure_total=measure_total(profile),
    )
