"""Otsuki's profile ODE for two-curvature minimal hypersurfaces.

The positive principal curvature lambda (multiplicity n-1) of a minimal
hypersurface in S^(n+1) with two distinct principal curvatures satisfies

    lambda'' = (n+1)/(n lambda) lambda'^2 - n lambda ((n-1) lambda^2 - 1)

along the unit normal direction of the umbilic leaves. Treating lambda'^2 as
a function of lambda turns this into a linear first-order equation whose
integrating factor gives the conserved quantity

    E = lambda'^2 lambda^(-2(n+1)/n) + n^2 (lambda^(2(n-1)/n) + lambda^(-2/n)).

The fixed point lambda = 1/sqrt(n-1) is the Clifford value and a center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize

DEFAULT_STEP = 1e-3
DRIFT_TOL = 1e-9
CLOSURE_TOL = 1e-10
# lambda_min below this fraction of the Clifford value is refused
GUARD_RATIO = 0.3


class IntegrationError(RuntimeError):
    """Raised when a fixed-step integration fails its conservation certificate."""


class AmplitudeGuardError(ValueError):
    """Raised when an orbit dips too close to lambda = 0."""


def _check_n(n: int) -> None:
    if n < 3:
        raise ValueError(f"Otsuki profiles need n >= 3, got {n}")


def _check_positive(lam) -> None:
    if np.any(np.asarray(lam) <= 0):
        raise ValueError("lambda must be positive")


def equilibrium(n: int) -> float:
    return 1.0 / math.sqrt(n - 1)


def is_equilibrium(n: int, lam0: float) -> bool:
    lam_e = equilibrium(n)
    return abs(lam0 - lam_e) <= 1e-12 * lam_e


def ode_rhs(n: int, lam, lamdot):
    _check_positive(lam)
    return _rhs(n, lam, lamdot)


def _rhs(n, lam, lamdot):
    return (n + 1) / (n * lam) * lamdot * lamdot - n * lam * ((n - 1) * lam * lam - 1.0)


def _exponents(n: int) -> tuple[float, float]:
    return 2.0 * (n - 1) / n, -2.0 / n


def potential(n: int, lam):
    """First integral on the zero-velocity set, E(lambda, 0)."""
    _check_positive(lam)
    p, q = _exponents(n)
    return n * n * (lam**p + lam**q)


def first_integral(n: int, lam, lamdot):
    _check_positive(lam)
    return lamdot * lamdot * lam ** (-2.0 * (n + 1) / n) + potential(n, lam)


def potential_gap(n: int, lam_ref: float, lam):
    """V(lam_ref) - V(lam) without cancellation when lam is close to lam_ref."""
    p, q = _exponents(n)
    lam = np.asarray(lam, dtype=float)
    log_ratio = np.log(lam_ref / lam)
    return n * n * (lam**p * np.expm1(p * log_ratio) + lam**q * np.expm1(q * log_ratio))


def lamdot_sq_on_level(n: int, lam_ref: float, lam):
    """lambda'^2 as a function of lambda on the orbit through the turning point lam_ref."""
    return np.asarray(lam) ** (2.0 * (n + 1) / n) * potential_gap(n, lam_ref, lam)


def _bisect(f: Callable[[float], float], lo: float, hi: float) -> float:
    # to machine precision; f(lo) and f(hi) have opposite signs
    flo = f(lo)
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def turning_points(n: int, lam0: float) -> tuple[float, float]:
    """(lambda_min, lambda_max) of the orbit through the turning point lam0."""
    _check_n(n)
    _check_positive(lam0)
    if is_equilibrium(n, lam0):
        return lam0, lam0
    lam_e = equilibrium(n)
    e0 = potential(n, lam0)

    def g(x):
        return potential(n, x) - e0

    if lam0 > lam_e:
        lo = lam_e
        while g(lo) < 0:
            lo *= 0.5
        return _bisect(g, lo, lam_e), lam0
    hi = lam_e
    while g(hi) < 0:
        hi *= 2.0
    return lam0, _bisect(g, lam_e, hi)


def linear_period(n: int) -> float:
    # linearization at the center: lambda'' = -2n (lambda - lambda_e)
    return 2.0 * math.pi / math.sqrt(2.0 * n)


def level_set_integral(n: int, lam0: float, weight: Callable | None = None, epsrel: float = 1e-13) -> float:
    """Integral over one period of weight(lambda) dt, computed in the lambda variable.

    dt = d lambda / |lambda'| has inverse-square-root singularities at both
    turning points; lambda = a + (b-a) sin^2(theta) removes them. Each half of
    the theta range measures its energy gap from its own endpoint so the
    integrand stays accurate near the turning points.
    """
    _check_n(n)
    if is_equilibrium(n, lam0):
        raise ValueError("level-set integral undefined at the equilibrium")
    a, b = turning_points(n, lam0)
    w = b - a
    wfun = (lambda lam: 1.0) if weight is None else weight
    pw = (n + 1.0) / n

    def lower(theta):
        s2 = math.sin(theta) ** 2
        lam = a + w * s2
        # V(a) - V(lam) with log(a/lam) = -log1p(w s2 / a)
        gap = _gap_from_log(n, lam, -math.log1p(w * s2 / a))
        return _dt_dtheta(theta, w, lam, pw, gap) * wfun(lam)

    def upper(theta):
        c2 = math.cos(theta) ** 2
        lam = b - w * c2
        gap = _gap_from_log(n, lam, -math.log1p(-w * c2 / b))
        return _dt_dtheta(theta, w, lam, pw, gap) * wfun(lam)

    opts = dict(epsabs=0.0, epsrel=epsrel, limit=200)
    lo_half, _ = integrate.quad(lower, 0.0, math.pi / 4, **opts)
    hi_half, _ = integrate.quad(upper, math.pi / 4, math.pi / 2, **opts)
    return 2.0 * (lo_half + hi_half)


def _gap_from_log(n: int, lam: float, log_ratio: float) -> float:
    p, q = _exponents(n)
    return n * n * (lam**p * math.expm1(p * log_ratio) + lam**q * math.expm1(q * log_ratio))


def _dt_dtheta(theta, w, lam, pw, gap):
    # d lambda / d theta divided by |lambda'| = lam^pw sqrt(gap)
    return 2.0 * w * math.sin(theta) * math.cos(theta) / (lam**pw * math.sqrt(abs(gap)))


def period_quadrature(n: int, lam0: float) -> float:
    """Period from T = 2 * integral of d lambda / |lambda'| between the turning points."""
    return level_set_integral(n, lam0)


def profile_abs_A2(n: int, lam):
    """|A|^2 = (n-1) lambda^2 + mu^2 with mu = -(n-1) lambda."""
    return n * (n - 1) * np.asarray(lam) ** 2


def grad_A_norm_sq(n: int, lamdot, coefficient: str = "corrected"):
    """|nabla A|^2 along a profile.

    ``"corrected"`` uses (n-1)(n+2) lambda'^2 from differentiating the
    second fundamental form; ``"printed"`` uses n(n-1) lambda'^2 and is kept
    only to exhibit that it fails Simons' identity.
    """
    if coefficient == "corrected":
        c = (n - 1) * (n + 2)
    elif coefficient == "printed":
        c = n * (n - 1)
    else:
        raise ValueError(f"unknown coefficient {coefficient!r}")
    return c * np.asarray(lamdot) ** 2


def _rk4_step(n: int, lam: float, lamdot: float, h: float) -> tuple[float, float]:
    k1l, k1v = lamdot, _rhs(n, lam, lamdot)
    l2, v2 = lam + 0.5 * h * k1l, lamdot + 0.5 * h * k1v
    k2l, k2v = v2, _rhs(n, l2, v2)
    l3, v3 = lam + 0.5 * h * k2l, lamdot + 0.5 * h * k2v
    k3l, k3v = v3, _rhs(n, l3, v3)
    l4, v4 = lam + h * k3l, lamdot + h * k3v
    k4l, k4v = v4, _rhs(n, l4, v4)
    return (
        lam + h / 6.0 * (k1l + 2.0 * k2l + 2.0 * k3l + k4l),
        lamdot + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )


def integrate_steps(n: int, lam: float, lamdot: float, step: float, nsteps: int) -> np.ndarray:
    """Classical RK4 trajectory; returns an (nsteps+1, 2) array of (lambda, lambda')."""
    out = np.empty((nsteps + 1, 2))
    out[0] = lam, lamdot
    for j in range(nsteps):
        lam, lamdot = _rk4_step(n, lam, lamdot, step)
        if lam <= 0:
            raise IntegrationError(f"lambda left the positive axis at step {j + 1}")
        out[j + 1] = lam, lamdot
    return out


def _hermite_root(t0, h, v0, a0, v1, a1) -> float:
    """Zero of the cubic Hermite interpolant of lambda' on [t0, t0 + h]."""

    def cubic(s):
        s2, s3 = s * s, s * s * s
        return (
            (2 * s3 - 3 * s2 + 1) * v0
            + (s3 - 2 * s2 + s) * h * a0
            + (-2 * s3 + 3 * s2) * v1
            + (s3 - s2) * h * a1
        )

    return t0 + h * optimize.brentq(cubic, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def measure_period(n: int, lam0: float, step: float, max_time: float | None = None) -> float:
    """Period from fixed-step RK4 started at the turning point (lam0, 0).

    The orbit closes at the second sign change of lambda'; that crossing is
    located on the cubic Hermite interpolant built from lambda' and lambda''.
    """
    _check_n(n)
    if step <= 0:
        raise ValueError("step must be positive")
    if max_time is None:
        max_time = 20.0 * linear_period(n)
    lam, lamdot, t = lam0, 0.0, 0.0
    crossings = 0
    while t < max_time:
        new_lam, new_dot = _rk4_step(n, lam, lamdot, step)
        if new_lam <= 0:
            raise IntegrationError("lambda left the positive axis")
        # the start sits on lambda' = 0; only count strict sign changes after it
        if t > 0 and (lamdot * new_dot < 0 or new_dot == 0.0):
            crossings += 1
            if crossings == 2:
                return _hermite_root(
                    t, step, lamdot, ode_rhs(n, lam, lamdot), new_dot, ode_rhs(n, new_lam, new_dot)
                )
        lam, lamdot, t = new_lam, new_dot, t + step
    raise IntegrationError(f"no closed orbit detected within t = {max_time:.3g}")


@dataclass(frozen=True, eq=False)
class OtsukiProfile:
    """One sampled period of an Otsuki profile on a uniform grid.

    ``t``, ``lam`` and ``lamdot`` hold N+1 samples with t[N] = period; the
    final sample is the integrator's return to the start state.
    """

    n: int
    t: np.ndarray
    lam: np.ndarray
    lamdot: np.ndarray
    period: float
    energy: float
    lam_min: float
    lam_max: float
    energy_drift: float
    closure_error: float
    degenerate: bool = False

    @property
    def lam0(self) -> float:
        return float(self.lam[0])

    @property
    def step(self) -> float:
        return self.period / (len(self.t) - 1)

    @property
    def abs_A2(self) -> np.ndarray:
        return profile_abs_A2(self.n, self.lam)

    def energies(self) -> np.ndarray:
        return first_integral(self.n, self.lam, self.lamdot)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


def constant_profile(n: int, step: float = DEFAULT_STEP) -> OtsukiProfile:
    """The Clifford limit: lambda = 1/sqrt(n-1) sampled over the small-amplitude period."""
    _check_n(n)
    lam_e = equilibrium(n)
    period = linear_period(n)
    nsteps = _even_steps(period, step)
    t = np.linspace(0.0, period, nsteps + 1)
    return OtsukiProfile(
        n=n,
        t=_frozen(t),
        lam=_frozen(np.full_like(t, lam_e)),
        lamdot=_frozen(np.zeros_like(t)),
        period=period,
        energy=float(potential(n, lam_e)),
        lam_min=lam_e,
        lam_max=lam_e,
        energy_drift=0.0,
        closure_error=0.0,
        degenerate=True,
    )


def _even_steps(period: float, step: float) -> int:
    return max(2 * math.ceil(period / (2.0 * step)), 4)


def check_amplitude(n: int, lam0: float, guard_ratio: float = GUARD_RATIO) -> tuple[float, float]:
    lam_min, lam_max = turning_points(n, lam0)
    floor = guard_ratio * equilibrium(n)
    if lam_min < floor:
        raise AmplitudeGuardError(
            f"orbit through lambda0={lam0:g} reaches lambda_min={lam_min:.4g} "
            f"below the guard {floor:.4g} (n={n})"
        )
    return lam_min, lam_max


def integrate_profile(
    n: int,
    lam0: float,
    step: float = DEFAULT_STEP,
    *,
    drift_tol: float = DRIFT_TOL,
    closure_tol: float = CLOSURE_TOL,
    guard_ratio: float = GUARD_RATIO,
) -> OtsukiProfile:
    """Integrate one full oscillation starting from the turning point (lam0, 0).

    The period is first detected with the requested step, then the orbit is
    re-integrated on the uniform grid of an even number of steps that exactly
    spans it, so stored samples are ready for periodic composite quadrature.
    """
    _check_n(n)
    _check_positive(lam0)
    if step <= 0:
        raise ValueError("step must be positive")
    if is_equilibrium(n, lam0):
        return constant_profile(n, step)
    lam_min, lam_max = check_amplitude(n, lam0, guard_ratio)

    period = measure_period(n, lam0, step)
    nsteps = _even_steps(period, step)
    h = period / nsteps
    traj = integrate_steps(n, lam0, 0.0, h, nsteps)
    lam, lamdot = traj[:, 0], traj[:, 1]

    energies = first_integral(n, lam, lamdot)
    e0 = energies[0]
    drift = float(np.max(np.abs(energies - e0)) / abs(e0))
    if drift > drift_tol:
        raise IntegrationError(f"energy drift {drift:.3e} exceeds {drift_tol:.1e}; reduce the step")
    closure = float(max(abs(lam[-1] - lam0), abs(lamdot[-1])))
    if closure > closure_tol:
        raise IntegrationError(f"orbit fails to close: error {closure:.3e} > {closure_tol:.1e}")
    if not (lam_min < equilibrium(n) < lam_max):
        raise IntegrationError("turning points do not straddle the Clifford value")

    return OtsukiProfile(
        n=n,
        t=_frozen(np.arange(nsteps + 1) * h),
        lam=_frozen(lam),
        lamdot=_frozen(lamdot),
        period=period,
        energy=float(e0),
        lam_min=lam_min,
        lam_max=lam_max,
        energy_drift=drift,
        closure_error=closure,
    )


def profile_from_min(n: int, lam_min: float, step: float = DEFAULT_STEP, **kwargs) -> OtsukiProfile:
    """Profile whose lower turning point is ``lam_min``."""
    return integrate_profile(n, lam_min, step, **kwargs)
