"""The acceptance suite: one group of named checks per acceptance criterion.

Each ``criterion_*`` function returns ``(details, checks)``. ``details`` is a
JSON-ready dict of the numbers behind the verdicts; ``checks`` are the
verdicts themselves. Nothing here reads the clock, so the output of
:func:`run_suite` is a pure function of the seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from . import clifford, lowdim, measure, otsuki, pinching, spectra

PASS, FAIL, REPORT = "pass", "fail", "report-only"

PROFILE_NS = (3, 4, 5)
PROFILE_FACTORS = (0.75, 0.9, 1.1)
CONVERGENCE_STEPS = (0.1, 0.05, 0.025, 0.0125)
EULER_FACTORS = (0.7, 0.8, 0.9, 1.1, 1.2)
RANDOM_SPECTRA = 10_000


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    value: Optional[float]
    tolerance: Optional[float]
    relation: str

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def passed(self) -> bool:
        return self.status != FAIL


def check_le(name: str, value: float, tol: float) -> Check:
    return Check(name, PASS if value <= tol else FAIL, float(value), float(tol), "<=")


def check_ge(name: str, value: float, tol: float) -> Check:
    return Check(name, PASS if value >= tol else FAIL, float(value), float(tol), ">=")


def check_gt(name: str, value: float, bound: float) -> Check:
    return Check(name, PASS if value > bound else FAIL, float(value), float(bound), ">")


def check_true(name: str, ok: bool) -> Check:
    return Check(name, PASS if ok else FAIL, 1.0 if ok else 0.0, 1.0, "==")


def report(name: str, value: float) -> Check:
    return Check(name, REPORT, float(value), None, "report")


def rel_err(x: float, y: float, floor: float = 1.0) -> float:
    return abs(x - y) / max(abs(x), abs(y), floor)


def quadratic_root(a: float, b: float, c: float) -> float:
    """Positive root of a x^2 + b x + c with a > 0 > c, in cancellation-free form."""
    return -2.0 * c / (b + math.sqrt(b * b - 4.0 * a * c))


class ProfileBank:
    """Profiles shared across criteria, built once per suite run."""

    def __init__(self, step: float = otsuki.DEFAULT_STEP):
        self.step = step
        self._cache: dict[tuple[int, float], otsuki.OtsukiProfile] = {}

    def get(self, n: int, lam0: float) -> otsuki.OtsukiProfile:
        key = (n, lam0)
        if key not in self._cache:
            self._cache[key] = otsuki.integrate_profile(n, lam0, self.step)
        return self._cache[key]

    def standard(self):
        """The (n, lambda0) grid {3,4,5} x {0.75, 0.9, 1.1}/sqrt(n-1)."""
        for n in PROFILE_NS:
            for fac in PROFILE_FACTORS:
                lam0 = fac * otsuki.equilibrium(n)
                yield n, fac, lam0, self.get(n, lam0)

    def all_profiles(self):
        return list(self._cache.values())


def criterion_1():
    worst_exact = 0.0
    worst_float = 0.0
    for n in range(2, 9):
        for m in range(1, n):
            spec = clifford.clifford_spectrum(n, m)
            a2 = spectra.power_sum(spec, 2)
            for k in range(1, 6):
                target = n**k
                worst_exact = max(worst_exact, abs(clifford.clifford_sigma(n, m, k) - target) / target)
                worst_float = max(worst_float, abs(a2**k - target) / target)
    details = {"max_rel_err_exact": worst_exact, "max_rel_err_float_spectrum": worst_float}
    return details, [
        check_le("c01.clifford_sigma_exact", worst_exact, 1e-12),
        check_le("c01.clifford_sigma_float_spectrum", worst_float, 1e-12),
    ]


def random_spectra_values(seed: int, count: int = RANDOM_SPECTRA) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.array([spectra.random_minimal_spectrum(rng).values() for _ in range(count)])


def criterion_2(seed: int, count: int = RANDOM_SPECTRA):
    values = random_spectra_values(seed, count)
    oracle = spectra.oracle_arrays(values)
    worst_forms = 0.0
    worst_oracle = {key: 0.0 for key in ("scalar", "ricci_sq", "weyl_sq", "tracefree_ricci_sq", "gbc_integrand")}
    for j, row in enumerate(values):
        spec = spectra.PrincipalSpectrum.from_values(row)
        principal, curvature = spectra.gbc_integrand(spec)
        worst_forms = max(worst_forms, rel_err(principal, curvature))
        closed = spectra.curvature_invariants_dim4(spec)
        for key in worst_oracle:
            worst_oracle[key] = max(worst_oracle[key], rel_err(getattr(closed, key), float(oracle[key][j])))
    worst = max(worst_oracle.values())
    details = {
        "seed": seed,
        "count": count,
        "max_rel_err_gbc_forms": worst_forms,
        "max_rel_err_oracle": worst_oracle,
        "checksum": float(np.sum(values * values)),
    }
    return details, [
        check_le("c02.gbc_forms_agree", worst_forms, 1e-10),
        check_le("c02.closed_forms_vs_oracle", worst, 1e-9),
    ]


def criterion_3():
    unit = clifford.SIXTEEN_PI_SQ
    cases = {
        "S4": clifford.sphere_gbc_check(),
        "S2xS2": clifford.clifford_gbc_check(2),
        "S1xS3": clifford.clifford_gbc_check(1),
    }
    s1s3_integrand, _ = spectra.gbc_integrand(clifford.clifford_spectrum(4, 1))
    details = {name: {"lhs": lhs, "rhs": rhs} for name, (lhs, rhs) in cases.items()}
    details["S1xS3_pointwise_integrand"] = s1s3_integrand
    checks = [check_le(f"c03.gbc_{name}", rel_err(lhs, rhs, unit), 1e-10) for name, (lhs, rhs) in cases.items()]
    checks.append(check_le("c03.S1xS3_integrand_pointwise", abs(s1s3_integrand) / 12.0, 1e-10))
    return details, checks


def convergence_orders(n: int, lam0: float, steps=CONVERGENCE_STEPS) -> tuple[list[float], list[float]]:
    exact = otsuki.period_quadrature(n, lam0)
    errors = [abs(otsuki.measure_period(n, lam0, h) - exact) for h in steps]
    orders = [math.log(errors[i] / errors[i + 1]) / math.log(steps[i] / steps[i + 1]) for i in range(len(errors) - 1)]
    return errors, orders


def criterion_4(bank: ProfileBank):
    rows = []
    worst_drift = worst_period = worst_order = 0.0
    for n, fac, lam0, prof in bank.standard():
        t_quad = otsuki.period_quadrature(n, lam0)
        errors, orders = convergence_orders(n, lam0)
        rows.append(
            {
                "n": n,
                "factor": fac,
                "lambda0": lam0,
                "period": prof.period,
                "period_quadrature": t_quad,
                "energy_drift": prof.energy_drift,
                "convergence_errors": errors,
                "convergence_orders": orders,
            }
        )
        worst_drift = max(worst_drift, prof.energy_drift)
        worst_period = max(worst_period, abs(prof.period - t_quad))
        worst_order = max(worst_order, max(abs(p - 4.0) for p in orders))
    return {"profiles": rows}, [
        check_le("c04.energy_drift", worst_drift, 1e-9),
        check_le("c04.period_vs_quadrature", worst_period, 1e-7),
        check_le("c04.convergence_order_deviation", worst_order, 0.3),
    ]


def keyeq_functions(n: int) -> list[measure.RadialFunction]:
    return [measure.f_k(n, k) for k in range(2, 6)] + [measure.power_function(2.0), measure.log_function()]


def criterion_5(bank: ProfileBank):
    worst = 0.0
    printed_min = math.inf
    printed_fd_min = math.inf
    rows = []
    for n, fac, lam0, prof in bank.standard():
        res = {f.label: measure.verify_keyeq(prof, f).residual for f in keyeq_functions(n)}
        bad = {}
        for k in range(3, 6):
            f = measure.f_k(n, k, "printed")
            bad[f.label] = measure.verify_keyeq(prof, f, strict=False).residual
            grid = np.linspace(prof.lam_min, prof.lam_max, 33)
            printed_fd_min = min(printed_fd_min, f.consistency_error(grid))
        worst = max(worst, max(res.values()))
        printed_min = min(printed_min, min(bad.values()))
        rows.append({"n": n, "factor": fac, "corrected": res, "printed": bad})
    return {"profiles": rows, "printed_fd_mismatch_min": printed_fd_min}, [
        check_le("c05.keyeq_residual", worst, 1e-6),
        check_ge("c05.printed_f2_residual_k_ge_3", printed_min, 1e-2),
        check_ge("c05.printed_f2_fails_fd_gate", printed_fd_min, measure.FD_RTOL),
    ]


def near_clifford_profiles(bank: ProfileBank, offset: float = 9e-4):
    for n in PROFILE_NS:
        lam_e = otsuki.equilibrium(n)
        for sign in (-1.0, 1.0):
            yield n, bank.get(n, lam_e + sign * offset)


def criterion_6(bank: ProfileBank):
    near = [(n, measure.perdomo_margin(p)) for n, p in near_clifford_profiles(bank)]
    everything = bank.all_profiles()
    excess = max(measure.sigma_k(p, 1) - p.n for p in everything)
    nonconstant_min = min(measure.perdomo_margin(p) for p in everything if not p.degenerate)
    constant_margins = [abs(measure.perdomo_margin(otsuki.constant_profile(n))) for n in PROFILE_NS]
    details = {
        "profiles_checked": len(everything),
        "max_sigma1_minus_n": excess,
        "near_clifford_margins": [[n, m] for n, m in near],
        "min_nonconstant_margin": nonconstant_min,
        "constant_profile_margin_max": max(constant_margins),
    }
    return details, [
        check_le("c06.sigma1_le_n", excess, 1e-8),
        check_le("c06.near_clifford_margin", max(m for _, m in near), 1e-4),
        check_gt("c06.nonconstant_margin_positive", nonconstant_min, 0.0),
        check_le("c06.constant_profile_margin", max(constant_margins), 1e-12),
    ]


def pinching_profiles(bank: ProfileBank, n: int, k: int):
    """Profiles with lambda_min^2 >= x*(n, k): the threshold itself and two points inside."""
    x_star, _ = pinching.pinching_root(n, k)
    lo = math.sqrt(x_star)
    lam_e = otsuki.equilibrium(n)
    for frac in (0.0, 0.4, 0.8):
        yield bank.get(n, lo + frac * (lam_e - lo))


def criterion_7(bank: ProfileBank):
    worst_gap = math.inf
    rows = []
    for n in PROFILE_NS:
        for k in (2, 3):
            delta = pinching.delta_k(n, k)
            for prof in pinching_profiles(bank, n, k):
                ident = measure.verify_sigma_identity(prof, k)
                gap = measure.sigma_k(prof, k) - n**k
                rows.append(
                    {
                        "n": n,
                        "k": k,
                        "lambda_min": prof.lam_min,
                        "minA2": float(prof.abs_A2.min()),
                        "delta": delta,
                        "sigma_k_minus_nk": gap,
                        "sign_factor_min": ident.s_min,
                    }
                )
                worst_gap = min(worst_gap, gap)
    limit = []
    for n in PROFILE_NS:
        lam_e = otsuki.equilibrium(n)
        for eps in (1e-2, 1e-3, 1e-4):
            prof = bank.get(n, lam_e * (1.0 + eps))
            for k in (2, 3):
                limit.append({"n": n, "k": k, "eps": eps, "abs_gap": abs(measure.sigma_k(prof, k) - n**k)})
    last = max(row["abs_gap"] for row in limit if row["eps"] == 1e-4)
    return {"pinched": rows, "clifford_limit": limit}, [
        check_ge("c07.sigma_k_minus_nk", worst_gap, -1e-7),
        check_le("c07.clifford_limit_gap", last, 1e-4),
    ]


def criterion_8():
    worst_d2 = 0.0
    decreasing = True
    below_n = True
    tables = {}
    for n in range(3, 11):
        worst_d2 = max(worst_d2, abs(pinching.delta_k(n, 2) - n * (n - 2) / (n + 2)))
        for variant in pinching.VARIANTS:
            try:
                table = pinching.monotonicity_table(n, 6, variant)
            except RuntimeError:
                decreasing = below_n = False
                continue
            below_n &= all(d < n for d in table.deltas())
            tables[f"{n}:{variant}"] = table.deltas()
    k2_gap = max(abs(pinching.delta_k(n, 2, "corrected") - pinching.delta_k(n, 2, "printed")) for n in range(3, 11))
    corr = pinching.delta_k(3, 3, "corrected")
    prnt = pinching.delta_k(3, 3, "printed")
    corr_oracle = 6.0 * quadratic_root(44.0, 10.0, -1.0)
    prnt_oracle = 6.0 * quadratic_root(12.0, 10.0, -1.0)
    details = {
        "delta_tables": tables,
        "delta_3_3": {"corrected": corr, "printed": prnt, "corrected_oracle": corr_oracle, "printed_oracle": prnt_oracle},
    }
    return details, [
        check_le("c08.delta2_closed_form", worst_d2, 1e-12),
        check_true("c08.strictly_decreasing_k_le_6", decreasing),
        check_true("c08.all_below_n", below_n),
        check_le("c08.variants_agree_k2", k2_gap, 1e-13),
        check_ge("c08.variants_differ_3_3", abs(prnt - corr) / corr, 0.05),
        check_le("c08.corrected_vs_quadratic", abs(corr - corr_oracle), 1e-12),
        check_le("c08.printed_vs_quadratic", abs(prnt - prnt_oracle), 1e-12),
    ]


def criterion_9(bank: ProfileBank):
    worst_point = worst_int = worst_printed_gap = 0.0
    printed_peak = math.inf
    for n, _, _, prof in bank.standard():
        worst_point = max(worst_point, measure.simons_pointwise(prof))
        worst_int = max(worst_int, measure.simons_integrated(prof))
        res = measure.simons_residuals(prof, "printed")
        expected = 2.0 * (n - 1) * prof.lamdot**2
        worst_printed_gap = max(worst_printed_gap, float(np.max(np.abs(res - expected))))
        printed_peak = min(printed_peak, float(np.max(np.abs(res))))
    details = {
        "pointwise_max": worst_point,
        "integrated_max": worst_int,
        "printed_minus_2(n-1)lamdot2_max": worst_printed_gap,
        "printed_residual_peak_min": printed_peak,
    }
    return details, [
        check_le("c09.simons_pointwise", worst_point, 1e-8),
        check_le("c09.simons_integrated", worst_int, 1e-8),
        check_le("c09.printed_residual_is_2(n-1)lamdot2", worst_printed_gap, 1e-8),
        check_ge("c09.printed_residual_nonzero", printed_peak, 1e-3),
    ]


def criterion_10():
    sd = lowdim.SurfaceData
    sphere = lowdim.sigma_from_genus(sd(4 * math.pi, 0))
    torus = lowdim.sigma_from_genus(sd(2 * math.pi**2, 1))
    genus2 = lowdim.sigma_from_genus(sd(24 * math.pi, 2))
    K = np.linspace(-50.0, 1.0, 5101)
    poly_min = min(float(lowdim.genus_poly_bound(K, k).min()) for k in range(2, 9))
    counter = float(lowdim.genus_poly_bound(4.0, 3))
    details = {
        "sigma_sphere": sphere,
        "sigma_clifford_torus": torus,
        "sigma_genus2_choi_wang": genus2,
        "choi_wang_lower_g2": lowdim.choi_wang_lower(2),
        "genus_poly_min_on_grid": poly_min,
        "genus_poly_k3_K4": counter,
    }
    return details, [
        check_le("c10.sigma_sphere", abs(sphere - 0.0), 1e-12),
        check_le("c10.sigma_clifford_torus", abs(torus - 2.0), 1e-12),
        check_le("c10.sigma_genus2", abs(genus2 - 7.0 / 3.0), 1e-12),
        check_ge("c10.genus_poly_nonneg", poly_min, 0.0),
        check_le("c10.counterexample_k3_K4", abs(counter + 16.0), 0.0),
    ]


def criterion_11(bank: ProfileBank):
    lam_e = otsuki.equilibrium(4)
    values = []
    checks = []
    for fac in EULER_FACTORS:
        prof = bank.get(4, fac * lam_e)
        val = measure.euler_integral_n4(prof)
        values.append({"factor": fac, "lambda0": prof.lam0, "integral": val, "measure_total": measure.measure_total(prof)})
        checks.append(report(f"c11.euler_n4_factor_{fac:g}", val))
    return {"orbits": values}, checks


def criterion_12(seed: int, count: int = 200):
    first = json.dumps(criterion_2(seed, count)[0], sort_keys=False)
    second = json.dumps(criterion_2(seed, count)[0], sort_keys=False)
    return {"bytes": len(first)}, [check_true("c12.seeded_payload_reproducible", first == second)]


def run_suite(seed: int = 42, step: float = otsuki.DEFAULT_STEP, progress: Optional[Callable[[str], None]] = None):
    """Run every criterion; returns (results, checks) ordered by criterion number."""
    bank = ProfileBank(step)
    plan = [
        ("c01", criterion_1),
        ("c02", lambda: criterion_2(seed)),
        ("c03", criterion_3),
        ("c04", lambda: criterion_4(bank)),
        ("c05", lambda: criterion_5(bank)),
        ("c07", lambda: criterion_7(bank)),
        ("c06", lambda: criterion_6(bank)),
        ("c08", criterion_8),
        ("c09", lambda: criterion_9(bank)),
        ("c10", criterion_10),
        ("c11", lambda: criterion_11(bank)),
        ("c12", lambda: criterion_12(seed)),
    ]
    # c06 runs after c07 and c04 so "every generated profile" covers them too
    results, checks = {}, {}
    for key, fn in plan:
        if progress:
            progress(key)
        results[key], checks[key] = fn()
    order = sorted(results)
    return {k: results[k] for k in order}, [c for k in order for c in checks[k]]
