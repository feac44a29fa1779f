"""Per-period integral of (|A|^4/4 + 2|A|^2 - 12) rho over several n=4 orbits.

No expected value is asserted; the numbers are printed for inspection.
"""

from clifford_lab import measure, otsuki


def main() -> None:
    lam_e = otsuki.equilibrium(4)
    for factor in (0.7, 0.8, 0.9, 1.1, 1.2, 1.4):
        prof = otsuki.integrate_profile(4, factor * lam_e)
        for step in (2e-3, 1e-3, 5e-4):
            p = otsuki.integrate_profile(4, factor * lam_e, step)
            print(f"factor {factor:.2f} step {step:.0e}: {measure.euler_integral_n4(p): .6e}")
        print(f"  period {prof.period:.10f}, sigma1 {measure.sigma_k(prof, 1):.10f}")


if __name__ == "__main__":
    main()
