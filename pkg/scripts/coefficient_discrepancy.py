"""Show how the two f'' and |grad A|^2 coefficient choices behave on one orbit."""

from clifford_lab import measure, otsuki, pinching


def main() -> None:
    n = 3
    prof = otsuki.integrate_profile(n, 0.9)
    print(f"orbit n={n}, lambda0=0.9, period={prof.period:.12f}")
    for k in range(2, 6):
        row = []
        for variant in pinching.VARIANTS:
            res = measure.verify_keyeq(prof, measure.f_k(n, k, variant), strict=False).residual
            row.append(f"{variant}={res:.3e}")
        print(f"  k={k} integral identity residual: " + ", ".join(row))
    for coef in ("corrected", "printed"):
        print(f"  Simons pointwise residual ({coef}): {measure.simons_pointwise(prof, coef):.3e}")
    for k in (2, 3, 4):
        a = pinching.delta_k(n, k, "corrected")
        b = pinching.delta_k(n, k, "printed")
        print(f"  delta_{k}: corrected {a:.12f}  printed {b:.12f}")


if __name__ == "__main__":
    main()
