"""sigma_1 margin below n and sigma_k against n^k as the orbit amplitude grows.

Usage: python3 scripts/amplitude_sweep.py [n] [k]
"""

import sys

import numpy as np

from clifford_lab import measure, otsuki


def main(n: int = 3, k: int = 2) -> None:
    lam_e = otsuki.equilibrium(n)
    print(f"{'lambda0/lam_e':>14} {'lam_min':>10} {'n - sigma1':>12} {'sigma_k - n^k':>14}")
    for factor in np.linspace(1.02, 1.6, 12):
        try:
            prof = otsuki.integrate_profile(n, factor * lam_e)
        except otsuki.AmplitudeGuardError:
            print(f"{factor:14.3f}  stopped by amplitude guard")
            break
        margin = measure.perdomo_margin(prof)
        excess = measure.sigma_k(prof, k) - n**k
        print(f"{factor:14.3f} {prof.lam_min:10.5f} {margin:12.4e} {excess:14.4e}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:3]))
