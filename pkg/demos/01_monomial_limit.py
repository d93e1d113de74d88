"""Where a single power of z pushes the weighted derivative, and how hard.

The weighted derivative (1 - r**2) |d/dz z**n| on the circle |z| = r rises
only once 1 - r**2 is comparable to 1/n: the outright maximum sits near
1 - r**2 = 2/n at about 2/e, while the matched radius with 1 - r**2 = 1/n
gives a value converging to exp(-1/2).  This script walks the curve for one
exponent, then tracks the matched value across ten orders of magnitude.
"""

import math

from blochlab.series import (
    BigExponent,
    RadiusSpec,
    monomial_seminorm,
    near_optimal_radius,
    radial_power,
)

E_HALF = math.exp(-0.5)


def main() -> None:
    n = 1000
    print(f"profile of (1 - r^2) * {n} * r^{n - 1} approaching the boundary:")
    for gap in (0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 0.0005, 0.0002):
        r = RadiusSpec.plain(1.0 - gap)
        print(f"  r = {1.0 - gap:.4f}   value = {monomial_seminorm(n, r):.6f}")
    r_star = near_optimal_radius(n)
    print(f"  matched radius 1 - r^2 = 1/{n}:  value = "
          f"{monomial_seminorm(n, r_star):.10f}")
    print("  (the outright maximum, near gap 2/n, is 2/e =",
          f"{2 / math.e:.6f})")

    print()
    print("matched value against the limit exp(-1/2) =", f"{E_HALF:.10f}")
    for exp10 in range(1, 11):
        n = 10**exp10
        u = monomial_seminorm(n, near_optimal_radius(n))
        print(f"  n = 10^{exp10:<2d}  u = {u:.10f}   error = {u - E_HALF:.3e}")

    # The same machinery stays finite where floats cannot follow: the
    # radial power of a huge exponent at a much tighter radius is a log
    # that would underflow any double.
    giant = BigExponent(pow3=200)           # 3**200
    tight = RadiusSpec.one_minus_pow3(120)  # 1 - 3**-120
    log_rp = radial_power(giant, tight)
    print()
    print(f"log of r^(3^200) at r = 1 - 3^-120: {log_rp:.6e}")
    print("  (exp() of anything below -745 is a hard float zero; the log",
          "domain keeps the magnitude)")


if __name__ == "__main__":
    main()
