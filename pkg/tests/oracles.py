"""Independent high-precision reference values for the numeric tests.

Everything here recomputes quantities from their defining formulas with
mpmath at a working precision scaled to the operands, sharing no code with
the package's log-domain implementations.
"""

from __future__ import annotations

import mpmath as mp


def _dps_for(*magnitudes: float) -> int:
    """Working digits: generous margin over the largest exponent involved."""
    extra = sum(int(m) for m in magnitudes)
    return 60 + extra


def mp_radius(kind: str, param) -> mp.mpf:
    """Exact radius value: sqrt(1 - 1/n), 1 - 3**-k, or a plain float."""
    if kind == "sqrt_complement":
        return mp.sqrt(1 - mp.mpf(1) / param)
    if kind == "one_minus_pow3":
        return 1 - mp.mpf(3) ** (-param)
    return mp.mpf(param)


def mp_weighted_derivative_max(n: int, kind: str, param) -> mp.mpf:
    """(1 - r**2) * n * r**(n - 1) at the given radius, full precision."""
    r = mp_radius(kind, param)
    return (1 - r * r) * n * r ** (n - 1)


def mp_u_at_optimum(n: int) -> mp.mpf:
    """(1 - 1/n)**((n - 1)/2), the weighted derivative at its near-maximiser."""
    return (1 - mp.mpf(1) / n) ** (mp.mpf(n - 1) / 2)


def mp_log_radial_power(exponent: int, kind: str, param) -> mp.mpf:
    """log(r**e) = e * log(r) at full precision."""
    return exponent * mp.log(mp_radius(kind, param))


def mp_block_sum(s: int, kind: str, param, power_mult: int = 1) -> mp.mpf:
    """sum_{m=s}^{2s} r**(power_mult * 3**m) computed term by term."""
    r = mp_radius(kind, param)
    log_r = mp.log(r)
    return mp.fsum(mp.e ** (power_mult * mp.mpf(3) ** m * log_r) for m in range(s, 2 * s + 1))


def with_dps(dps: int):
    """Context manager fixing the mpmath working precision."""
    return mp.workdps(dps)
