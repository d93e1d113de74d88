"""Norm, mean, and growth estimators for analytic functions on the disc.

Estimates split by direction.  Lower bounds for the Bloch norm
|f(0)| + sup (1 - |z|**2) |f'(z)| come from circle grids: a finite maximum
never exceeds the supremum, so a grid value is certified from below.  Upper
bounds come from coefficients only (``coeff_norm_upper``), since each
monomial's derivative bump has a closed-form maximum; grids are never used
for upper bounds.  The inequality checks in this module take a certified
upper bound for the right-hand side and a grid estimate for the left, so a
reported pass is meaningful up to quadrature on the left alone.

Circle integrals use the uniform average over a power-of-two grid, which is
spectrally accurate for moduli of lacunary series, and high moments are
accumulated in log domain so powers like 2**J do not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from .series import (
    CircleSamples,
    RadiusSpec,
    SparseSeries,
    eval_circle,
    eval_derivative_circle,
    monomial_seminorm_max,
)

__all__ = [
    "DEFAULT_GRID_SAMPLES",
    "GROWTH_RADIUS_FLOOR",
    "NormEstimate",
    "DecayProfile",
    "InequalityReport",
    "GrowthReport",
    "coeff_norm_upper",
    "product_norm_upper",
    "circle_seminorm",
    "bloch_norm_lower",
    "lp_mean",
    "growth_bound_check",
    "makarov_moment_check",
    "makarov_exp_check",
    "little_bloch_profile",
]

DEFAULT_GRID_SAMPLES = 1 << 16

# The two-sided growth bound |f(z)| <= (norm/2) * log((1+|z|)/(1-|z|))
# needs the log factor to be at least 2, so that the |f(0)| part of the
# norm is absorbed; that holds exactly for |z| >= tanh(1).  Below the
# floor, constants already violate the inequality.
GROWTH_RADIUS_FLOOR = math.tanh(1.0)


@dataclass(frozen=True)
class NormEstimate:
    """A one-sided Bloch-norm estimate with its provenance.

    For ``kind="lower_bound"`` the true norm is at least
    ``value - tail_bound``, where ``tail_bound`` covers terms beyond the
    stored truncation of the series the caller actually means.
    """

    value: float
    kind: str
    radii: tuple
    n_samples: int
    tail_bound: float = 0.0


@dataclass(frozen=True)
class DecayProfile:
    """Circle seminorms (1 - r**2) * max |f'| along increasing radii.

    ``tail_decreasing`` is True when the final ``tail_window`` entries are
    weakly decreasing -- the sampled shadow of vanishing at the boundary.
    """

    entries: tuple
    tail_decreasing: bool
    tail_window: int


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    grid: dict = field(default_factory=dict)


@dataclass(frozen=True)
class GrowthReport:
    passed: bool
    max_ratio: float
    checked_points: int
    violations: tuple
    norm_upper: float


def _value_at_zero(f: SparseSeries) -> complex:
    v = f.constant
    for c, e in f.terms():
        if e.is_zero():
            v += c
    return v


def coeff_norm_upper(f: SparseSeries) -> float:
    """Certified Bloch-norm upper bound from coefficients alone:
    |f(0)| + sum |a_k| * sup_r (1 - r**2) e_k r**(e_k - 1)."""
    total = abs(_value_at_zero(f))
    for c, e in f.terms():
        if e.is_zero() or c == 0:
            continue
        total += abs(c) * monomial_seminorm_max(e)
    return total


def product_norm_upper(p, f: SparseSeries) -> float:
    """Certified Bloch-norm upper bound for the product p(z) * f(z).

    Works term by term on the pairs (c_k z**k) * (a z**e) without forming
    the product series: the monomial seminorm maximum is decreasing in the
    exponent, so the bump of z**(e+k) is bounded by the bump of z**e.  This
    keeps the certificate cheap for series whose exponents are huge powers
    of three.
    """
    f0 = _value_at_zero(f)
    total = abs(p.at_zero() * f0)
    for k, ck in enumerate(p.coeffs):
        if k >= 1 and ck != 0 and f0 != 0:
            total += abs(ck * f0) * monomial_seminorm_max(k)
    coeff_sum = sum(abs(c) for c in p.coeffs)
    if coeff_sum:
        for a, e in f.terms():
            if e.is_zero() or a == 0:
                continue
            total += coeff_sum * abs(a) * monomial_seminorm_max(e)
    return total


def circle_seminorm(
    f: SparseSeries,
    radius: RadiusSpec,
    n_samples: int = DEFAULT_GRID_SAMPLES,
    offset_u: int = 0,
) -> float:
    """max over the sampled circle of (1 - r**2) |f'(z)|."""
    if radius.is_origin():
        d = sum(c for c, e in f.terms() if not e.is_zero() and e.value() == 1)
        return abs(d)
    samples = eval_derivative_circle(
        f, radius, n_samples, offset_u, log_scale=radius.log_one_minus_r_sq()
    )
    return samples.max_abs()


def bloch_norm_lower(
    f: SparseSeries,
    radii,
    n_samples: int = DEFAULT_GRID_SAMPLES,
    offset_u: int = 0,
    tail_bound: float = 0.0,
) -> NormEstimate:
    """Grid lower bound |f(0)| + max over circles of max (1 - r**2)|f'|.

    Monotone in the grid: adding radii or doubling ``n_samples`` (which
    nests the sample sets) never decreases the value.
    """
    radii = tuple(radii)
    if not radii:
        raise ValueError("need at least one radius")
    best = max(circle_seminorm(f, r, n_samples, offset_u) for r in radii)
    return NormEstimate(
        value=abs(_value_at_zero(f)) + best,
        kind="lower_bound",
        radii=radii,
        n_samples=n_samples,
        tail_bound=tail_bound,
    )


def lp_mean(samples: CircleSamples, p: float) -> float:
    """(uniform average of |g|**p)**(1/p), accumulated in log domain."""
    if p < 1:
        raise ValueError("p must be >= 1")
    mags = np.abs(samples.values)
    if not mags.any():
        return 0.0
    with np.errstate(divide="ignore"):
        logs = p * np.log(mags)
    return float(math.exp((logsumexp(logs) - math.log(samples.n_samples)) / p))


def growth_bound_check(
    f: SparseSeries,
    norm_upper: float,
    radii,
    n_samples: int = DEFAULT_GRID_SAMPLES,
    offset_u: int = 0,
) -> GrowthReport:
    """Check |f(z)| <= (norm_upper/2) * log((1+|z|)/(1-|z|)) on circles.

    ``norm_upper`` must certify the Bloch norm from above (use
    ``coeff_norm_upper``); every radius must be at least tanh(1), below
    which the bound is false already for constants.  The left side is a
    finite sample maximum, hence below the true supremum: a violation is a
    genuine counterexample, not quadrature noise.
    """
    radii = tuple(radii)
    if not radii:
        raise ValueError("need at least one radius")
    for r in radii:
        if r.to_float() < GROWTH_RADIUS_FLOOR:
            raise ValueError(
                f"radius {r.to_float():.6f} below the validity floor "
                f"tanh(1) = {GROWTH_RADIUS_FLOOR:.6f}"
            )
    violations: list[tuple] = []
    max_ratio = 0.0
    checked = 0
    for r in radii:
        samples = eval_circle(f, r, n_samples, offset_u)
        mags = np.abs(samples.values)
        checked += mags.size
        lhs = float(mags.max())
        rhs = 0.5 * norm_upper * (math.log1p(r.to_float()) + r.log_inv_gap())
        if rhs == 0.0:
            ratio = 0.0 if lhs == 0.0 else math.inf
        else:
            ratio = lhs / rhs
        max_ratio = max(max_ratio, ratio)
        if lhs > rhs:
            violations.append((r, int(np.argmax(mags)), lhs, rhs))
    return GrowthReport(
        passed=not violations,
        max_ratio=max_ratio,
        checked_points=checked,
        violations=tuple(violations),
        norm_upper=norm_upper,
    )


def makarov_moment_check(
    g: SparseSeries,
    g_norm_upper: float,
    radius: RadiusSpec,
    n: int,
    n_samples: int = DEFAULT_GRID_SAMPLES,
    tolerance: float = 0.02,
    offset_u: int = 0,
) -> InequalityReport:
    """L**(2n) circle mean against norm * (1 + (n!)**(1/2n) sqrt(log(1/(1-r)))).

    The factorial root goes through log-gamma, so large n is exact to
    rounding; the pass verdict allows ``tolerance`` relative slack for
    quadrature on the left side.
    """
    if n < 1:
        raise ValueError("moment order n must be >= 1")
    samples = eval_circle(g, radius, n_samples, offset_u)
    lhs = lp_mean(samples, 2.0 * n)
    factorial_root = math.exp(float(gammaln(n + 1)) / (2.0 * n))
    rhs = g_norm_upper * (1.0 + factorial_root * math.sqrt(radius.log_inv_gap()))
    return InequalityReport(
        name="moment_growth",
        lhs=lhs,
        rhs=rhs,
        margin=rhs - lhs,
        passed=lhs <= rhs * (1.0 + tolerance),
        grid={"radius": radius, "n_samples": n_samples, "n": n, "offset_u": offset_u},
    )


def makarov_exp_check(
    g: SparseSeries,
    g_norm_upper: float,
    radius: RadiusSpec,
    n_samples: int = DEFAULT_GRID_SAMPLES,
    tolerance: float = 0.02,
    offset_u: int = 0,
) -> InequalityReport:
    """Circle mean of exp(|g|**2 / (8 log(1/(1-r)))) against the bound 2.

    Requires a certified norm upper bound at most 1 and log(1/(1-r)) >= 1;
    both are hypotheses of the inequality, not tunables, so violations
    raise instead of reporting a failure.
    """
    if not g_norm_upper <= 1.0:
        raise ValueError("exponential bound needs certified norm upper bound <= 1")
    if radius.log_inv_gap() < 1.0:
        raise ValueError("exponential bound needs r >= 1 - 1/e")
    samples = eval_circle(g, radius, n_samples, offset_u)
    mags_sq = np.abs(samples.values) ** 2
    lhs = float(np.mean(np.exp(mags_sq / (8.0 * radius.log_inv_gap()))))
    return InequalityReport(
        name="exp_square_mean",
        lhs=lhs,
        rhs=2.0,
        margin=2.0 - lhs,
        passed=lhs <= 2.0 * (1.0 + tolerance),
        grid={"radius": radius, "n_samples": n_samples, "offset_u": offset_u},
    )


def little_bloch_profile(
    f: SparseSeries,
    radii,
    n_samples: int = DEFAULT_GRID_SAMPLES,
    tail_window: int = 5,
    offset_u: int = 0,
) -> DecayProfile:
    """Circle seminorms along radii increasing toward 1.

    A function with derivative decay at the boundary shows a profile whose
    tail drops; the flag summarizes the final ``tail_window`` entries.
    """
    radii = tuple(radii)
    if not radii:
        raise ValueError("need at least one radius")
    gaps = [r.log_inv_gap() for r in radii]
    if any(b <= a for a, b in zip(gaps, gaps[1:])):
        raise ValueError("radii must be strictly increasing")
    entries = tuple(
        (r, circle_seminorm(f, r, n_samples, offset_u)) for r in radii
    )
    tail = [v for _, v in entries[-tail_window:]]
    decreasing = all(b <= a for a, b in zip(tail, tail[1:]))
    return DecayProfile(
        entries=entries,
        tail_decreasing=decreasing,
        tail_window=tail_window,
    )
