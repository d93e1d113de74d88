"""Core objects for lacunary power series with astronomically large exponents.

Everything downstream (norm estimates, gap-sequence tables, distributional
experiments) needs to evaluate terms ``a * z**e`` where ``e`` may have
thousands of digits and ``|z|`` may differ from 1 by something like
``3**-500``.  Neither quantity survives contact with float arithmetic, so
this module keeps both sides exact:

* exponents are arbitrary-precision integers, optionally tagged as a pure
  power of three so that reductions mod N stay cheap,
* radii are stored symbolically (``sqrt(1 - 1/n)``, ``1 - 3**-k`` or a plain
  float) and expose accurately computed logarithmic quantities,
* magnitudes are accumulated as ``log(r**e) = e*log(r)`` with relative error
  around 1e-15, and only materialised to complex samples at the end.

Circle samples are produced through an FFT over the exactly reduced
exponents, i.e. sample j equals ``sum_k a_k * exp(e_k*log r) *
exp(2*pi*1j*(e_k mod N)*j/N)`` with no rounding in the angle reduction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BigExponent",
    "RadiusSpec",
    "SparseSeries",
    "DensePolynomial",
    "CircleSamples",
    "radial_power",
    "eval_circle",
    "eval_derivative_circle",
    "monomial_seminorm",
    "monomial_seminorm_max",
    "near_optimal_radius",
    "gap_block",
    "block_radius",
    "radial_block_sum",
    "log_radial_block_sum",
    "product_series",
    "sum_series",
]

LOG3 = math.log(3.0)

# Offsets for circle rotations are dyadic with this resolution so that the
# angle (offset * exponent) mod 1 can be reduced exactly in integers.
OFFSET_BITS = 53
OFFSET_MOD = 1 << OFFSET_BITS


def _mul_int_float(n: int, x: float) -> float:
    """n * x for a huge positive int n and float x, saturating to +-inf.

    float(n) raises OverflowError beyond 1e308 even when the product is
    representable, so scale through the top 53 bits instead.
    """
    if n == 0 or x == 0.0:
        return 0.0
    bl = n.bit_length()
    if bl <= 53:
        return n * x
    mant = (n >> (bl - 53)) / float(1 << 53)
    try:
        return math.ldexp(mant * x, bl)
    except OverflowError:
        return math.inf if x > 0 else -math.inf


def _int_ratio(num: int, den: int) -> float:
    """Correctly rounded num/den for positive big ints; inf on overflow."""
    if num.bit_length() - den.bit_length() > 1100:
        return math.inf
    try:
        return num / den
    except OverflowError:  # pragma: no cover - guarded by bit_length test
        return math.inf


@lru_cache(maxsize=256)
def _pow3(m: int) -> int:
    return 3**m


class BigExponent:
    """A nonnegative integer exponent, stored plainly or as 3**m.

    The pow3 tag keeps reductions mod N at O(log m) via modular
    exponentiation and avoids materialising 3**m until a comparison or
    arithmetic operation genuinely needs the integer.
    """

    __slots__ = ("_value", "_pow3")

    def __init__(self, value: int | None = None, pow3: int | None = None):
        if (value is None) == (pow3 is None):
            raise ValueError("exactly one of value/pow3 must be given")
        if value is not None and value < 0:
            raise ValueError("exponent must be nonnegative")
        if pow3 is not None and pow3 < 0:
            raise ValueError("pow3 tag must be nonnegative")
        self._value = value
        self._pow3 = pow3

    @property
    def is_pow3(self) -> bool:
        return self._pow3 is not None

    @property
    def pow3_tag(self) -> int | None:
        return self._pow3

    def value(self) -> int:
        if self._value is None:
            self._value = _pow3(self._pow3)
        return self._value

    def __int__(self) -> int:
        return self.value()

    def mod(self, n: int) -> int:
        if self._pow3 is not None:
            return pow(3, self._pow3, n)
        return self._value % n

    def log(self) -> float:
        """Natural log of the exponent; -inf for exponent 0."""
        if self._pow3 is not None:
            return self._pow3 * LOG3
        if self._value == 0:
            return -math.inf
        return math.log(self._value)

    def bit_length(self) -> int:
        if self._pow3 is not None:
            # 3**m has exactly floor(m*log2(3)) + 1 bits; the estimate below
            # is used only for range guards, so the exact value is computed
            # lazily when the estimate is ambiguous.
            return int(self._pow3 * 1.5849625007211562) + 1
        return self._value.bit_length()

    def is_zero(self) -> bool:
        return self._pow3 is None and self._value == 0

    def minus_one(self) -> "BigExponent":
        v = self.value()
        if v == 0:
            raise ValueError("cannot decrement exponent 0")
        return BigExponent(value=v - 1)

    def plus(self, k: int) -> "BigExponent":
        return BigExponent(value=self.value() + k)

    def _cmp_key(self):
        if self._pow3 is not None and self._value is None:
            return ("p", self._pow3)
        return ("v", self._value)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BigExponent):
            return NotImplemented
        if self._pow3 is not None and other._pow3 is not None:
            return self._pow3 == other._pow3
        return self.value() == other.value()

    def __lt__(self, other: "BigExponent") -> bool:
        if self._pow3 is not None and other._pow3 is not None:
            return self._pow3 < other._pow3
        return self.value() < other.value()

    def __le__(self, other: "BigExponent") -> bool:
        return self == other or self < other

    def __hash__(self) -> int:
        if self._pow3 is not None:
            # Hash must agree with the materialised value without forcing it.
            return hash(("pow3", self._pow3))
        return hash(("pow3", _ilog3_exact(self._value))) if _is_pow3(self._value) else hash(self._value)

    def __repr__(self) -> str:
        if self._pow3 is not None:
            return f"BigExponent(pow3={self._pow3})"
        if self._value.bit_length() > 256:
            return f"BigExponent(<{self._value.bit_length()} bits>)"
        return f"BigExponent({self._value})"


def _is_pow3(v: int) -> bool:
    if v < 1:
        return False
    while v % 3 == 0:
        v //= 3
    return v == 1


def _ilog3_exact(v: int) -> int:
    m = 0
    while v > 1:
        v //= 3
        m += 1
    return m


def as_exponent(e) -> BigExponent:
    if isinstance(e, BigExponent):
        return e
    if isinstance(e, int):
        return BigExponent(value=e)
    raise TypeError(f"cannot interpret {e!r} as an exponent")


# ---------------------------------------------------------------------------
# Radii
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusSpec:
    """Exact description of an evaluation radius in [0, 1).

    kind:
        "sqrt_complement": r = sqrt(1 - 1/n), the near-maximising radius for
            the weighted monomial derivative (requires n >= 2);
        "one_minus_pow3": r = 1 - 3**-k (requires k >= 1);
        "plain": r given directly as a float in [0, 1).  r = 0 is allowed for
            point evaluation at the origin but rejected by circle sampling.
    """

    kind: str
    n: int | None = None
    k: int | None = None
    r: float | None = None

    def __post_init__(self):
        if self.kind == "sqrt_complement":
            if self.n is None or self.n < 2:
                raise ValueError("sqrt_complement radius needs n >= 2")
        elif self.kind == "one_minus_pow3":
            if self.k is None or self.k < 1:
                raise ValueError("one_minus_pow3 radius needs k >= 1")
        elif self.kind == "plain":
            if self.r is None or not (0.0 <= self.r < 1.0) or not math.isfinite(self.r):
                raise ValueError("plain radius must satisfy 0 <= r < 1")
        else:
            raise ValueError(f"unknown radius kind {self.kind!r}")

    @staticmethod
    def sqrt_complement(n: int) -> "RadiusSpec":
        return RadiusSpec(kind="sqrt_complement", n=n)

    @staticmethod
    def one_minus_pow3(k: int) -> "RadiusSpec":
        return RadiusSpec(kind="one_minus_pow3", k=k)

    @staticmethod
    def plain(r: float) -> "RadiusSpec":
        return RadiusSpec(kind="plain", r=float(r))

    def to_float(self) -> float:
        if self.kind == "sqrt_complement":
            inv = _int_ratio(1, self.n) if self.n.bit_length() > 53 else 1.0 / self.n
            return math.sqrt(1.0 - inv)
        if self.kind == "one_minus_pow3":
            return 1.0 - 3.0 ** (-self.k) if self.k <= 676 else 1.0
        return self.r

    def is_origin(self) -> bool:
        return self.kind == "plain" and self.r == 0.0

    def log_r(self) -> float:
        """log r, computed without cancellation near r = 1."""
        return radial_power(BigExponent(value=1), self)

    def log_inv_gap(self) -> float:
        """log(1/(1-r)); the canonical 'depth' of the radius."""
        if self.kind == "sqrt_complement":
            # 1 - r = (1/n) / (1 + r)
            return _log_int(self.n) + math.log1p(self.to_float())
        if self.kind == "one_minus_pow3":
            return self.k * LOG3
        if self.r == 0.0:
            return 0.0
        return -math.log1p(-self.r)

    def log_one_minus_r_sq(self) -> float:
        """log(1 - r**2), exact in the symbolic forms."""
        if self.kind == "sqrt_complement":
            return -_log_int(self.n)
        if self.kind == "one_minus_pow3":
            gap = 3.0 ** (-self.k) if self.k <= 676 else 0.0
            return -self.k * LOG3 + math.log(2.0 - gap)
        return math.log1p(-self.r) + math.log1p(self.r)

    def one_minus_r_sq(self) -> float:
        return math.exp(self.log_one_minus_r_sq())


def _log_int(n: int) -> float:
    return math.log(n)


# ---------------------------------------------------------------------------
# radial powers: log(r**e)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=512)
def _sqrtc_series_factor(n_key: int) -> float:
    """g(n) = -n*log(1 - 1/n) = 1 + 1/(2n) + ..., for n passed by key."""
    # n_key is the integer n itself (cache keys on the int; cheap to hash for
    # the sizes that repeat in practice).
    n = n_key
    if n.bit_length() <= 52:
        nf = float(n)
        return -nf * math.log1p(-1.0 / nf)
    inv = _int_ratio(1, n)
    return 1.0 + 0.5 * inv


@lru_cache(maxsize=512)
def _pow3_series_factor(k: int) -> float:
    """h(k) = -3**k * log(1 - 3**-k) = 1 + 3**-k/2 + ..."""
    if k <= 33:
        gap = 3.0 ** (-k)
        return -math.log1p(-gap) / gap
    return 1.0


def radial_power(exponent, radius: RadiusSpec) -> float:
    """log(r**e) <= 0 for an exact radius; -inf when r**e underflows any float.

    The convention 0**0 = 1 applies: exponent 0 returns 0.0 for every radius
    including the origin.  Relative accuracy of the returned logarithm is
    ~1e-15 whenever it is representable.
    """
    e = as_exponent(exponent)
    if e.is_zero():
        return 0.0
    if radius.kind == "plain":
        if radius.r == 0.0:
            return -math.inf
        log_r = math.log(radius.r)
        if log_r == 0.0:
            return 0.0
        if e.is_pow3 and e.bit_length() >= 2200:
            # Any float radius below one has |log r| >= 2**-53, so a power
            # this large underflows regardless; skip materialising 3**m.
            return -math.inf
        return _mul_int_float(e.value(), log_r)
    if radius.kind == "sqrt_complement":
        n = radius.n
        g = _sqrtc_series_factor(n)
        ratio = _int_ratio(e.value(), 2 * n)
        return -g * ratio if ratio != math.inf else -math.inf
    # one_minus_pow3: log r = -3**-k * h(k)
    k = radius.k
    h = _pow3_series_factor(k)
    if e.is_pow3:
        t = e.pow3_tag - k
        if t > 646:
            return -math.inf
        if t >= 0:
            return -_mul_int_float(_pow3(t), h)
        return -h * 3.0**t
    ratio = _int_ratio(e.value(), _pow3_cached_big(k))
    return -h * ratio if ratio != math.inf else -math.inf


@lru_cache(maxsize=64)
def _pow3_cached_big(k: int) -> int:
    return 3**k


def monomial_seminorm(n, radius: RadiusSpec) -> float:
    """(1 - r**2) * n * r**(n-1): the derivative seminorm of z**n on the circle.

    Tends to exp(-1/2) along radius sqrt(1 - 1/n) as n grows, and decays to 0
    both for r -> 1 at fixed n and for n -> infinity at fixed r.
    """
    e = as_exponent(n)
    if e.is_zero():
        raise ValueError("monomial_seminorm needs n >= 1")
    log_u = (
        radius.log_one_minus_r_sq()
        + e.log()
        + radial_power(e.minus_one(), radius)
    )
    return math.exp(log_u)


def monomial_seminorm_max(n) -> float:
    """sup over r in [0,1) of (1-r**2)*n*r**(n-1); equals 1 at n = 1.

    The maximiser is r**2 = (n-1)/(n+1); the value decreases to 2/e as n
    grows.  Used for coefficient-sum upper bounds of Bloch norms.
    """
    e = as_exponent(n)
    if e.is_pow3 and e.pow3_tag >= 40:
        # The value is (2/e) * (1 + 1/n + O(1/n**2)); for n >= 3**40 the
        # correction is below double rounding, and this avoids materialising
        # the integer 3**m.
        return 2.0 * math.exp(-1.0)
    v = e.value()
    if v == 0:
        raise ValueError("monomial_seminorm_max needs n >= 1")
    if v == 1:
        return 1.0
    if v.bit_length() <= 52:
        nf = float(v)
        log_u = math.log(2.0 * nf / (nf + 1.0)) + 0.5 * (nf - 1.0) * math.log1p(-2.0 / (nf + 1.0))
        return math.exp(log_u)
    # Large n: log((n-1)/(n+1)) = log1p(-2/(n+1)) with 2/(n+1) tiny.
    inv = _int_ratio(2, v + 1)
    log_u = math.log(2.0) + math.log1p(-inv) + 0.5 * _mul_int_float(v - 1, math.log1p(-inv))
    return math.exp(log_u)


def near_optimal_radius(n: int) -> RadiusSpec:
    """Radius sqrt(1 - 1/n) where the monomial seminorm is within O(1/n) of
    its supremum.  n = 1 would give radius 0 and is rejected as degenerate."""
    if n < 2:
        raise ValueError("near_optimal_radius needs n >= 2 (n = 1 gives the degenerate radius 0)")
    return RadiusSpec.sqrt_complement(n)


# ---------------------------------------------------------------------------
# Series containers
# ---------------------------------------------------------------------------


class SparseSeries:
    """constant + sum_k a_k z**(e_k) with strictly increasing exponents.

    Instances are immutable.  ``membership_hint`` records what the generating
    construction promises about coefficient decay ("bloch" for bounded
    coefficients, "little_bloch" for coefficients tending to zero along the
    stored truncation); it is advisory metadata, not a computed fact.
    """

    __slots__ = ("constant", "coeffs", "exponents", "membership_hint")

    def __init__(
        self,
        constant: complex,
        coeffs: Sequence[complex],
        exponents: Sequence[BigExponent | int],
        membership_hint: str | None = None,
    ):
        exps = tuple(as_exponent(e) for e in exponents)
        cfs = tuple(complex(c) for c in coeffs)
        if len(cfs) != len(exps):
            raise ValueError("coeffs and exponents must have equal length")
        for c in cfs:
            if c == 0:
                raise ValueError("zero coefficients must be omitted")
        for a, b in zip(exps, exps[1:]):
            if not a < b:
                raise ValueError("exponents must be strictly increasing")
        if exps and exps[0].is_zero():
            raise ValueError("exponent 0 belongs in the constant term")
        if membership_hint not in (None, "bloch", "little_bloch"):
            raise ValueError(f"unknown membership hint {membership_hint!r}")
        self.constant = complex(constant)
        self.coeffs = cfs
        self.exponents = exps
        self.membership_hint = membership_hint

    @property
    def num_terms(self) -> int:
        return len(self.coeffs)

    def max_coeff(self) -> float:
        vals = [abs(self.constant)] + [abs(c) for c in self.coeffs]
        return max(vals)

    def terms(self) -> Iterable[tuple[complex, BigExponent]]:
        return zip(self.coeffs, self.exponents)

    def scale(self, factor: complex) -> "SparseSeries":
        if factor == 0:
            return SparseSeries(0.0, [], [])
        return SparseSeries(
            self.constant * factor,
            [c * factor for c in self.coeffs],
            self.exponents,
            membership_hint=self.membership_hint,
        )

    def tail_value_bound(self, radius: RadiusSpec) -> float:
        """Upper bound for sum over omitted doubling-gap terms past the stored
        truncation, assuming unit coefficients and next exponent >= 2*last.

        Returns 0 for the empty series: callers with richer truncation
        metadata should prefer the family-level ledger.
        """
        if not self.exponents:
            return 0.0
        nxt = BigExponent(value=2 * self.exponents[-1].value())
        log_t = radial_power(nxt, radius)
        if log_t >= -1e-18:
            return math.inf
        t = math.exp(log_t)
        return t / (1.0 - t) if t < 1.0 else math.inf

    def __repr__(self) -> str:
        return f"SparseSeries(constant={self.constant!r}, terms={self.num_terms})"


class DensePolynomial:
    """Polynomial sum c_k z**k given by its dense coefficient list c_0..c_d."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[complex]):
        cfs = [complex(c) for c in coeffs]
        while len(cfs) > 1 and cfs[-1] == 0:
            cfs.pop()
        if not cfs:
            cfs = [0j]
        self.coeffs = tuple(cfs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def at_zero(self) -> complex:
        return self.coeffs[0]

    def derivative(self) -> "DensePolynomial":
        if self.degree == 0:
            return DensePolynomial([0j])
        return DensePolynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def sup_bound(self) -> float:
        """Certified upper bound for sup over the closed unit disc."""
        return float(sum(abs(c) for c in self.coeffs))

    def to_series(self) -> SparseSeries:
        coeffs = [c for k, c in enumerate(self.coeffs) if k > 0 and c != 0]
        exps = [k for k, c in enumerate(self.coeffs) if k > 0 and c != 0]
        return SparseSeries(self.coeffs[0], coeffs, exps)

    def eval_points(self, z: np.ndarray) -> np.ndarray:
        acc = np.zeros_like(z, dtype=np.complex128)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __repr__(self) -> str:
        return f"DensePolynomial(degree={self.degree})"


@dataclass(frozen=True)
class CircleSamples:
    """Samples of a function on the circle of an exact radius.

    values[j] corresponds to the angle offset + 2*pi*j/n_samples, where the
    offset is the dyadic fraction offset_u / 2**53 of a full turn (0 when no
    rotation was requested).
    """

    radius: RadiusSpec
    n_samples: int
    values: np.ndarray
    offset_u: int = 0

    def mean_square(self) -> float:
        return float(np.mean(np.abs(self.values) ** 2))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def _spectrum_accumulate(
    spectrum: np.ndarray,
    n: int,
    exponent: BigExponent,
    log_mag: float,
    phase: float,
    offset_u: int,
) -> None:
    if log_mag == -math.inf:
        return
    if offset_u:
        u = (exponent.mod(OFFSET_MOD) * offset_u) % OFFSET_MOD
        phase += 2.0 * math.pi * (u / OFFSET_MOD)
    mag = math.exp(log_mag)
    if mag == math.inf:
        raise OverflowError(
            "sample magnitude overflows float range; pass a log_scale that "
            "normalises the evaluation"
        )
    spectrum[exponent.mod(n)] += mag * complex(math.cos(phase), math.sin(phase))


def eval_circle(
    f: SparseSeries,
    radius: RadiusSpec,
    n_samples: int,
    offset_u: int = 0,
    log_scale: float = 0.0,
) -> CircleSamples:
    """Sample exp(log_scale) * f on n_samples equispaced points of the circle.

    Requires radius > 0 and n_samples a positive power of two.  Angle
    reduction (e_k mod N and the rotation offset) is exact in integer
    arithmetic; magnitudes travel in log domain until the final exp.
    """
    _check_sampling(radius, n_samples)
    spectrum = np.zeros(n_samples, dtype=np.complex128)
    if f.constant != 0:
        spectrum[0] += f.constant * math.exp(log_scale)
    for c, e in f.terms():
        log_mag = math.log(abs(c)) + radial_power(e, radius) + log_scale
        _spectrum_accumulate(spectrum, n_samples, e, log_mag, cmath.phase(c), offset_u)
    values = np.fft.ifft(spectrum) * n_samples
    return CircleSamples(radius=radius, n_samples=n_samples, values=values, offset_u=offset_u)


def eval_derivative_circle(
    f: SparseSeries,
    radius: RadiusSpec,
    n_samples: int,
    offset_u: int = 0,
    log_scale: float = 0.0,
) -> CircleSamples:
    """Sample exp(log_scale) * f' on the circle.

    The term a_k * e_k * z**(e_k - 1) is built in log-magnitude/phase form,
    so exponents of any size are safe provided the caller supplies a
    log_scale that keeps exp(log|a_k| + log e_k + (e_k-1) log r + log_scale)
    inside float range -- for seminorm work use log_scale =
    radius.log_one_minus_r_sq().
    """
    _check_sampling(radius, n_samples)
    spectrum = np.zeros(n_samples, dtype=np.complex128)
    for c, e in f.terms():
        shifted = e.minus_one()
        log_mag = math.log(abs(c)) + e.log() + radial_power(shifted, radius) + log_scale
        _spectrum_accumulate(spectrum, n_samples, shifted, log_mag, cmath.phase(c), offset_u)
    values = np.fft.ifft(spectrum) * n_samples
    return CircleSamples(radius=radius, n_samples=n_samples, values=values, offset_u=offset_u)


def _check_sampling(radius: RadiusSpec, n_samples: int) -> None:
    if radius.is_origin():
        raise ValueError("circle sampling requires radius > 0")
    if n_samples < 1 or (n_samples & (n_samples - 1)) != 0:
        raise ValueError("n_samples must be a positive power of two")


# ---------------------------------------------------------------------------
# Gap blocks: sum over m in [s, 2s] of z**(3**m)
# ---------------------------------------------------------------------------


def gap_block(s: int, coefficient: complex = 1.0) -> SparseSeries:
    """The triple-gap block sum_{m=s}^{2s} coefficient * z**(3**m)."""
    if s < 1:
        raise ValueError("block index must be >= 1")
    exps = [BigExponent(pow3=m) for m in range(s, 2 * s + 1)]
    return SparseSeries(0.0, [coefficient] * len(exps), exps)


def block_radius(s: int) -> RadiusSpec:
    """The radius 1 - 3**(-2s) matched to the block starting at s."""
    if s < 1:
        raise ValueError("block index must be >= 1")
    return RadiusSpec.one_minus_pow3(2 * s)


_DECAY_CUTOFF = 40.0  # |e log r| above this: r**e == 0 to double precision


def log_radial_block_sum(s: int, radius: RadiusSpec, power_mult: float = 1.0) -> float:
    """log of sum_{m=s}^{2s} r**(power_mult * 3**m), robust to huge s.

    For blocks too large to enumerate, terms split into a "ones zone"
    (r**(mult*3**m) = 1 to double precision), a transition window computed
    term by term, and a triple-exponentially small tail that is dropped; the
    neglected corrections are below 1e-16 relative.
    """
    if s < 1:
        raise ValueError("block index must be >= 1")
    if power_mult <= 0:
        raise ValueError("power_mult must be positive")
    count = s + 1
    if count <= 4096:
        logs = [
            power_mult * radial_power(BigExponent(pow3=m), radius)
            for m in range(s, 2 * s + 1)
        ]
        return _logsumexp_list(logs)
    # Exponent magnitude of term m is power_mult * 3**m * (-log r); find the
    # m where it crosses the cutoffs.  -log r can underflow for radii
    # extremely close to 1, so recover its log from the exactly tracked
    # log(1/(1-r)) in that regime, where -log r = (1-r) to machine accuracy.
    neg_log_r = -radial_power(BigExponent(value=1), radius)
    if neg_log_r == math.inf:
        return -math.inf
    if neg_log_r > 0.0:
        log_nlr = math.log(neg_log_r)
    else:
        log_nlr = -radius.log_inv_gap()
        if log_nlr == -math.inf:  # the radius is exactly 1: every term is 1
            return math.log(count)
    # power_mult * 3**m * neg_log_r = 1 at m_star
    m_star = -(math.log(power_mult) + log_nlr) / LOG3
    lo = max(s, int(math.floor(m_star - 42.0)))
    hi = min(2 * s, int(math.ceil(m_star + 42.0)))
    ones = max(0, min(lo, 2 * s + 1) - s)  # m in [s, lo) within the block: r**e = 1
    logs = []
    for m in range(lo, hi + 1):
        lv = power_mult * radial_power(BigExponent(pow3=m), radius)
        if lv > -_DECAY_CUTOFF * 2:
            logs.append(lv)
    window = math.exp(_logsumexp_list(logs)) if logs else 0.0
    if ones == 0:
        return math.log(window) if window > 0 else -math.inf
    return math.log(ones) + math.log1p(window / ones)


def radial_block_sum(s: int, radius: RadiusSpec, power_mult: float = 1.0) -> float:
    """sum_{m=s}^{2s} r**(power_mult * 3**m) as a float (inf if enormous)."""
    return math.exp(log_radial_block_sum(s, radius, power_mult))


def _logsumexp_list(logs: list[float]) -> float:
    if not logs:
        return -math.inf
    top = max(logs)
    if top == -math.inf:
        return -math.inf
    return top + math.log(sum(math.exp(x - top) for x in logs))


# ---------------------------------------------------------------------------
# Series arithmetic
# ---------------------------------------------------------------------------


def product_series(p: DensePolynomial, f: SparseSeries) -> SparseSeries:
    """The series of p(z) * f(z), exponent collisions merged exactly."""
    acc: dict[int, complex] = {}

    def add(e_int: int, c: complex):
        if c == 0:
            return
        acc[e_int] = acc.get(e_int, 0j) + c

    for k, ck in enumerate(p.coeffs):
        if ck == 0:
            continue
        if f.constant != 0:
            add(k, ck * f.constant)
        for a, e in f.terms():
            add(e.value() + k, ck * a)
    return _series_from_map(acc)


def sum_series(parts: Sequence[SparseSeries]) -> SparseSeries:
    """Exact termwise sum of several sparse series."""
    acc: dict[int, complex] = {}
    for f in parts:
        if f.constant != 0:
            acc[0] = acc.get(0, 0j) + f.constant
        for a, e in f.terms():
            v = e.value()
            acc[v] = acc.get(v, 0j) + a
    return _series_from_map(acc)


def _series_from_map(acc: dict[int, complex]) -> SparseSeries:
    const = acc.pop(0, 0j)
    items = sorted((e, c) for e, c in acc.items() if c != 0)
    return SparseSeries(const, [c for _, c in items], [e for e, _ in items])
