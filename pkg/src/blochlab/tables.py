"""Greedy constructions of mutually damped exponent tables.

Two related structures are built here, both by the same recipe: walk a
fixed ordering of slots, seed each slot with the smallest candidate the
growth rules allow, and double the candidate until every inequality against
the already-placed entries holds.  Verification is a separate, exhaustive
pass that shares no code with the construction.

ExponentTable
    A triangular (or column-limited) array s(n, i) of integers.  Along with
    strict ordering and a factor-two gap down each column, every entry's
    monomial seminorm bump is damped at every other entry's near-optimal
    radius: (1 - r**2) * s * r**(s-1) < 2**-(n+n') when the bump of entry
    (n, i) is evaluated at the radius of entry (n', i').  The doubling
    search always terminates because the bump decays both as its own index
    grows at a fixed radius and as the radius approaches 1 at a fixed
    index.

BlockTable
    Indices s(i, j) for gap blocks f_{i,j}(z) = sum z**(3**m),
    m in [s(i,j), 2*s(i,j)], each carrying a matched radius
    r(i,j) = 1 - 3**(-2*s(i,j)) and a weight delta_j = 2**9 * sqrt(c/j).
    Conditions per entry: a floor on s(i, j); a cross-damping bound on the
    normalised radial sum of one block at another block's radius; and an
    empirical lower bound on the measure of the set where the block's
    modulus exceeds a small threshold, certified by Monte Carlo with a
    three-sigma margin.

Block tables come in two constant profiles.  The ``literal`` profile keeps
the floor 2**(4j+4) and checks the cross-damping bound for every ordered
pair.  Bounding an *earlier* block's sum at a *later* block's radius forces
s_new on the order of (s_old * delta * 2**indices)**2 -- a squaring
recursion -- so literal tables are only buildable to tiny depths, and the
measure condition is skipped (and reported as skipped) for blocks too long
to sample.  The ``relaxed`` profile keeps the same cross-damping strength
but checks it only for the enforceable direction (later block at earlier
radius), and lowers the floor to 4j+4; growth is then geometric and every
block stays samplable.  Every table records which profile produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .distribution import block_modulus_samples, rotation_offset
from .series import (
    RadiusSpec,
    as_exponent,
    log_radial_block_sum,
    radial_power,
)

__all__ = [
    "ExponentTable",
    "TableCheckReport",
    "build_exponent_table",
    "verify_exponent_table",
    "ConstantProfile",
    "block_coefficient",
    "exceedance_threshold",
    "BlockTable",
    "BlockCheckReport",
    "build_block_table",
    "verify_block_table",
    "scaled_gap_sum",
    "scaled_block_sum",
]

_LN2 = math.log(2.0)


def _log_seminorm(n: int, radius: RadiusSpec) -> float:
    """log of (1 - r**2) * n * r**(n-1), kept in log form for comparisons."""
    e = as_exponent(n)
    return radius.log_one_minus_r_sq() + e.log() + radial_power(e.minus_one(), radius)


def _entry_radius(s: int) -> RadiusSpec:
    return RadiusSpec.sqrt_complement(s)


# ---------------------------------------------------------------------------
# Exponent tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExponentTable:
    """Rows of integer exponents; row n holds columns 1..min(n, max_columns).

    ``rows[n-1][i-1]`` is s(n, i).  ``max_columns=None`` gives the full
    triangle; ``max_columns=1`` a single column, which is the shape consumed
    by rank-mapped generator families.
    """

    rows: tuple
    max_columns: int | None
    seed_start: int
    build_log: tuple = ()

    @property
    def n_max(self) -> int:
        return len(self.rows)

    @property
    def num_entries(self) -> int:
        return sum(len(r) for r in self.rows)

    def width(self, n: int) -> int:
        return len(self.rows[n - 1])

    def entry(self, n: int, i: int) -> int:
        if not (1 <= n <= self.n_max and 1 <= i <= self.width(n)):
            raise KeyError(f"no entry ({n}, {i}) in a table of depth {self.n_max}")
        return self.rows[n - 1][i - 1]

    def entries(self) -> Iterator[tuple[int, int, int]]:
        """Yield (n, i, s) in construction order."""
        for n, row in enumerate(self.rows, start=1):
            for i, s in enumerate(row, start=1):
                yield n, i, s

    def column(self, i: int) -> list[tuple[int, int]]:
        """[(n, s(n, i))] for all rows with column i present."""
        out = []
        for n, row in enumerate(self.rows, start=1):
            if i <= len(row):
                out.append((n, row[i - 1]))
        if not out:
            raise KeyError(f"table has no column {i}")
        return out


@dataclass(frozen=True)
class TableCheckReport:
    passed: bool
    checked_pairs: int
    violations: tuple

    def summary(self) -> str:
        state = "pass" if self.passed else f"FAIL ({len(self.violations)} violations)"
        return f"{self.checked_pairs} damping pairs checked: {state}"


def _damping_ok(s_bump: int, n_bump: int, s_rad: int, n_rad: int) -> bool:
    """Bump of index s_bump at the radius of s_rad, against 2**-(n_bump+n_rad)."""
    return _log_seminorm(s_bump, _entry_radius(s_rad)) < -(n_bump + n_rad) * _LN2


def build_exponent_table(
    n_max: int,
    seed_start: int = 2,
    max_columns: int | None = None,
) -> ExponentTable:
    """Greedy doubling construction of a damped exponent table.

    Each slot starts from the largest of: twice the entry one row up in the
    same column, one more than the previous entry in construction order,
    and the seed floor.  The candidate doubles until the damping inequality
    holds in both directions against every placed entry; entries are tested
    newest first because the immediately preceding entry carries the
    binding requirement.
    """
    if n_max < 1:
        raise ValueError("table depth must be >= 1")
    if seed_start < 2:
        raise ValueError("seed floor must be >= 2 so the first entry exceeds 1")
    if max_columns is not None and max_columns < 1:
        raise ValueError("max_columns must be >= 1 when given")

    rows: list[tuple[int, ...]] = []
    placed: list[tuple[int, int, int]] = []  # (n, i, s) in construction order
    log: list[dict] = []
    for n in range(1, n_max + 1):
        width = n if max_columns is None else min(n, max_columns)
        row: list[int] = []
        for i in range(1, width + 1):
            cand = seed_start
            if placed:
                cand = max(cand, placed[-1][2] + 1)
            if n > 1 and i <= len(rows[n - 2]):
                cand = max(cand, 2 * rows[n - 2][i - 1])
            doublings = 0
            while not _candidate_ok(cand, n, placed):
                cand *= 2
                doublings += 1
            row.append(cand)
            placed.append((n, i, cand))
            log.append({"row": n, "col": i, "doublings": doublings, "bits": cand.bit_length()})
        rows.append(tuple(row))
    return ExponentTable(
        rows=tuple(rows),
        max_columns=max_columns,
        seed_start=seed_start,
        build_log=tuple(log),
    )


def _candidate_ok(cand: int, n: int, placed: list[tuple[int, int, int]]) -> bool:
    for n_old, _i_old, s_old in reversed(placed):
        # Old bump at the candidate's radius first: it shrinks only like
        # s_old/cand, so it is the test that actually drives the doubling.
        if not _damping_ok(s_old, n_old, cand, n):
            return False
        if not _damping_ok(cand, n, s_old, n_old):
            return False
    return True


def verify_exponent_table(table: ExponentTable) -> TableCheckReport:
    """Exhaustive check of ordering, column gaps, and all damping pairs.

    Violations are reported, not raised; each carries the entries involved
    and, for damping failures, the log of the offending value and bound.
    """
    violations: list[tuple] = []
    flat = list(table.entries())

    prev = 1
    for n, i, s in flat:
        if s <= prev:
            violations.append(("order", (n, i), s, prev))
        prev = s

    for n, i, s in flat:
        if n < table.n_max and i <= table.width(n + 1):
            below = table.entry(n + 1, i)
            if below < 2 * s:
                violations.append(("column_gap", (n + 1, i), below, 2 * s))

    checked = 0
    for n, i, s in flat:
        for n2, i2, s2 in flat:
            if (n, i) == (n2, i2):
                continue
            checked += 1
            log_u = _log_seminorm(s, _entry_radius(s2))
            log_bound = -(n + n2) * _LN2
            if not log_u < log_bound:
                violations.append(("damping", (n, i), (n2, i2), log_u, log_bound))

    return TableCheckReport(
        passed=not violations,
        checked_pairs=checked,
        violations=tuple(violations),
    )


# ---------------------------------------------------------------------------
# Block tables
# ---------------------------------------------------------------------------


def block_coefficient(j: int, c_hat: float) -> float:
    """Column weight 2**9 * sqrt(c_hat / j); tends to zero in j."""
    if j < 1:
        raise ValueError("column index must be >= 1")
    if c_hat <= 0:
        raise ValueError("tail constant must be positive")
    return 512.0 * math.sqrt(c_hat / j)


@dataclass(frozen=True)
class ConstantProfile:
    """Constants governing a block-table build.

    ``floor`` maps the column j to the strict lower bound for s(i, j);
    ``check_backward_pairs`` controls whether cross-damping is enforced for
    blocks earlier in the order than the radius (the direction whose cost
    squares); ``max_sample_terms`` caps the block length for which the
    measure condition is Monte Carlo checked rather than skipped.
    """

    name: str
    floor: Callable[[int], int]
    check_backward_pairs: bool
    max_sample_terms: int = 2_000_000
    margin_sigmas: float = 3.0
    max_doublings: int = 60

    @staticmethod
    def literal(**overrides) -> "ConstantProfile":
        return ConstantProfile(
            name="literal",
            floor=lambda j: 1 << (4 * j + 4),
            check_backward_pairs=True,
            **overrides,
        )

    @staticmethod
    def relaxed(**overrides) -> "ConstantProfile":
        return ConstantProfile(
            name="relaxed",
            floor=lambda j: 4 * j + 4,
            check_backward_pairs=False,
            **overrides,
        )


def _profile_from_name(name: str) -> ConstantProfile:
    if name == "literal":
        return ConstantProfile.literal()
    if name == "relaxed":
        return ConstantProfile.relaxed()
    raise ValueError(f"unknown profile {name!r}")


@dataclass(frozen=True)
class BlockTable:
    """Block indices s(i, j) for 1 <= i <= j <= j_max with their metadata.

    ``entries[(i, j)]`` is the integer s(i, j); ``measure_reports[(i, j)]``
    records how (or whether) the exceedance-measure condition was certified
    for that block.  Construction order is by column then row: (1,1),
    (1,2), (2,2), (1,3), ...
    """

    j_max: int
    profile_name: str
    c_hat: float
    entries: dict
    measure_reports: dict
    mc_samples: int
    rng_seed: int
    build_log: tuple = ()

    def order(self) -> list[tuple[int, int]]:
        return [(i, j) for j in range(1, self.j_max + 1) for i in range(1, j + 1)]

    def entry(self, i: int, j: int) -> int:
        return self.entries[(i, j)]

    def radius(self, i: int, j: int) -> RadiusSpec:
        return RadiusSpec.one_minus_pow3(2 * self.entries[(i, j)])

    def delta(self, j: int) -> float:
        return block_coefficient(j, self.c_hat)

    def profile(self) -> ConstantProfile:
        return _profile_from_name(self.profile_name)


def scaled_gap_sum(s: int, radius: RadiusSpec) -> float:
    """sum_{m=s}^{2s} r**(3**m) divided by sqrt(log(1/(1-r))).

    Decays to 0 both as r -> 1 at fixed s and as s grows at fixed r; the
    cross-damping condition bounds it at the radii of other blocks.
    """
    log_sum = log_radial_block_sum(s, radius)
    if log_sum == -math.inf:
        return 0.0
    return math.exp(log_sum - 0.5 * math.log(radius.log_inv_gap()))


def scaled_block_sum(i: int, j: int, table: BlockTable, radius: RadiusSpec) -> float:
    """The normalised radial sum of block (i, j) at an arbitrary radius."""
    return scaled_gap_sum(table.entry(i, j), radius)


def _cross_bound_log(i_bump: int, j_bump: int, i_rad: int, j_rad: int, c_hat: float) -> float:
    """log of the allowed size of block (i_bump, j_bump)'s sum at the radius
    of block (i_rad, j_rad): (1/delta_{j_bump}) * 2**-(i+i'+j+2j'+2)."""
    exponent = i_bump + i_rad + j_bump + 2 * j_rad + 2
    return -math.log(block_coefficient(j_bump, c_hat)) - exponent * _LN2


def _cross_ok(s_bump: int, pos_bump, s_rad: int, pos_rad, c_hat: float) -> bool:
    radius = RadiusSpec.one_minus_pow3(2 * s_rad)
    log_x = log_radial_block_sum(s_bump, radius) - 0.5 * math.log(radius.log_inv_gap())
    return log_x <= _cross_bound_log(pos_bump[0], pos_bump[1], pos_rad[0], pos_rad[1], c_hat)


def exceedance_threshold(s: int, j: int, c_hat: float) -> float:
    """Modulus level defining the block-largeness set at the block's radius:
    sqrt(1/(c_hat*2**(j+6))) * sqrt(log(1/(1-r_s)))."""
    x_j = math.sqrt(1.0 / (c_hat * 2.0 ** (j + 6)))
    return x_j * math.sqrt(RadiusSpec.one_minus_pow3(2 * s).log_inv_gap())


def _measure_check(
    s: int,
    i: int,
    j: int,
    c_hat: float,
    mc_samples: int,
    offset_u: int,
    margin_sigmas: float,
) -> dict:
    """Empirical measure of {|block| > threshold} with a sampling margin.

    The target 1 - 2**-(j+5) comes from instantiating the tail bound at
    x = sqrt(1/(c*2**(j+6))), eps = 2**-(j+6) and using exp(-t) > 1 - t.
    """
    threshold = exceedance_threshold(s, j, c_hat)
    y = block_modulus_samples(s, mc_samples, offset_u)
    measure = float(np.mean(y > threshold))
    sigma = math.sqrt(max(measure * (1.0 - measure), 0.0) / mc_samples)
    target = 1.0 - 2.0 ** -(j + 5)
    return {
        "i": i,
        "j": j,
        "s": s,
        "measure": measure,
        "sigma": sigma,
        "target": target,
        "offset_u": offset_u,
        "n_samples": mc_samples,
        "sampled": True,
        "passed": measure - margin_sigmas * sigma >= target,
    }


def build_block_table(
    j_max: int,
    profile: ConstantProfile,
    c_hat: float,
    mc_samples: int = 1 << 17,
    rng_seed: int = 0,
) -> BlockTable:
    """Inductive block-table construction under the given constant profile.

    Each slot doubles until the floor, the cross-damping inequalities for
    the profile's pair set, and (for samplable blocks) the measure
    condition all hold.  A measure condition that keeps failing within the
    doubling budget signals that c_hat is too small for the target and
    raises with that diagnostic.
    """
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    if c_hat <= 0:
        raise ValueError("tail constant must be positive")
    entries: dict[tuple[int, int], int] = {}
    reports: dict[tuple[int, int], dict] = {}
    log: list[dict] = []
    order: list[tuple[int, int]] = []
    prev_s = 0
    for j in range(1, j_max + 1):
        for i in range(1, j + 1):
            cand = max(profile.floor(j) + 1, prev_s + 1)
            attempt = 0
            while True:
                ok, why, report = _block_candidate_ok(
                    cand, i, j, entries, order, profile, c_hat, mc_samples, rng_seed, attempt
                )
                if ok:
                    break
                attempt += 1
                if attempt > profile.max_doublings:
                    raise RuntimeError(
                        f"block ({i}, {j}) exhausted {profile.max_doublings} doublings "
                        f"(last failure: {why}); if the failure is the measure "
                        f"condition, c_hat={c_hat:.6g} is too small for the target"
                    )
                cand *= 2
            entries[(i, j)] = cand
            reports[(i, j)] = report if report is not None else {
                "i": i,
                "j": j,
                "s": cand,
                "sampled": False,
                "passed": None,
                "reason": f"block length {cand + 1} exceeds sampling cap "
                          f"{profile.max_sample_terms}",
            }
            order.append((i, j))
            log.append({"col": j, "row": i, "doublings": attempt, "s_bits": cand.bit_length()})
            prev_s = cand
    return BlockTable(
        j_max=j_max,
        profile_name=profile.name,
        c_hat=c_hat,
        entries=entries,
        measure_reports=reports,
        mc_samples=mc_samples,
        rng_seed=rng_seed,
        build_log=tuple(log),
    )


def _block_candidate_ok(
    cand: int,
    i: int,
    j: int,
    entries: dict,
    order: list,
    profile: ConstantProfile,
    c_hat: float,
    mc_samples: int,
    rng_seed: int,
    attempt: int,
):
    """(ok, failure_reason, measure_report) for one candidate value."""
    for pos in reversed(order):
        s_old = entries[pos]
        if not _cross_ok(cand, (i, j), s_old, pos, c_hat):
            return False, f"cross bound of ({i},{j}) at radius of {pos}", None
        if profile.check_backward_pairs and not _cross_ok(s_old, pos, cand, (i, j), c_hat):
            return False, f"cross bound of {pos} at radius of ({i},{j})", None
    if cand + 1 > profile.max_sample_terms:
        return True, None, None
    offset_u = rotation_offset(rng_seed, i, j, attempt)
    report = _measure_check(cand, i, j, c_hat, mc_samples, offset_u, profile.margin_sigmas)
    if not report["passed"]:
        return False, f"measure condition at s={cand}", None
    return True, None, report


@dataclass(frozen=True)
class BlockCheckReport:
    passed: bool
    checked_pairs: int
    violations: tuple
    measures: tuple
    skipped: tuple

    def summary(self) -> str:
        state = "pass" if self.passed else f"FAIL ({len(self.violations)} violations)"
        extra = f", {len(self.skipped)} blocks skipped sampling" if self.skipped else ""
        return f"{self.checked_pairs} cross pairs checked{extra}: {state}"


def verify_block_table(
    table: BlockTable,
    mc_samples: int | None = None,
    rng_seed: int = 1,
) -> BlockCheckReport:
    """Independent re-check of a block table.

    Floors, ordering, and cross-damping are recomputed exhaustively for the
    profile's pair set; the measure condition is re-sampled with offsets
    derived from this function's own seed, so a verification pass is fresh
    evidence rather than a replay of the build.  Blocks longer than the
    profile's sampling cap appear in ``skipped``.
    """
    profile = table.profile()
    mc = table.mc_samples if mc_samples is None else mc_samples
    violations: list[tuple] = []
    order = table.order()

    prev = 0
    for pos in order:
        s = table.entry(*pos)
        if s <= prev:
            violations.append(("order", pos, s, prev))
        prev = s
        floor = profile.floor(pos[1])
        if not s > floor:
            violations.append(("floor", pos, s, floor))

    checked = 0
    rank = {pos: k for k, pos in enumerate(order)}
    for pos_bump in order:
        for pos_rad in order:
            if pos_bump == pos_rad:
                continue
            # A "forward" pair evaluates a later block at an earlier radius;
            # that is the direction every profile enforces.  The backward
            # direction is only part of the literal profile's contract.
            if rank[pos_bump] < rank[pos_rad] and not profile.check_backward_pairs:
                continue
            checked += 1
            if not _cross_ok(
                table.entry(*pos_bump), pos_bump, table.entry(*pos_rad), pos_rad, table.c_hat
            ):
                violations.append(("cross", pos_bump, pos_rad))

    measures = []
    skipped = []
    for pos in order:
        s = table.entry(*pos)
        if s + 1 > profile.max_sample_terms:
            skipped.append(pos)
            continue
        offset_u = rotation_offset(rng_seed, pos[0], pos[1], 0)
        report = _measure_check(
            s, pos[0], pos[1], table.c_hat, mc, offset_u, profile.margin_sigmas
        )
        measures.append(report)
        if not report["passed"]:
            violations.append(("measure", pos, report["measure"], report["target"]))

    return BlockCheckReport(
        passed=not violations,
        checked_pairs=checked,
        violations=tuple(violations),
        measures=tuple(measures),
        skipped=tuple(skipped),
    )
