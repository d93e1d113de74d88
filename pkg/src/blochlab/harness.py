"""End-to-end experiments on families of lacunary generators.

Three families are built from the tables:

* row families  f_i(z) = 1 + sum over rows n of z**s(n, i), one function per
  column of a damped exponent table;
* branch families  f_a(z) = 1 + sum of z**s(rank) over the tree codes of a
  binary expansion a, with codes of all family members mapped by rank into a
  single-column table — two expansions agreeing to depth d share exactly
  d - 1 codes, so intersections and residuals are exact combinatorics;
* block families  f_i(z) = 1 + sum over columns j >= i of delta_j times the
  gap block at s(i, j), with delta_j -> 0 (derivative decay at the
  boundary).

On these families two experiment drivers run.  ``separation_lower_bound``
evaluates a weighted combination g = sum p_j f_j on the circle matched to
one chosen block and certifies a lower bound for the Bloch seminorm against
an explicit error budget: every budget term is an upper bound for the
corresponding remainder's supremum on that circle, so the reported
inequality lhs >= main - budget holds pointwise, not just on average.
``bootstrap_step_check`` runs one induction step of the level-J largeness
argument for block families: hypothesis checks at level J, the measure
bound 1/16, the moment bound 2**J, the weighted-block L**2 bound, and the
level J-1 conclusions, each link reported with its computed value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .distribution import block_modulus_samples, rotation_offset
from .norms import coeff_norm_upper, lp_mean, product_norm_upper
from .series import (
    BigExponent,
    CircleSamples,
    DensePolynomial,
    OFFSET_MOD,
    RadiusSpec,
    SparseSeries,
    eval_circle,
    eval_derivative_circle,
    gap_block,
    monomial_seminorm,
    product_series,
    radial_power,
    sum_series,
)
from .tables import BlockTable, ExponentTable, block_coefficient, exceedance_threshold

__all__ = [
    "GeneratorFamily",
    "SeparationReport",
    "BootstrapReport",
    "table_family",
    "branch_digits",
    "branch_codes",
    "branch_intersection_depth",
    "branch_residual",
    "branch_family",
    "block_family",
    "random_polynomials",
    "trial_polynomials",
    "separation_lower_bound",
    "separation_scan",
    "u_set_measure",
    "scale_polynomials_to_unit",
    "bootstrap_step_check",
    "boundary_radius_grid",
    "exp_radius_grid",
    "lacunary_corpus",
]


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorFamily:
    """A finite list of generator functions with their table provenance.

    ``positions[k]`` lists, per term of ``functions[k]``, the table position
    that produced the exponent: (row, column) for exponent tables, (i, j)
    for block tables.  Budget computations need these to look up certified
    cross-damping bounds.
    """

    functions: tuple
    labels: tuple
    kind: str
    table: object
    positions: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for f in self.functions:
            if f.constant != 1:
                raise ValueError("every family function must have value 1 at 0")

    @property
    def size(self) -> int:
        return len(self.functions)

    def tail_value_bound(self, index: int, radius: RadiusSpec) -> float:
        """Bound for the omitted terms of functions[index] past its truncation."""
        return self.functions[index].tail_value_bound(radius)


def table_family(table: ExponentTable, i_set, n_trunc: int) -> GeneratorFamily:
    """Row families 1 + sum_{n=i}^{n_trunc} z**s(n, i) for each column i."""
    i_set = tuple(i_set)
    if n_trunc < 1 or n_trunc > table.n_max:
        raise ValueError("truncation depth outside the table")
    functions = []
    positions = []
    for i in i_set:
        if not (1 <= i <= table.width(n_trunc)):
            raise ValueError(f"column {i} not present down to row {n_trunc}")
        rows = [n for n in range(i, n_trunc + 1)]
        exps = [table.entry(n, i) for n in rows]
        functions.append(SparseSeries(1.0, [1.0] * len(exps), exps, membership_hint="bloch"))
        positions.append(tuple((n, i) for n in rows))
    return GeneratorFamily(
        functions=tuple(functions),
        labels=tuple(f"column {i}" for i in i_set),
        kind="table_rows",
        table=table,
        positions=tuple(positions),
        meta={"i_set": i_set, "n_trunc": n_trunc},
    )


def branch_digits(alpha, depth: int):
    """First ``depth`` binary digits of alpha in [0, 1].

    Dyadic rationals take the terminating expansion; alpha = 1 is the
    all-ones string (the expansion 0.111...).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    x = Fraction(alpha)
    if not 0 <= x <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    if x == 1:
        return (1,) * depth
    digits = []
    for _ in range(depth):
        x *= 2
        d = int(x >= 1)
        if d:
            x -= 1
        digits.append(d)
    return tuple(digits)


def branch_codes(alpha, depth: int) -> list:
    """Codes 2**k + (value of the first k digits) for k = 1..depth.

    Each code names the length-k tree prefix of alpha's expansion, so two
    alphas share exactly the codes of their common prefix.
    """
    codes = []
    v = 0
    for k, d in enumerate(branch_digits(alpha, depth), start=1):
        v = 2 * v + d
        codes.append((1 << k) + v)
    return codes


def branch_intersection_depth(alpha, beta, depth: int) -> int:
    """Number of shared codes = (first differing digit) - 1; ``depth`` if equal."""
    da = branch_digits(alpha, depth)
    db = branch_digits(beta, depth)
    for k, (a, b) in enumerate(zip(da, db)):
        if a != b:
            return k
    return depth


def branch_residual(alphas, depth: int):
    """(codes of alphas[0] not shared with any other, max pairwise divergence).

    The residual size is at least depth - d_max, where d_max is the deepest
    pairwise agreement within the family.
    """
    alphas = list(alphas)
    if len(alphas) < 2:
        raise ValueError("need at least two expansions")
    base = set(branch_codes(alphas[0], depth))
    others = set()
    for a in alphas[1:]:
        others |= set(branch_codes(a, depth))
    d_max = 0
    for i in range(len(alphas)):
        for k in range(i + 1, len(alphas)):
            d_max = max(d_max, branch_intersection_depth(alphas[i], alphas[k], depth))
    return sorted(base - others), d_max


def branch_family(alphas, table: ExponentTable, depth: int) -> GeneratorFamily:
    """Functions 1 + sum of z**s(rank(code), 1) over each alpha's codes.

    The union of all codes in the family is ranked, and rank t maps to row
    t of the (single-column) table; this preserves the shared-prefix
    combinatorics while keeping exponents inside a finite table.  Rejected
    when the union is deeper than the table.
    """
    alphas = list(alphas)
    if len(set(Fraction(a) for a in alphas)) != len(alphas):
        raise ValueError("alphas must be distinct")
    code_lists = [branch_codes(a, depth) for a in alphas]
    union = sorted(set().union(*code_lists))
    if len(union) > table.n_max:
        raise ValueError(
            f"family needs {len(union)} rows but the table has {table.n_max}"
        )
    rank = {code: t for t, code in enumerate(union, start=1)}
    functions = []
    positions = []
    for codes in code_lists:
        rows = sorted(rank[c] for c in codes)
        exps = [table.entry(t, 1) for t in rows]
        functions.append(SparseSeries(1.0, [1.0] * len(exps), exps, membership_hint="bloch"))
        positions.append(tuple((t, 1) for t in rows))
    return GeneratorFamily(
        functions=tuple(functions),
        labels=tuple(f"alpha {Fraction(a)}" for a in alphas),
        kind="branch",
        table=table,
        positions=tuple(positions),
        meta={"alphas": [Fraction(a) for a in alphas], "depth": depth, "code_rank": rank},
    )


def block_family(table: BlockTable, i_set) -> GeneratorFamily:
    """Little-Bloch generators 1 + sum_{j>=i} delta_j * (gap block at s(i,j))."""
    i_set = tuple(i_set)
    functions = []
    positions = []
    for i in i_set:
        if not (1 <= i <= table.j_max):
            raise ValueError(f"row {i} outside the block table")
        coeffs: list[complex] = []
        exps: list[BigExponent] = []
        pos: list[tuple[int, int]] = []
        for j in range(i, table.j_max + 1):
            s = table.entry(i, j)
            d = table.delta(j)
            for m in range(s, 2 * s + 1):
                coeffs.append(d)
                exps.append(BigExponent(pow3=m))
                pos.append((i, j))
        functions.append(SparseSeries(1.0, coeffs, exps, membership_hint="little_bloch"))
        positions.append(tuple(pos))
    return GeneratorFamily(
        functions=tuple(functions),
        labels=tuple(f"block row {i}" for i in i_set),
        kind="block_little",
        table=table,
        positions=tuple(positions),
        meta={"i_set": i_set, "c_hat": table.c_hat, "profile": table.profile_name},
    )


# ---------------------------------------------------------------------------
# Random polynomial corpus
# ---------------------------------------------------------------------------


def random_polynomials(
    rng: np.random.Generator,
    count: int,
    max_degree: int = 8,
    normalize_first: bool = True,
    min_leading: float = 0.05,
) -> list:
    """Polynomials with coefficients uniform on the complex unit disc.

    The first polynomial is rescaled so its value at 0 is exactly 1 (the
    normalization under which separation ratios are read); draws whose
    constant term is tiny are rejected so the rescaling stays bounded.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    polys = []
    for idx in range(count):
        while True:
            deg = int(rng.integers(0, max_degree + 1))
            u = rng.random(deg + 1)
            v = rng.random(deg + 1)
            coeffs = np.sqrt(u) * np.exp(2j * math.pi * v)
            if idx == 0 and normalize_first:
                if abs(coeffs[0]) < min_leading:
                    continue
                coeffs = coeffs / coeffs[0]
                coeffs[0] = 1.0  # complex self-division can miss by one ulp
            break
        polys.append(DensePolynomial(list(coeffs)))
    return polys


def trial_polynomials(master_seed: int, trial: int, count: int, max_degree: int = 8) -> list:
    """Deterministic per-trial corpus: stream keyed by (master seed, trial)."""
    rng = np.random.default_rng((master_seed, trial))
    return random_polynomials(rng, count, max_degree)


# ---------------------------------------------------------------------------
# Separation experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeparationReport:
    """One certified run of the seminorm separation inequality.

    ``lhs`` is the sampled maximum of (1 - r**2)|g'| on the block's circle;
    ``main_term`` the block bump times the sampled maximum of |p0|; and
    ``error_budget`` a certified upper bound for everything else, split in
    ``budget_parts``.  ``decomposition_ok`` asserts lhs >= main - budget;
    ``ratio`` reads the bound against |p0(0)|.
    """

    position: tuple
    label: str
    lhs: float
    main_term: float
    error_budget: float
    budget_parts: dict
    ratio: float
    p0_at_zero: complex
    vacuous: bool
    decomposition_ok: bool
    passed: bool
    n_samples: int
    offset_u: int


def _circle_points(radius: RadiusSpec, n_samples: int, offset_u: int) -> np.ndarray:
    turns = (np.arange(n_samples) / n_samples) + (offset_u / OFFSET_MOD)
    return radius.to_float() * np.exp(2j * math.pi * turns)


def _radial_value_sup(f: SparseSeries, radius: RadiusSpec) -> float:
    """Certified sup of (1 - r**2)|f| on the circle: coefficient moduli times
    the radial powers, summed in linear space (all factors <= 1)."""
    total = abs(f.constant)
    for a, e in f.terms():
        lp = radial_power(e, radius)
        if lp > -math.inf:
            total += abs(a) * math.exp(lp)
    return radius.one_minus_r_sq() * total


def separation_lower_bound(
    fam: GeneratorFamily,
    polys,
    main: int,
    row: int,
    n_samples: int = 1 << 14,
    offset_u: int = 0,
    ratio_threshold: float | None = None,
) -> SeparationReport:
    """Lower-bound the Bloch seminorm of g = sum_j p_j f_j at one block.

    ``main`` selects the function paired with p0; ``row`` the table row of
    the distinguished block inside that function.  The circle is the
    near-optimal radius of that block's exponent.  Cross terms from other
    blocks are budgeted through the table's certified damping bounds
    2**-(row+row'), value terms through exact radial sums; a shared table
    position (possible in branch families) falls back to the directly
    computed bump, which is exact rather than certified-small.
    """
    if not isinstance(fam.table, ExponentTable):
        raise TypeError("separation runs on exponent-table families")
    polys = list(polys)
    if len(polys) != fam.size:
        raise ValueError("need exactly one polynomial per family function")
    pos_main = None
    for pos in fam.positions[main]:
        if pos[0] == row:
            pos_main = pos
    if pos_main is None:
        raise ValueError(f"function {main} has no block in row {row}")
    s_main = fam.table.entry(*pos_main)
    radius = RadiusSpec.sqrt_complement(s_main)

    g = sum_series([product_series(p, f) for p, f in zip(polys, fam.functions)])
    lhs = eval_derivative_circle(
        g, radius, n_samples, offset_u, log_scale=radius.log_one_minus_r_sq()
    ).max_abs()

    p0 = polys[main]
    z = _circle_points(radius, n_samples, offset_u)
    p0_max = float(np.max(np.abs(p0.eval_points(z))))
    bump_main = monomial_seminorm(s_main, radius)
    main_term = bump_main * p0_max

    # (a) other blocks of the main function against p0's sup
    same_fn = 0.0
    for pos in fam.positions[main]:
        if pos != pos_main:
            same_fn += 2.0 ** -(pos[0] + row)
    same_fn *= p0.sup_bound()
    # (b) derivative-of-polynomial terms against exact radial value sums
    deriv_terms = sum(
        p.derivative().sup_bound() * _radial_value_sup(f, radius)
        for p, f in zip(polys, fam.functions)
    )
    # (c) blocks of the other functions against their polynomials' sups
    cross = 0.0
    for k, (p, pos_list) in enumerate(zip(polys, fam.positions)):
        if k == main:
            continue
        acc = 0.0
        for pos in pos_list:
            if pos == pos_main:
                acc += bump_main  # shared block: certified bound unavailable
            else:
                acc += 2.0 ** -(pos[0] + row)
        cross += p.sup_bound() * acc
    budget = same_fn + deriv_terms + cross

    p0_zero = p0.at_zero()
    vacuous = p0_zero == 0
    ratio = math.inf if vacuous else lhs / abs(p0_zero)
    decomposition_ok = lhs >= main_term - budget
    passed = decomposition_ok and (
        vacuous or ratio_threshold is None or ratio >= ratio_threshold
    )
    return SeparationReport(
        position=pos_main,
        label=fam.labels[main],
        lhs=lhs,
        main_term=main_term,
        error_budget=budget,
        budget_parts={
            "same_function_blocks": same_fn,
            "polynomial_derivatives": deriv_terms,
            "cross_function_blocks": cross,
        },
        ratio=ratio,
        p0_at_zero=p0_zero,
        vacuous=vacuous,
        decomposition_ok=decomposition_ok,
        passed=passed,
        n_samples=n_samples,
        offset_u=offset_u,
    )


def separation_scan(
    fam: GeneratorFamily,
    polys,
    main: int,
    rows,
    n_samples: int = 1 << 14,
    offset_u: int = 0,
    ratio_threshold: float | None = None,
) -> list:
    """Separation reports along several rows of the distinguished function."""
    return [
        separation_lower_bound(
            fam, polys, main, row, n_samples, offset_u, ratio_threshold
        )
        for row in rows
    ]


# ---------------------------------------------------------------------------
# Bootstrap experiments on block families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BootstrapReport:
    """One level-J induction step with every chain link's computed value.

    ``hypotheses`` holds the level-J entry conditions per function;
    ``links`` the per-function conclusions.  ``failed_links`` names each
    (function label, link) that did not hold.
    """

    J: int
    c_hat: float
    profile_name: str
    norm_certificate: float
    p0_target: float
    hypotheses: tuple
    links: tuple
    passed: bool
    failed_links: tuple
    n_samples: int
    offset_seed: int


def u_set_measure(
    fam: GeneratorFamily,
    p: DensePolynomial,
    i: int,
    j: int,
    n_samples: int,
    c_hat: float,
    offset_u: int = 0,
) -> float:
    """Measure of {block (i,j) exceeds its largeness level and |p| >= 2**(j-1)}
    on the block's circle."""
    table = fam.table
    if not isinstance(table, BlockTable):
        raise TypeError("largeness sets live on block-table families")
    s = table.entry(i, j)
    radius = table.radius(i, j)
    block_mod = block_modulus_samples(s, n_samples, offset_u)
    p_mod = np.abs(p.eval_points(_circle_points(radius, n_samples, offset_u)))
    hit = (block_mod > exceedance_threshold(s, j, c_hat)) & (p_mod >= 2.0 ** (j - 1))
    return float(np.mean(hit))


def scale_polynomials_to_unit(fam: GeneratorFamily, polys) -> tuple:
    """Scale the polynomials so the combination sum p_m f_m has certified
    Bloch norm at most 1; returns (scaled list, certificate of the input)."""
    polys = list(polys)
    if len(polys) != fam.size:
        raise ValueError("need exactly one polynomial per family function")
    nu = sum(product_norm_upper(p, f) for p, f in zip(polys, fam.functions))
    if nu <= 1.0:
        return polys, nu
    # Aim slightly inside 1 so the re-computed certificate of the scaled
    # family cannot round back above it.
    factor = (1.0 - 1e-9) / nu
    return [DensePolynomial([c * factor for c in p.coeffs]) for p in polys], nu


def _poly_samples(p: DensePolynomial, radius: RadiusSpec, n_samples: int, offset_u: int) -> CircleSamples:
    values = p.eval_points(_circle_points(radius, n_samples, offset_u))
    return CircleSamples(radius=radius, n_samples=n_samples, values=values, offset_u=offset_u)


def bootstrap_step_check(
    fam: GeneratorFamily,
    polys,
    J: int,
    c_hat: float,
    n_samples: int = 1 << 15,
    offset_seed: int = 0,
) -> BootstrapReport:
    """One induction step of the level-J largeness chain, fully evaluated.

    Requires a block family, J above every family row with blocks through
    column J + 1 available, and a certified norm at most 1 for the
    combination (use ``scale_polynomials_to_unit`` first).  Each function
    m runs the whole chain:

    * entry hypotheses: m(U at level J) <= J/2**(J+5) and the L**(2**(J+1))
      mean at the level-(J+1) radius <= 2**(J+1);
    * m(A) <= 1/16 for A = {|p_m| >= 2**(J-1)} on the level-J circle;
    * the L**(2**J) mean at the level-J radius <= 2**J, with the
      power-split inequality behind it checked in its corrected form
      (exceptional-measure factor m(A)**(1/2**(J+1)), same circle) and the
      looser sqrt(m(A)) form reported for comparison, unasserted;
    * the weighted block moment X <= 2 and its square <= 32;
    * conclusion at level J - 1: m(U) <= (J-1)/2**(J+4);
    * convexity sanity on the actual integrand (exp of mean vs mean of exp)
      and the exponential mean <= 2 at the level-(J-1) radius.

    All sample offsets derive from ``offset_seed``; reruns are exact.
    """
    table = fam.table
    if not isinstance(table, BlockTable):
        raise TypeError("the bootstrap step runs on block-table families")
    polys = list(polys)
    if len(polys) != fam.size:
        raise ValueError("need exactly one polynomial per family function")
    i_set = fam.meta["i_set"]
    if J > 20:
        raise ValueError("J capped at 20")
    if J <= max(i_set):
        raise ValueError("J must exceed every family row")
    if J + 1 > table.j_max:
        raise ValueError(f"need blocks through column {J + 1}; table stops at {table.j_max}")
    nu = sum(product_norm_upper(p, f) for p, f in zip(polys, fam.functions))
    if nu > 1.0:
        raise ValueError(
            f"certified norm {nu:.3g} exceeds 1; scale with scale_polynomials_to_unit"
        )

    hypotheses = []
    links = []
    failed: list[tuple] = []

    def check(label: str, m: int, ok: bool):
        if not ok:
            failed.append((fam.labels[m], label))
        return ok

    for m, (i_m, p) in enumerate(zip(i_set, polys)):
        # -- hypotheses at level J
        u22 = rotation_offset(offset_seed, 22, i_m, J)
        mU_J = u_set_measure(fam, p, i_m, J, n_samples, c_hat, u22)
        bound22 = J / 2.0 ** (J + 5)
        r_next = table.radius(i_m, J + 1)
        u23 = rotation_offset(offset_seed, 23, i_m, J + 1)
        lp_next_radius = lp_mean(_poly_samples(p, r_next, n_samples, u23), 2.0 ** (J + 1))
        bound23 = 2.0 ** (J + 1)
        hypotheses.append(
            {
                "label": fam.labels[m],
                "u_measure_J": mU_J,
                "u_measure_J_bound": bound22,
                "u_measure_J_ok": check("entry_u_measure", m, mU_J <= bound22),
                "lp_next_radius": lp_next_radius,
                "lp_next_bound": bound23,
                "lp_next_ok": check("entry_lp", m, lp_next_radius <= bound23),
            }
        )

        # -- measure of the plain largeness set A at level J
        r_J = table.radius(i_m, J)
        uA = rotation_offset(offset_seed, 40, i_m, J)
        pJ = _poly_samples(p, r_J, n_samples, uA)
        p_mod_J = np.abs(pJ.values)
        m_A = float(np.mean(p_mod_J >= 2.0 ** (J - 1)))
        ok_A = check("measure_A", m, m_A <= 1.0 / 16.0)

        # -- L**(2**J) bound and the power-split behind it (same circle)
        lp_J = lp_mean(pJ, 2.0**J)
        ok25 = check("lp_level_J", m, lp_J <= 2.0**J)
        lp_next_same = lp_mean(pJ, 2.0 ** (J + 1))
        split_corrected = 2.0 ** (J - 1) + m_A ** (2.0 ** -(J + 1)) * lp_next_same
        split_paper = 2.0 ** (J - 1) + math.sqrt(m_A) * lp_next_same
        ok_split = check("power_split", m, lp_J <= split_corrected * (1.0 + 1e-9))

        # -- weighted block moment at level J - 1
        r_prev = table.radius(i_m, J - 1)
        s_prev = table.entry(i_m, J - 1)
        u_prev = rotation_offset(offset_seed, 24, i_m, J - 1)
        block_mod = block_modulus_samples(s_prev, n_samples, u_prev)
        p_mod_prev = np.abs(p.eval_points(_circle_points(r_prev, n_samples, u_prev)))
        delta_prev = block_coefficient(J - 1, c_hat)
        integral = float(
            np.mean((p_mod_prev * delta_prev * block_mod) ** 2) / r_prev.log_inv_gap()
        )
        X = math.sqrt(integral)
        ok_X = check("block_moment", m, X <= 2.0)
        ok_int = check("block_moment_square", m, integral <= 32.0)

        # -- conclusion at level J - 1
        mU_prev = u_set_measure(fam, p, i_m, J - 1, n_samples, c_hat, u_prev)
        bound24 = (J - 1) / 2.0 ** (J + 4)
        ok24 = check("u_measure_prev", m, mU_prev <= bound24)

        # -- convexity sanity and exponential mean on the combination
        combo = np.zeros(n_samples, dtype=np.complex128)
        for q, f in zip(polys, fam.functions):
            f_vals = eval_circle(f, r_prev, n_samples, u_prev).values
            q_vals = q.eval_points(_circle_points(r_prev, n_samples, u_prev))
            combo += q_vals * f_vals
        h = np.abs(combo) ** 2 / (8.0 * r_prev.log_inv_gap())
        jensen_lhs = float(np.exp(np.mean(h)))
        exp_mean = float(np.mean(np.exp(h)))
        ok_jensen = check("convexity", m, jensen_lhs <= exp_mean * (1.0 + 1e-12))
        ok_exp = check("exp_mean", m, exp_mean <= 2.0)

        links.append(
            {
                "label": fam.labels[m],
                "p_at_zero": abs(p.at_zero()),
                "measure_A": m_A,
                "measure_A_ok": ok_A,
                "lp_level_J": lp_J,
                "lp_level_J_bound": 2.0**J,
                "lp_level_J_ok": ok25,
                "split_lhs": lp_J,
                "split_corrected_rhs": split_corrected,
                "split_paper_rhs": split_paper,
                "split_ok": ok_split,
                "block_moment": X,
                "block_moment_ok": ok_X,
                "block_moment_square": integral,
                "block_moment_square_ok": ok_int,
                "u_measure_prev": mU_prev,
                "u_measure_prev_bound": bound24,
                "u_measure_prev_ok": ok24,
                "jensen_lhs": jensen_lhs,
                "exp_mean": exp_mean,
                "jensen_ok": ok_jensen,
                "exp_mean_ok": ok_exp,
            }
        )

    return BootstrapReport(
        J=J,
        c_hat=c_hat,
        profile_name=table.profile_name,
        norm_certificate=nu,
        p0_target=2.0 ** max(i_set),
        hypotheses=tuple(hypotheses),
        links=tuple(links),
        passed=not failed,
        failed_links=tuple(failed),
        n_samples=n_samples,
        offset_seed=offset_seed,
    )


# ---------------------------------------------------------------------------
# Radius grids for boundary checks
# ---------------------------------------------------------------------------


def boundary_radius_grid(count: int = 64, end_gap: float = 1e-6):
    """Radii with geometrically shrinking gap, from tanh(1) toward 1.

    tanh(1) is the validity floor of the two-sided growth bound; the grid
    is the standard battery for boundary-behaviour checks.
    """
    if count < 2:
        raise ValueError("need at least two radii")
    start_gap = 1.0 - math.tanh(1.0)
    radii = []
    for t in range(count):
        gap = start_gap * (end_gap / start_gap) ** (t / (count - 1))
        radii.append(RadiusSpec.plain(max(math.tanh(1.0), 1.0 - gap)))
    return radii


def exp_radius_grid(count: int = 64, end_gap: float = 1e-6):
    """Radii from 1 - 1/e toward 1, geometrically shrinking gap.

    1 - 1/e is where log(1/(1-r)) reaches 1, the validity floor of the
    exponential-moment bound; the first grid point sits exactly on it.
    """
    if count < 2:
        raise ValueError("need at least two radii")
    start_gap = math.exp(-1.0)
    radii = []
    for t in range(count):
        gap = start_gap * (end_gap / start_gap) ** (t / (count - 1))
        radii.append(RadiusSpec.plain(1.0 - gap))
    return radii


def lacunary_corpus(count: int = 20, s_start: int = 8) -> list:
    """Coefficient-normalized gap blocks with certified norm at most one.

    Block lengths grow geometrically (ratio about 2**(1/3)) from
    ``s_start``; each block is rescaled by slightly less than the inverse
    of its coefficient norm certificate, so the recomputed certificate of
    the returned series stays strictly below one despite rounding.
    """
    if count < 1:
        raise ValueError("need at least one series")
    out = []
    s = int(s_start)
    for _ in range(count):
        f = gap_block(s)
        nu = coeff_norm_upper(f)
        out.append(f.scale((1.0 - 1e-9) / nu))
        s = max(s + 1, round(s * 2.0 ** (1.0 / 3.0)))
    return out
