"""Distinct dyadic directions eventually stop sharing blocks.

Each ratio alpha in [0, 1) walks a binary tree: at depth d its code is the
integer built from the first d binary digits (with a leading 1).  Two
ratios share codes exactly down to their common prefix, so any finite
family of distinct ratios leaves the first ratio a "residual" of codes all
its own — at least depth minus the deepest pairwise agreement.  Mapping
each code to a row of a single-column exponent table turns every ratio
into a gap series, and the separation bound then works on residual blocks
untouched by the rest of the family.
"""

from fractions import Fraction

from blochlab.harness import (
    branch_codes,
    branch_family,
    branch_intersection_depth,
    branch_residual,
    separation_lower_bound,
)
from blochlab.series import DensePolynomial
from blochlab.tables import build_exponent_table

DEPTH = 12


def main() -> None:
    alphas = tuple(Fraction(i, 8) for i in range(8))
    print(f"codes of the eighths at depth 6:")
    for a in alphas:
        print(f"  alpha = {str(a):<4s} codes {branch_codes(a, 6)}")

    print()
    print("pairwise agreement depths with alpha = 0:")
    for a in alphas[1:]:
        d = branch_intersection_depth(Fraction(0), a, DEPTH)
        print(f"  vs {str(a):<4s}: shares the first {d} codes")

    residual, d_max = branch_residual(alphas, DEPTH)
    print()
    print(f"at depth {DEPTH}: residual of alpha = 0 has {len(residual)} codes "
          f"(guaranteed >= {DEPTH - d_max}), deepest overlap {d_max}")

    union = set()
    for a in alphas:
        union |= set(branch_codes(a, DEPTH))
    table = build_exponent_table(len(union), max_columns=1)
    fam = branch_family(alphas, table, DEPTH)
    rank = fam.meta["code_rank"]
    polys = [DensePolynomial([1.0]) for _ in range(fam.size)]
    print()
    print("separation on each residual block (all-ones combination):")
    for code in residual:
        rep = separation_lower_bound(fam, polys, 0, rank[code])
        print(f"  code {code:>5d} -> table row {rank[code]:>2d}: "
              f"ratio {rep.ratio:.6f}, budget {rep.error_budget:.2e}")


if __name__ == "__main__":
    main()
