"""One rung of the induction ladder, with every link computed in the open.

The largeness argument proceeds level by level: knowing that the set where
|p_m| is large has small measure at level J, one derives the same kind of
statement at level J - 1.  Each function in a block family runs the whole
chain — the exceptional set A where |p_m| >= 2**(J-1), an L^(2^J) mean
controlled through a power-split inequality, a weighted block moment X,
and finally the level-(J-1) largeness set.  Nothing is assumed: every
inequality is evaluated on sampled circles and reported with its value.
"""

from blochlab.harness import (
    block_family,
    bootstrap_step_check,
    scale_polynomials_to_unit,
    trial_polynomials,
)
from blochlab.tables import ConstantProfile, build_block_table

C_HAT = 2.31


def main() -> None:
    table = build_block_table(3, ConstantProfile.relaxed(), C_HAT)
    fam = block_family(table, (1,))
    J = 2

    polys, nu = scale_polynomials_to_unit(
        fam, trial_polynomials(0, 3, fam.size, max_degree=4)
    )
    print(f"family of {fam.size} block generator(s); the coefficient "
          f"certificate of the combination is {nu:.1f},")
    print("so the polynomials are scaled down by that factor before the "
          "chain runs.")
    print("(the certificate is deliberately conservative — the chain then "
          "holds with room to spare,")
    print("and the point is that every link is evaluated, not assumed)")

    rep = bootstrap_step_check(fam, polys, J, C_HAT, n_samples=1 << 15)
    print()
    print(f"level J = {J} step: passed = {rep.passed}")

    for hyp, link in zip(rep.hypotheses, rep.links):
        label = link["label"]
        print()
        print(f"  function {label!r}:")
        print(f"    entry: m(U at level {J}) = {hyp['u_measure_J']:.6f} "
              f"<= {hyp['u_measure_J_bound']:.6f}")
        print(f"    entry: L^{2 ** (J + 1)} mean = {hyp['lp_next_radius']:.6f} "
              f"<= {hyp['lp_next_bound']:.1f}")
        print(f"    m(A), A = {{|p| >= 2^{J - 1}}}:  {link['measure_A']:.6f} "
              "<= 0.0625")
        print(f"    L^{2 ** J} mean at level {J}:   {link['lp_level_J']:.6f} "
              f"<= {2.0 ** J:.1f}")
        print(f"    block moment X:          {link['block_moment']:.6f} <= 2")
        print(f"    its square:              {link['block_moment_square']:.6f}"
              " <= 32")
        print(f"    m(U at level {J - 1}):        {link['u_measure_prev']:.6f} "
              f"<= {link['u_measure_prev_bound']:.6f}")
        print(f"    power split: {link['split_lhs']:.2e} <= corrected rhs "
              f"{link['split_corrected_rhs']:.4f}")
        print(f"      (the looser sqrt(m(A)) form would give "
              f"{link['split_paper_rhs']:.4f}; reported, not asserted)")
        print(f"    convexity on the integrand: exp(mean) "
              f"{link['jensen_lhs']:.6f} <= mean(exp) {link['exp_mean']:.6f}"
              f" <= 2")

    print()
    print("failed links:", rep.failed_links or "none")


if __name__ == "__main__":
    main()
