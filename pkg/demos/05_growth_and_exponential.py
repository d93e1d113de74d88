"""Certified norm bounds, and two inequalities they unlock.

A coefficient-side bound certifies the Bloch norm of a sparse series from
above without touching the circle.  With that certificate in hand, two
classical statements become checkable: the growth bound
|f(z)| <= (norm/2) log((1+|z|)/(1-|z|)) for radii at least tanh(1), and the
exponential-square integral staying at most 2 for unit-norm series once
log(1/(1-r)) >= 1.  Both checks sample circles, so a reported violation is
a genuine counterexample rather than quadrature noise.
"""

from blochlab.harness import (
    boundary_radius_grid,
    exp_radius_grid,
    lacunary_corpus,
)
from blochlab.norms import (
    bloch_norm_lower,
    coeff_norm_upper,
    growth_bound_check,
    makarov_exp_check,
)
from blochlab.series import RadiusSpec, SparseSeries


def main() -> None:
    # A short gap series with exponents small enough to watch directly.
    raw = SparseSeries(0.0, [1.0, 1.0, 1.0], [9, 27, 81])
    f = raw.scale(1.0 / coeff_norm_upper(raw))
    radii = [RadiusSpec.plain(r) for r in (0.8, 0.9, 0.95, 0.99)]
    upper = coeff_norm_upper(f)
    lower = bloch_norm_lower(f, radii, n_samples=1 << 10)
    print("three-term gap series z^9 + z^27 + z^81, scaled to certificate 1:")
    print(f"  certified upper bound {upper:.12f}")
    print(f"  sampled lower bound   {lower.value:.6f}")

    rep = growth_bound_check(f, upper, radii, n_samples=1 << 10)
    print(f"  growth bound: max |f| / bound = {rep.max_ratio:.4f} over "
          f"{rep.checked_points} points, {len(rep.violations)} violations")

    corpus = lacunary_corpus(20)
    print()
    print(f"the full corpus ({len(corpus)} members, lengths "
          f"{corpus[0].num_terms}..{corpus[-1].num_terms}) carries the same "
          "certificate:")
    certs = [coeff_norm_upper(g) for g in corpus]
    print(f"  all upper bounds in [{min(certs):.9f}, {max(certs):.9f}]")
    grid = boundary_radius_grid(16)
    worst = 0.0
    for g in corpus:
        r = growth_bound_check(g, coeff_norm_upper(g), grid, n_samples=1 << 10)
        worst = max(worst, r.max_ratio)
        assert not r.violations
    print(f"  growth bound over 16 boundary radii: worst ratio {worst:.4f}, "
          "zero violations")

    g = corpus[0]
    print()
    print("exponential-square circle means for the shortest member "
          "(bound is 2):")
    for radius in exp_radius_grid(5):
        m = makarov_exp_check(g, coeff_norm_upper(g), radius, n_samples=1 << 12)
        print(f"  log(1/(1-r)) = {radius.log_inv_gap():7.2f}   "
              f"mean = {m.lhs:.6f}")

    # The certificate is part of the contract: an understated norm is
    # caught with a concrete witness.
    ident = SparseSeries(0.0, [1.0], [1])
    bad = growth_bound_check(ident, 0.1, [RadiusSpec.plain(0.8)],
                             n_samples=1 << 8)
    radius, _, lhs, rhs = bad.violations[0]
    print()
    print("claiming norm 0.1 for the identity map:")
    print(f"  passed = {bad.passed}, max ratio {bad.max_ratio:.2f}; witness "
          f"at r = {radius.to_float():.2f}: |f| = {lhs:.3f} > bound {rhs:.3f}")


if __name__ == "__main__":
    main()
