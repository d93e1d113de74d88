"""Numerical laboratory for lacunary series in Bloch-type spaces.

The package splits into six layers:

``series``
    Exact arithmetic for huge exponents and near-unit radii, circle
    sampling, and the weighted monomial derivative.
``norms``
    Certified norm bounds, growth and moment inequalities.
``distribution``
    Distributional behaviour of gap blocks: limit-law distance, energy
    ratios, and the sub-Gaussian tail constant.
``tables``
    Damped exponent tables (triangle and block form) with builders and
    exhaustive verifiers.
``harness``
    Generator families over the tables and the two experiment drivers:
    certified separation lower bounds and the level-J largeness chain.
``io`` / ``cli``
    Deterministic artifacts, caching, and the command-line runner.
"""

from .series import (
    BigExponent,
    CircleSamples,
    DensePolynomial,
    RadiusSpec,
    SparseSeries,
    eval_circle,
    eval_derivative_circle,
    gap_block,
    block_radius,
    monomial_seminorm,
    monomial_seminorm_max,
    near_optimal_radius,
    product_series,
    radial_block_sum,
    radial_power,
    sum_series,
)
from .norms import (
    DecayProfile,
    GrowthReport,
    InequalityReport,
    NormEstimate,
    bloch_norm_lower,
    circle_seminorm,
    coeff_norm_upper,
    growth_bound_check,
    little_bloch_profile,
    lp_mean,
    makarov_exp_check,
    makarov_moment_check,
    product_norm_upper,
)
from .distribution import (
    BlockEnergyReport,
    TailBoundReport,
    TailConstant,
    block_energy_check,
    circle_modulus_cdf,
    estimate_tail_constant,
    rayleigh_cdf,
    rayleigh_distance,
    rotation_offset,
    tail_bound_check,
)
from .tables import (
    BlockCheckReport,
    BlockTable,
    ConstantProfile,
    ExponentTable,
    TableCheckReport,
    block_coefficient,
    build_block_table,
    build_exponent_table,
    exceedance_threshold,
    verify_block_table,
    verify_exponent_table,
)
from .harness import (
    BootstrapReport,
    GeneratorFamily,
    SeparationReport,
    block_family,
    bootstrap_step_check,
    boundary_radius_grid,
    branch_codes,
    branch_digits,
    branch_family,
    branch_intersection_depth,
    branch_residual,
    exp_radius_grid,
    lacunary_corpus,
    random_polynomials,
    scale_polynomials_to_unit,
    separation_lower_bound,
    separation_scan,
    table_family,
    trial_polynomials,
    u_set_measure,
)

__version__ = "0.1.0"
