"""Experiment runner: builds tables, executes the checks, emits artifacts.

Subcommands
-----------
build-seq     build a damped exponent table (triangle or block form), cache it
verify-seq    re-verify a table from the cache (building it unless --no-build)
sz-test       limit-law distance of normalized block moduli (informational)
makarov-test  growth-bound and exponential-moment corpus checks
lemma35       exact block energy (Parseval) ratios
estimate-c    fit the sub-Gaussian tail constant, then check the tail bound
separation    certified seminorm lower bounds on generator families
bootstrap     one induction step of the level-J largeness chain
report        aggregate run reports in the output directory, optional plots

Configuration comes from an optional JSON file (--config) overlaid by
explicit command-line flags.  JSON reports are byte-identical across reruns
with the same configuration and cache: no timestamps or wall-clock values
are recorded, floats are serialized at fixed precision, and all sampling is
seeded.  Exit codes: 0 for pass or informational runs, 1 when an asserted
inequality fails, 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .distribution import (
    DEFAULT_SAMPLES,
    block_energy_check,
    estimate_tail_constant,
    rayleigh_distance,
    tail_bound_check,
)
from .harness import (
    block_family,
    bootstrap_step_check,
    boundary_radius_grid,
    branch_family,
    branch_residual,
    exp_radius_grid,
    lacunary_corpus,
    scale_polynomials_to_unit,
    separation_lower_bound,
    table_family,
    trial_polynomials,
)
from .io import (
    CacheError,
    CacheMissError,
    block_table_id,
    cache_table,
    encode_big_int,
    exponent_table_id,
    load_table,
    read_payload,
    write_csv,
    write_payload,
)
from .norms import (
    coeff_norm_upper,
    growth_bound_check,
    makarov_exp_check,
    makarov_moment_check,
)
from .series import DensePolynomial, monomial_seminorm, near_optimal_radius
from .tables import (
    BlockTable,
    ExponentTable,
    build_block_table,
    build_exponent_table,
    _profile_from_name,
    verify_block_table,
    verify_exponent_table,
)

__all__ = ["main", "run", "UsageError"]

_LIMIT = math.exp(-0.5)

SUBCOMMANDS = (
    "build-seq",
    "verify-seq",
    "sz-test",
    "makarov-test",
    "lemma35",
    "estimate-c",
    "separation",
    "bootstrap",
    "report",
)

_SHARED_KEYS = {"cache_dir", "seed", "samples", "profile", "out", "no_build"}

_ALLOWED_KEYS = {
    "build-seq": {"table", "depth", "max_columns", "j_max", "c_hat"},
    "verify-seq": {"table", "depth", "max_columns", "j_max", "c_hat", "u_grid"},
    "sz-test": {"s_list", "threshold"},
    "makarov-test": {
        "families",
        "depth",
        "i_set",
        "alphas",
        "branch_depth",
        "corpus_count",
        "radii_count",
        "exp_bound",
        "moment_orders",
    },
    "lemma35": {"s_list"},
    "estimate-c": {"s_list", "stability", "tail_s", "tail_j_list"},
    "separation": {
        "family",
        "depth",
        "trials",
        "max_degree",
        "count",
        "rows",
        "threshold",
        "alphas",
        "branch_depth",
        "polynomials",
    },
    "bootstrap": {"i_set", "j_level", "c_hat", "max_degree"},
    "report": {"plots"},
}


class UsageError(Exception):
    """Invalid configuration; reported with diagnostics and exit code 2."""


# ---------------------------------------------------------------------------
# configuration plumbing


def _int_list(value, name: str) -> list[int]:
    if isinstance(value, str):
        value = [part for part in value.split(",") if part.strip()]
    try:
        return [int(v) for v in value]
    except (TypeError, ValueError):
        raise UsageError(f"{name} must be a list of integers, got {value!r}") from None


def _fraction_list(value, name: str) -> list[Fraction]:
    if isinstance(value, str):
        value = [part for part in value.split(",") if part.strip()]
    try:
        return [Fraction(v) for v in value]
    except (TypeError, ValueError, ZeroDivisionError):
        raise UsageError(f"{name} must be a list of fractions, got {value!r}") from None


def _load_config_file(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    return data


def _merge_config(subcommand: str, file_config: dict, cli_values: dict) -> dict:
    allowed = _SHARED_KEYS | _ALLOWED_KEYS[subcommand]
    unknown = sorted(set(file_config) - allowed)
    if unknown:
        raise UsageError(
            f"config keys not recognised by {subcommand}: {', '.join(unknown)} "
            f"(allowed: {', '.join(sorted(allowed))})"
        )
    merged = dict(file_config)
    for key, value in cli_values.items():
        if value is not None:
            merged[key] = value
    merged.setdefault("cache_dir", "cache")
    merged.setdefault("out", "out")
    merged.setdefault("seed", 0)
    merged.setdefault("profile", "relaxed")
    merged.setdefault("no_build", False)
    merged.setdefault("samples", None)
    if merged["profile"] not in ("literal", "relaxed"):
        raise UsageError(f"profile must be literal or relaxed, got {merged['profile']!r}")
    return merged


# ---------------------------------------------------------------------------
# cached tables


def _get_triangle(cfg: dict, depth: int, max_columns: int | None = None) -> ExponentTable:
    key = exponent_table_id(depth, 2, max_columns)
    try:
        return load_table(cfg["cache_dir"], key)
    except CacheMissError:
        if cfg["no_build"]:
            raise UsageError(f"table {key} is not cached and --no-build was given") from None
    table = build_exponent_table(depth, max_columns=max_columns)
    cache_table(table, cfg["cache_dir"])
    return table


def _get_block(cfg: dict, j_max: int, c_hat: float) -> BlockTable:
    mc_samples = cfg["samples"] or (1 << 17)
    key = block_table_id(j_max, cfg["profile"], c_hat, mc_samples, cfg["seed"])
    try:
        return load_table(cfg["cache_dir"], key)
    except CacheMissError:
        if cfg["no_build"]:
            raise UsageError(f"table {key} is not cached and --no-build was given") from None
    table = build_block_table(
        j_max,
        _profile_from_name(cfg["profile"]),
        c_hat,
        mc_samples=mc_samples,
        rng_seed=cfg["seed"],
    )
    cache_table(table, cfg["cache_dir"])
    return table


def _columns_for_alphas(cfg: dict, alphas, depth: int) -> ExponentTable:
    from .harness import branch_codes

    union = set()
    for alpha in alphas:
        union |= set(branch_codes(alpha, depth))
    return _get_triangle(cfg, len(union), max_columns=1)


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_build_seq(cfg: dict) -> dict:
    kind = cfg.get("table", "triangle")
    if kind == "triangle":
        depth = int(cfg.get("depth", 12))
        table = build_exponent_table(depth, max_columns=cfg.get("max_columns"))
        cache_table(table, cfg["cache_dir"])
        results = {
            "table_key": exponent_table_id(depth, 2, cfg.get("max_columns")),
            "depth": table.n_max,
            "entries": table.num_entries,
            "row_widths": [table.width(n) for n in range(1, table.n_max + 1)],
            "deepest_entry_bits": table.entry(table.n_max, table.width(table.n_max)).bit_length(),
            "build_log": list(table.build_log),
        }
    elif kind == "block":
        j_max = int(cfg.get("j_max", 4))
        c_hat = float(cfg.get("c_hat", 2.31))
        table = _rebuild_block(cfg, j_max, c_hat)
        results = {
            "table_key": block_table_id(
                j_max, cfg["profile"], c_hat, table.mc_samples, table.rng_seed
            ),
            "j_max": table.j_max,
            "profile": table.profile_name,
            "c_hat": table.c_hat,
            "entries": [
                {"i": i, "j": j, "s": encode_big_int(s)}
                for (i, j), s in table.entries.items()
            ],
            "measures": [_measure_row(rep) for rep in table.measure_reports.values()],
            "build_log": list(table.build_log),
        }
    else:
        raise UsageError(f"table must be triangle or block, got {kind!r}")
    return _payload(cfg, "build-seq", results, passed=True)


def _rebuild_block(cfg: dict, j_max: int, c_hat: float) -> BlockTable:
    mc_samples = cfg["samples"] or (1 << 17)
    table = build_block_table(
        j_max,
        _profile_from_name(cfg["profile"]),
        c_hat,
        mc_samples=mc_samples,
        rng_seed=cfg["seed"],
    )
    cache_table(table, cfg["cache_dir"])
    return table


def _measure_row(rep: dict) -> dict:
    row = {"i": rep["i"], "j": rep["j"], "s": encode_big_int(rep["s"]),
           "sampled": rep["sampled"], "passed": rep["passed"]}
    if rep["sampled"]:
        row.update(
            measure=float(rep["measure"]),
            sigma=float(rep["sigma"]),
            target=float(rep["target"]),
            n_samples=rep["n_samples"],
        )
    else:
        row["reason"] = rep["reason"]
    return row


def _u_limit_section(n_grid) -> dict:
    rows = []
    errors = []
    for n in n_grid:
        value = monomial_seminorm(n, near_optimal_radius(n))
        err = abs(value - _LIMIT)
        rows.append({"n": n, "u": value, "error": err})
        errors.append(err)
    decreasing = all(a >= b for a, b in zip(errors, errors[1:]))
    return {
        "limit": _LIMIT,
        "rows": rows,
        "errors_decreasing": decreasing,
        "final_error": errors[-1],
        "passed": decreasing and errors[-1] < 1e-5,
    }


def _cmd_verify_seq(cfg: dict) -> dict:
    kind = cfg.get("table", "triangle")
    out_dir = Path(cfg["out"])
    artifacts = {}
    if kind == "triangle":
        depth = int(cfg.get("depth", 12))
        table = _get_triangle(cfg, depth, cfg.get("max_columns"))
        check = verify_exponent_table(table)
        u_grid = _int_list(cfg.get("u_grid", [100, 1000, 10000, 100000, 1000000]), "u_grid")
        u_section = _u_limit_section(u_grid)
        results = {
            "table_key": exponent_table_id(depth, 2, cfg.get("max_columns")),
            "entries": table.num_entries,
            "checked_pairs": check.checked_pairs,
            "violations": [repr(v) for v in check.violations],
            "table_passed": check.passed,
            "u_limit": u_section,
        }
        passed = check.passed and u_section["passed"]
        write_csv(
            out_dir / "useries.csv",
            ["n", "u", "error"],
            [[row["n"], row["u"], row["error"]] for row in u_section["rows"]],
        )
        artifacts["csv"] = ["useries.csv"]
    elif kind == "block":
        j_max = int(cfg.get("j_max", 4))
        c_hat = float(cfg.get("c_hat", 2.31))
        table = _get_block(cfg, j_max, c_hat)
        check = verify_block_table(table, rng_seed=cfg["seed"] + 1)
        results = {
            "table_key": block_table_id(
                j_max, cfg["profile"], c_hat, table.mc_samples, table.rng_seed
            ),
            "entries": len(table.entries),
            "checked_pairs": check.checked_pairs,
            "violations": [repr(v) for v in check.violations],
            "measures": [_measure_row(rep) for rep in check.measures],
            "skipped": [repr(v) for v in check.skipped],
            "table_passed": check.passed,
        }
        passed = check.passed
    else:
        raise UsageError(f"table must be triangle or block, got {kind!r}")
    return _payload(cfg, "verify-seq", results, passed=passed, artifacts=artifacts)


def _cmd_sz_test(cfg: dict) -> dict:
    s_list = _int_list(cfg.get("s_list", [25, 50, 100, 200]), "s_list")
    threshold = float(cfg.get("threshold", 0.05))
    n_samples = cfg["samples"] or DEFAULT_SAMPLES
    rows = []
    for s in s_list:
        dist = rayleigh_distance(s, n_samples, offset_seed=cfg["seed"])
        rows.append(
            {
                "s": s,
                "n_samples": n_samples,
                "distance": dist,
                "within_threshold": dist <= threshold,
            }
        )
    distances = [row["distance"] for row in rows]
    monotone = all(b <= a + 0.01 for a, b in zip(distances, distances[1:]))
    results = {
        "threshold": threshold,
        "rows": rows,
        "distances_nonincreasing": monotone,
        "all_within_threshold": all(row["within_threshold"] for row in rows),
    }
    write_csv(
        Path(cfg["out"]) / "sz_distance.csv",
        ["s", "distance", "within_threshold"],
        [[row["s"], row["distance"], row["within_threshold"]] for row in rows],
    )
    return _payload(
        cfg,
        "sz-test",
        results,
        passed=results["all_within_threshold"] and monotone,
        informational=True,
        artifacts={"csv": ["sz_distance.csv"]},
    )


def _growth_families(cfg: dict) -> list[tuple[str, object]]:
    names = cfg.get("families", ["table", "branch", "block"])
    if isinstance(names, str):
        names = [part for part in names.split(",") if part.strip()]
    fams = []
    for name in names:
        if name == "table":
            depth = int(cfg.get("depth", 12))
            i_set = _int_list(cfg.get("i_set", [1, 2, 3]), "i_set")
            fams.append((name, table_family(_get_triangle(cfg, depth), i_set, depth)))
        elif name == "branch":
            alphas = _fraction_list(
                cfg.get("alphas", [Fraction(i, 8) for i in range(8)]), "alphas"
            )
            branch_depth = int(cfg.get("branch_depth", 64))
            col = _columns_for_alphas(cfg, alphas, branch_depth)
            fams.append((name, branch_family(alphas, col, branch_depth)))
        elif name == "block":
            j_max = 1 if cfg["profile"] == "literal" else 4
            table = _get_block(cfg, j_max, float(cfg.get("c_hat", 2.31)))
            i_set = [1] if j_max == 1 else [1, 2]
            fams.append((name, block_family(table, i_set)))
        else:
            raise UsageError(f"unknown family {name!r} (table, branch, block)")
    return fams


def _cmd_makarov_test(cfg: dict) -> dict:
    radii_count = int(cfg.get("radii_count", 64))
    n_samples = cfg["samples"] or (1 << 12)
    growth_radii = boundary_radius_grid(radii_count)

    growth_rows = []
    growth_ok = True
    for fam_name, fam in _growth_families(cfg):
        for label, f in zip(fam.labels, fam.functions):
            nu = coeff_norm_upper(f)
            rep = growth_bound_check(f, nu, growth_radii, n_samples=n_samples)
            growth_ok = growth_ok and rep.passed
            growth_rows.append(
                {
                    "family": fam_name,
                    "label": label,
                    "norm_upper": nu,
                    "max_ratio": rep.max_ratio,
                    "checked_points": rep.checked_points,
                    "violations": len(rep.violations),
                }
            )

    exp_bound = float(cfg.get("exp_bound", 2.02))
    corpus = lacunary_corpus(int(cfg.get("corpus_count", 20)))
    exp_radii = exp_radius_grid(radii_count)
    exp_rows = []
    exp_ok = True
    for f in corpus:
        nu = coeff_norm_upper(f)
        worst = 0.0
        for radius in exp_radii:
            rep = makarov_exp_check(f, nu, radius, n_samples=n_samples)
            worst = max(worst, rep.lhs)
        ok = worst <= exp_bound
        exp_ok = exp_ok and ok
        exp_rows.append(
            {"terms": f.num_terms, "norm_upper": nu, "worst_integral": worst, "passed": ok}
        )

    moment_orders = _int_list(cfg.get("moment_orders", [1, 2, 3]), "moment_orders")
    moment_f = corpus[len(corpus) // 2]
    moment_radius = exp_radii[radii_count // 2]
    moment_rows = []
    moment_ok = True
    for order in moment_orders:
        rep = makarov_moment_check(
            moment_f, coeff_norm_upper(moment_f), moment_radius, order, n_samples=n_samples
        )
        moment_ok = moment_ok and rep.passed
        moment_rows.append(
            {"order": order, "lhs": rep.lhs, "rhs": rep.rhs, "passed": rep.passed}
        )

    results = {
        "growth": {"rows": growth_rows, "passed": growth_ok},
        "exponential": {"bound": exp_bound, "rows": exp_rows, "passed": exp_ok},
        "moments": {"rows": moment_rows, "passed": moment_ok},
    }
    write_csv(
        Path(cfg["out"]) / "growth_ratios.csv",
        ["family", "label", "norm_upper", "max_ratio", "violations"],
        [
            [r["family"], r["label"], r["norm_upper"], r["max_ratio"], r["violations"]]
            for r in growth_rows
        ],
    )
    return _payload(
        cfg,
        "makarov-test",
        results,
        passed=growth_ok and exp_ok and moment_ok,
        artifacts={"csv": ["growth_ratios.csv"]},
    )


def _cmd_lemma35(cfg: dict) -> dict:
    s_list = _int_list(cfg.get("s_list", [10, 20, 50, 100, 200]), "s_list")
    rows = []
    all_ok = True
    for s in s_list:
        rep = block_energy_check(s)
        in_window = 0.128 <= rep.ratio <= 1.05
        all_ok = all_ok and rep.passed and in_window
        rows.append(
            {
                "s": s,
                "parseval_sum": rep.parseval_sum,
                "ratio": rep.ratio,
                "lower": rep.lower,
                "upper": rep.upper,
                "proof_bracket_ok": rep.passed,
                "window_ok": in_window,
            }
        )
    results = {"rows": rows, "window": [0.128, 1.05]}
    write_csv(
        Path(cfg["out"]) / "lemma35.csv",
        ["s", "parseval_sum", "ratio", "lower", "upper"],
        [[r["s"], r["parseval_sum"], r["ratio"], r["lower"], r["upper"]] for r in rows],
    )
    return _payload(cfg, "lemma35", results, passed=all_ok, artifacts={"csv": ["lemma35.csv"]})


def _cmd_estimate_c(cfg: dict) -> dict:
    s_list = _int_list(cfg.get("s_list", [100, 150, 200]), "s_list")
    stability = float(cfg.get("stability", 1.2))
    n_samples = cfg["samples"] or DEFAULT_SAMPLES
    est = estimate_tail_constant(s_list, n_samples=n_samples, offset_seed=cfg["seed"])
    per_s = {str(s): info["c"] for s, info in est.per_s.items()}
    values = list(per_s.values())
    stable = max(values) / min(values) <= stability
    in_window = est.window[0] <= est.value <= est.window[1]

    tail_s = int(cfg.get("tail_s", 200))
    tail_js = _int_list(cfg.get("tail_j_list", [1, 2, 3]), "tail_j_list")
    tail_rows = []
    tails_ok = True
    for j in tail_js:
        x = math.sqrt(1.0 / (est.value * 2.0 ** (j + 6)))
        eps = 2.0 ** -(j + 6)
        rep = tail_bound_check(tail_s, [x], eps, est.value, n_samples, offset_seed=cfg["seed"])
        point = rep.points[0]
        tails_ok = tails_ok and rep.passed
        tail_rows.append(
            {
                "j": j,
                "s": tail_s,
                "x": point["x"],
                "eps": eps,
                "tail": point["tail"],
                "bound": point["bound"],
                "margin": point["margin"],
                "passed": rep.passed,
            }
        )

    results = {
        "c_hat": est.value,
        "window": list(est.window),
        "in_window": in_window,
        "per_s": per_s,
        "stable_within": stability,
        "stable": stable,
        "tail_checks": tail_rows,
        "tail_checks_passed": tails_ok,
    }
    write_csv(
        Path(cfg["out"]) / "estimate_c.csv",
        ["s", "c"],
        [[int(s), c] for s, c in per_s.items()],
    )
    return _payload(
        cfg,
        "estimate-c",
        results,
        passed=in_window and stable and tails_ok,
        artifacts={"csv": ["estimate_c.csv"]},
    )


def _parse_polynomials(raw) -> list[DensePolynomial]:
    polys = []
    try:
        for coeffs in raw:
            parsed = []
            for c in coeffs:
                if isinstance(c, (list, tuple)):
                    parsed.append(complex(float(c[0]), float(c[1])))
                else:
                    parsed.append(complex(float(c), 0.0))
            polys.append(DensePolynomial(parsed))
    except (TypeError, ValueError, IndexError):
        raise UsageError(
            "polynomials must be a list of coefficient lists; each coefficient "
            "a number or an [re, im] pair"
        ) from None
    return polys


def _separation_row(trial: int, rep) -> dict:
    return {
        "trial": trial,
        "row": rep.position[0],
        "label": rep.label,
        "lhs": rep.lhs,
        "main_term": rep.main_term,
        "error_budget": rep.error_budget,
        "ratio": None if rep.vacuous else rep.ratio,
        "vacuous": rep.vacuous,
        "decomposition_ok": rep.decomposition_ok,
    }


def _cmd_separation(cfg: dict) -> dict:
    family = cfg.get("family", "table")
    threshold = float(cfg.get("threshold", 0.55))
    n_samples = cfg["samples"] or (1 << 14)
    rows_out = []
    extra = {}

    if family == "table":
        depth = int(cfg.get("depth", 24))
        count = int(cfg.get("count", 3))
        table = _get_triangle(cfg, depth)
        fam = table_family(table, list(range(1, count + 1)), depth)
        scan_rows = cfg.get("rows", [depth])
        scan_rows = _int_list(scan_rows, "rows")
        if "polynomials" in cfg:
            all_polys = [_parse_polynomials(cfg["polynomials"])]
        else:
            trials = int(cfg.get("trials", 100))
            max_degree = int(cfg.get("max_degree", 8))
            all_polys = [
                trial_polynomials(cfg["seed"], t, count, max_degree) for t in range(trials)
            ]
        for trial, polys in enumerate(all_polys):
            for row in scan_rows:
                rep = separation_lower_bound(fam, polys, 0, row, n_samples)
                rows_out.append(_separation_row(trial, rep))
    elif family == "branch":
        alphas = _fraction_list(
            cfg.get("alphas", [Fraction(i, 8) for i in range(8)]), "alphas"
        )
        branch_depth = int(cfg.get("branch_depth", 64))
        residual, d_max = branch_residual(alphas, branch_depth)
        col = _columns_for_alphas(cfg, alphas, branch_depth)
        fam = branch_family(alphas, col, branch_depth)
        rank = fam.meta["code_rank"]
        scan_rows = sorted(rank[c] for c in residual)
        if "rows" in cfg:
            scan_rows = _int_list(cfg["rows"], "rows")
        polys = [DensePolynomial([1.0]) for _ in range(fam.size)]
        if "polynomials" in cfg:
            polys = _parse_polynomials(cfg["polynomials"])
        for row in scan_rows:
            rep = separation_lower_bound(fam, polys, 0, row, n_samples)
            rows_out.append(_separation_row(0, rep))
        extra = {
            "alphas": [str(a) for a in alphas],
            "branch_depth": branch_depth,
            "residual_size": len(residual),
            "divergence_depth": d_max,
            "residual_floor": branch_depth - d_max,
            "residual_ok": len(residual) >= branch_depth - d_max,
        }
    else:
        raise UsageError(f"family must be table or branch, got {family!r}")

    checked = [r for r in rows_out if not r["vacuous"]]
    all_decomposed = all(r["decomposition_ok"] for r in rows_out)
    min_ratio = min((r["ratio"] for r in checked), default=None)
    results = {
        "family": family,
        "threshold": threshold,
        "trials": len(rows_out),
        "vacuous_trials": len(rows_out) - len(checked),
        "all_decomposed": all_decomposed,
        "min_ratio": min_ratio,
        "rows": rows_out,
        **extra,
    }
    passed = (
        all_decomposed
        and (min_ratio is None or min_ratio >= threshold)
        and extra.get("residual_ok", True)
    )
    write_csv(
        Path(cfg["out"]) / "separation.csv",
        ["trial", "row", "lhs", "main_term", "error_budget", "ratio", "vacuous"],
        [
            [r["trial"], r["row"], r["lhs"], r["main_term"], r["error_budget"],
             r["ratio"], r["vacuous"]]
            for r in rows_out
        ],
    )
    return _payload(
        cfg, "separation", results, passed=passed, artifacts={"csv": ["separation.csv"]}
    )


def _cmd_bootstrap(cfg: dict) -> dict:
    i_set = _int_list(cfg.get("i_set", [1, 2]), "i_set")
    j_level = int(cfg.get("j_level", max(i_set) + 1))
    c_hat = float(cfg.get("c_hat", 2.31))
    max_degree = int(cfg.get("max_degree", 4))
    j_max = max(4, j_level + 1)
    table = _get_block(cfg, j_max, c_hat)
    fam = block_family(table, i_set)
    polys = trial_polynomials(cfg["seed"], 0, len(i_set), max_degree)
    scaled, certificate = scale_polynomials_to_unit(fam, polys)
    n_samples = cfg["samples"] or (1 << 15)
    rep = bootstrap_step_check(fam, scaled, j_level, c_hat, n_samples, offset_seed=cfg["seed"])
    results = {
        "J": rep.J,
        "c_hat": rep.c_hat,
        "profile": rep.profile_name,
        "i_set": i_set,
        "certificate_before_scaling": certificate,
        "certificate": rep.norm_certificate,
        "hypotheses": [dict(h) for h in rep.hypotheses],
        "links": [dict(link) for link in rep.links],
        "failed_links": [list(pair) for pair in rep.failed_links],
    }
    link_rows = []
    for link in rep.links:
        link_rows.extend(
            [
                [link["label"], "measure_A", link["measure_A"], 1.0 / 16.0, link["measure_A_ok"]],
                [link["label"], "lp_level_J", link["lp_level_J"], link["lp_level_J_bound"],
                 link["lp_level_J_ok"]],
                [link["label"], "block_moment", link["block_moment"], 2.0,
                 link["block_moment_ok"]],
                [link["label"], "block_moment_square", link["block_moment_square"], 32.0,
                 link["block_moment_square_ok"]],
                [link["label"], "u_measure_prev", link["u_measure_prev"],
                 link["u_measure_prev_bound"], link["u_measure_prev_ok"]],
            ]
        )
    write_csv(
        Path(cfg["out"]) / "bootstrap_links.csv",
        ["label", "link", "value", "bound", "ok"],
        link_rows,
    )
    return _payload(
        cfg,
        "bootstrap",
        results,
        passed=rep.passed,
        artifacts={"csv": ["bootstrap_links.csv"]},
    )


def _cmd_report(cfg: dict) -> dict:
    out_dir = Path(cfg["out"])
    rows = []
    problems = []
    for path in sorted(out_dir.glob("*-report.json")):
        try:
            payload = read_payload(path)
        except CacheError as exc:
            problems.append({"file": path.name, "error": str(exc)})
            continue
        if payload.get("kind") != "run_report" or payload.get("command") == "report":
            continue
        rows.append(
            {
                "command": payload["command"],
                "passed": payload.get("passed"),
                "informational": payload.get("informational", False),
                "file": path.name,
            }
        )
    failures = [
        r for r in rows if r["passed"] is False and not r["informational"]
    ]
    svg_files = []
    if cfg.get("plots"):
        svg_files = _render_plots(out_dir)
    results = {
        "runs": rows,
        "unreadable": problems,
        "failures": [r["command"] for r in failures],
        "all_passed": not failures,
    }
    write_csv(
        out_dir / "summary.csv",
        ["command", "passed", "informational", "file"],
        [[r["command"], r["passed"], r["informational"], r["file"]] for r in rows],
    )
    return _payload(
        cfg,
        "report",
        results,
        passed=not failures,
        artifacts={"csv": ["summary.csv"], "svg": svg_files},
    )


# ---------------------------------------------------------------------------
# plotting (deterministic SVG)


def _read_csv_columns(path: Path) -> dict[str, list[str]]:
    import csv

    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        columns = {name: [] for name in header}
        for row in reader:
            for name, cell in zip(header, row):
                columns[name].append(cell)
    return columns


def _render_plots(out_dir: Path) -> list[str]:
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "blochlab"
    import matplotlib.pyplot as plt

    made = []

    def save(fig, name: str):
        target = out_dir / name
        fig.savefig(target, format="svg", metadata={"Date": None})
        plt.close(fig)
        made.append(name)

    path = out_dir / "sz_distance.csv"
    if path.exists():
        cols = _read_csv_columns(path)
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.plot([int(v) for v in cols["s"]], [float(v) for v in cols["distance"]], "o-")
        ax.set_xscale("log")
        ax.set_xlabel("block length s")
        ax.set_ylabel("distance to limit law")
        ax.axhline(0.05, color="gray", linestyle=":")
        fig.tight_layout()
        save(fig, "sz_distance.svg")

    path = out_dir / "useries.csv"
    if path.exists():
        cols = _read_csv_columns(path)
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.loglog([int(v) for v in cols["n"]], [float(v) for v in cols["error"]], "o-")
        ax.set_xlabel("exponent n")
        ax.set_ylabel("|u(n, r_n) - e^{-1/2}|")
        fig.tight_layout()
        save(fig, "useries.svg")

    path = out_dir / "lemma35.csv"
    if path.exists():
        cols = _read_csv_columns(path)
        fig, ax = plt.subplots(figsize=(5, 3.2))
        ax.plot([int(v) for v in cols["s"]], [float(v) for v in cols["ratio"]], "o-")
        ax.set_xscale("log")
        ax.set_xlabel("block length s")
        ax.set_ylabel("energy / length")
        ax.axhline(0.128, color="gray", linestyle=":")
        ax.axhline(1.05, color="gray", linestyle=":")
        fig.tight_layout()
        save(fig, "lemma35.svg")

    path = out_dir / "separation.csv"
    if path.exists():
        cols = _read_csv_columns(path)
        ratios = [float(v) for v in cols["ratio"] if v not in ("", "None")]
        if ratios:
            fig, ax = plt.subplots(figsize=(5, 3.2))
            ax.plot(range(len(ratios)), ratios, ".")
            ax.axhline(0.55, color="gray", linestyle=":")
            ax.set_xlabel("run index")
            ax.set_ylabel("certified ratio")
            fig.tight_layout()
            save(fig, "separation.svg")

    return made


# ---------------------------------------------------------------------------
# dispatch


_HANDLERS = {
    "build-seq": _cmd_build_seq,
    "verify-seq": _cmd_verify_seq,
    "sz-test": _cmd_sz_test,
    "makarov-test": _cmd_makarov_test,
    "lemma35": _cmd_lemma35,
    "estimate-c": _cmd_estimate_c,
    "separation": _cmd_separation,
    "bootstrap": _cmd_bootstrap,
    "report": _cmd_report,
}


def _payload(
    cfg: dict,
    command: str,
    results: dict,
    passed: bool | None,
    informational: bool = False,
    artifacts: dict | None = None,
) -> dict:
    return {
        "schema": 1,
        "kind": "run_report",
        "command": command,
        "inputs": {
            "seed": cfg["seed"],
            "samples": cfg["samples"],
            "profile": cfg["profile"],
            "cache_dir": str(cfg["cache_dir"]),
        },
        "informational": informational,
        "passed": passed,
        "results": results,
        "artifacts": artifacts or {},
    }


def run(subcommand: str, config: dict) -> dict:
    """Execute one subcommand from a plain configuration mapping.

    Writes the JSON report (and any CSV/SVG artifacts) into the output
    directory and returns the report payload.
    """
    if subcommand not in _HANDLERS:
        raise UsageError(f"unknown subcommand {subcommand!r}")
    cfg = _merge_config(subcommand, dict(config), {})
    out_dir = Path(cfg["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = _HANDLERS[subcommand](cfg)
    write_payload(out_dir / f"{subcommand}-report.json", payload)
    return payload


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--cache-dir", dest="cache_dir", help="table cache directory")
    common.add_argument("--seed", type=int, help="master seed for all sampling")
    common.add_argument("--samples", type=int, help="circle sample count override")
    common.add_argument("--profile", choices=["literal", "relaxed"], help="constant profile")
    common.add_argument("--out", help="output directory for artifacts")
    common.add_argument(
        "--no-build", dest="no_build", action="store_const", const=True,
        help="fail on cache miss instead of building",
    )

    parser = argparse.ArgumentParser(
        prog="blochlab",
        description="Experiments on lacunary series in Bloch-type spaces.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("build-seq", parents=[common], help="build and cache a table")
    p.add_argument("--table", choices=["triangle", "block"])
    p.add_argument("--depth", type=int)
    p.add_argument("--max-columns", dest="max_columns", type=int)
    p.add_argument("--j-max", dest="j_max", type=int)
    p.add_argument("--c-hat", dest="c_hat", type=float)

    p = sub.add_parser("verify-seq", parents=[common], help="verify a cached table")
    p.add_argument("--table", choices=["triangle", "block"])
    p.add_argument("--depth", type=int)
    p.add_argument("--max-columns", dest="max_columns", type=int)
    p.add_argument("--j-max", dest="j_max", type=int)
    p.add_argument("--c-hat", dest="c_hat", type=float)

    p = sub.add_parser("sz-test", parents=[common], help="limit-law distance (informational)")
    p.add_argument("--s-list", dest="s_list")
    p.add_argument("--threshold", type=float)

    p = sub.add_parser("makarov-test", parents=[common], help="growth and moment checks")
    p.add_argument("--families")
    p.add_argument("--depth", type=int)
    p.add_argument("--corpus-count", dest="corpus_count", type=int)
    p.add_argument("--radii-count", dest="radii_count", type=int)

    p = sub.add_parser("lemma35", parents=[common], help="exact block energy ratios")
    p.add_argument("--s-list", dest="s_list")

    p = sub.add_parser("estimate-c", parents=[common], help="tail constant fit and check")
    p.add_argument("--s-list", dest="s_list")
    p.add_argument("--tail-s", dest="tail_s", type=int)

    p = sub.add_parser("separation", parents=[common], help="seminorm lower bounds")
    p.add_argument("--family", choices=["table", "branch"])
    p.add_argument("--depth", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--degree", dest="max_degree", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--rows")
    p.add_argument("--threshold", type=float)
    p.add_argument("--alphas")

    p = sub.add_parser("bootstrap", parents=[common], help="level-J largeness chain")
    p.add_argument("--i-set", dest="i_set")
    p.add_argument("--j-level", dest="j_level", type=int)
    p.add_argument("--c-hat", dest="c_hat", type=float)
    p.add_argument("--degree", dest="max_degree", type=int)

    p = sub.add_parser("report", parents=[common], help="aggregate run reports")
    p.add_argument("--plots", action="store_const", const=True)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    subcommand = args.subcommand
    cli_values = {
        key: value
        for key, value in vars(args).items()
        if key not in ("subcommand", "config")
    }
    try:
        file_config = _load_config_file(args.config) if args.config else {}
        cfg = _merge_config(subcommand, file_config, cli_values)
        out_dir = Path(cfg["out"])
        out_dir.mkdir(parents=True, exist_ok=True)
        payload = _HANDLERS[subcommand](cfg)
        write_payload(out_dir / f"{subcommand}-report.json", payload)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CacheError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    status = "ok" if payload["passed"] in (True, None) else "FAIL"
    if payload["informational"]:
        status = "info"
    print(f"{subcommand}: {status} -> {Path(cfg['out']) / (subcommand + '-report.json')}")
    if payload["informational"]:
        return 0
    return 0 if payload["passed"] in (True, None) else 1


if __name__ == "__main__":
    sys.exit(main())
