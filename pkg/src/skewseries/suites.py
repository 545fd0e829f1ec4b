"""Named property suites exposed by the command line runner."""

from __future__ import annotations

from .k0 import k0_rank_check, serre_transfer_check
from .report import CheckReport
from .rings import RingContext, ring_axiom_check, sigma_derivation_check
from .series import graded_iso_check, ideal_closure_check, series_law_check
from .skewpoly import mkl_oracle_check, poly_law_check

DEFAULT_PRECISION = 4

SUITE_NAMES = (
    "ring-axioms",
    "sigma-derivation",
    "mkl-oracle",
    "poly-assoc",
    "series-assoc",
    "ideal-closure",
    "graded-iso",
    "k0-rank",
    "serre-transfer",
)


def _ideal_closure_all(ctx, precision, samples, seed) -> CheckReport:
    # one sub-run per filtration index, first failure wins
    checked = 0
    gen_checks = 0
    for k in range(precision + 1):
        sub = ideal_closure_check(ctx, precision, k, samples, seed + k)
        checked += sub.checked
        gen_checks += sub.details.get("generator_checks", 0)
        if not sub.passed:
            sub.checked = checked
            return sub
    return CheckReport(
        name="ideal-closure",
        passed=True,
        checked=checked,
        details={"max_filtration_index": precision, "generator_checks": gen_checks},
    )


def run_property_suite(name: str, ctx: RingContext, precision: int | None,
                       samples: int, seed: int) -> CheckReport:
    """Run one named invariant suite and return its report.

    ``precision`` only matters for the series-level suites; it defaults to
    DEFAULT_PRECISION when omitted."""
    n = precision if precision is not None else DEFAULT_PRECISION
    if name == "ring-axioms":
        return ring_axiom_check(ctx, samples, seed)
    if name == "sigma-derivation":
        return sigma_derivation_check(ctx, samples, seed)
    if name == "mkl-oracle":
        return mkl_oracle_check(ctx)
    if name == "poly-assoc":
        return poly_law_check(ctx, samples, seed)
    if name == "series-assoc":
        return series_law_check(ctx, n, samples, seed)
    if name == "ideal-closure":
        return _ideal_closure_all(ctx, n, samples, seed)
    if name == "graded-iso":
        return graded_iso_check(ctx, n, samples, seed)
    if name == "k0-rank":
        return k0_rank_check(ctx, samples, seed)
    if name == "serre-transfer":
        return serre_transfer_check(ctx, n, size_limit=3, samples=samples, seed=seed)
    raise ValueError(f"unknown suite {name!r}")
