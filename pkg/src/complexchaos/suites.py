"""Seeded certification batteries.

Each function runs one identity over a deterministic grid of random kernels
and folds the worst case into a single ``VerificationReport``.  These are the
building blocks of the command line selftest and of the acceptance tests; all
randomness is drawn from generators seeded per battery, so reports are
reproducible byte for byte.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

from . import hermite, montecarlo, oracle
from .chaos import (
    COVARIANCE_VARIANT,
    ChaosPolynomial,
    IDENTITY_TOL,
    STRUCTURAL_TOL,
    VerificationReport,
    coupled_decay_sequences,
    asymptotic_diagnostics,
    covariance_squares,
    expand,
    hermite_to_chaos,
    hypercontractivity_check,
    independence_check,
    integral_conjugate,
    isometry_check,
    moment_factorization_gap,
    product_check,
    product_conjugated_check,
)
from .kernels import (
    ContractionSpec,
    Kernel,
    contract,
    ito_symmetrize,
    norm,
    ordinary_symmetrize,
    random_kernel,
    reversed_conjugate,
)

__all__ = [
    "asymptotic_decay_reports",
    "conjugate_lemma_report",
    "covariance_grid_reports",
    "expand_symmetrization_report",
    "hermite_normalization_report",
    "hermite_orthogonality_report",
    "hermite_product_report",
    "hypercontractivity_grid_report",
    "independence_counterexample_report",
    "independence_disjoint_report",
    "independence_implication_report",
    "isometry_grid_report",
    "kernel_invariants_report",
    "mc_isometry_report",
    "oracle_quadrature_report",
    "orthogonality_grid_report",
    "product_grid_report",
    "selftest_reports",
]

DEFAULT_SEED = 42


def _order_tuples(max_total: int) -> Iterator[tuple[int, int, int, int]]:
    for a in range(max_total + 1):
        for b in range(max_total + 1 - a):
            for c in range(max_total + 1 - a - b):
                for d in range(max_total + 1 - a - b - c):
                    yield a, b, c, d


def _orders(max_total: int) -> Iterator[tuple[int, int]]:
    for p in range(max_total + 1):
        for q in range(max_total + 1 - p):
            yield p, q


# -- hermite layer -------------------------------------------------------------


def hermite_normalization_report(max_total: int = 6) -> VerificationReport:
    """Certify the variance normalization at which the product expansion of
    the complex Hermite family is exact (it is rho = 1, mechanically)."""
    rho = hermite.resolve_rho(max_total)
    return VerificationReport(
        name="hermite-normalization",
        residual=abs(rho - 1),
        tolerance=STRUCTURAL_TOL,
        metadata={"certified_rho": rho, "max_total_degree": max_total},
    )


def hermite_product_report(
    max_total: int = 8, perturbation: float = 0.0
) -> VerificationReport:
    """Exact polynomial certification of the Hermite product expansion.

    ``perturbation`` is a negative-control hook: it is added to one expansion
    coefficient so the comparison must fail by that amount.
    """
    residual = hermite.certify_product_formula(max_total, rho=1)
    if perturbation:
        lhs = hermite_to_chaos(hermite.build(1, 1, 1), 0, 1)
        lhs = lhs * lhs
        rhs = ChaosPolynomial.zero(1)
        for (m, n), w in hermite.hermite_product(1, 1, 1, 1).items():
            rhs = rhs + hermite_to_chaos(hermite.build(m, n, 1), 0, 1).scaled(w)
        rhs = rhs + hermite_to_chaos(hermite.build(1, 1, 1), 0, 1).scaled(perturbation)
        residual = max(residual, lhs.max_diff(rhs))
    return VerificationReport(
        name="hermite-product",
        residual=residual,
        tolerance=IDENTITY_TOL,
        metadata={
            "certified_rho": 1,
            "max_total_degree": max_total,
            "injected_perturbation": perturbation,
        },
    )


def hermite_orthogonality_report(
    max_degree: int = 6, tolerance: float = IDENTITY_TOL
) -> VerificationReport:
    """Wick-oracle check that distinct family members are orthogonal and the
    squared norm of degree (m, n) is m! n! (at the certified rho = 1)."""
    worst = 0.0
    members = [
        (m, n, hermite_to_chaos(hermite.build(m, n, 1), 0, 1))
        for m, n in _orders(max_degree)
    ]
    for m, n, left in members:
        for mp, nq, right in members:
            value = oracle.pair_expectation(left, right.conjugate())
            target = (
                math.factorial(m) * math.factorial(n)
                if (m, n) == (mp, nq)
                else 0.0
            )
            worst = max(worst, abs(value - target) / max(1.0, abs(target)))
    return VerificationReport(
        name="hermite-orthogonality",
        residual=worst,
        tolerance=tolerance,
        metadata={"certified_rho": 1, "max_degree": max_degree},
    )


# -- oracle --------------------------------------------------------------------


def oracle_quadrature_report(
    max_power: int = 4, tolerance: float = 1e-8
) -> VerificationReport:
    """Cross-check the moment rule against 2-D Gauss-Hermite quadrature."""
    worst = 0.0
    for a in range(max_power + 1):
        for b in range(max_power + 1):
            exact = oracle.monomial_expectation(oracle.MomentQuery((a,), (b,)))
            approx = oracle.quadrature_monomial_expectation(a, b)
            worst = max(worst, abs(approx - exact) / max(1.0, abs(exact)))
    return VerificationReport(
        name="oracle-quadrature",
        residual=worst,
        tolerance=tolerance,
        metadata={"max_power": max_power},
    )


# -- kernel algebra --------------------------------------------------------------


def kernel_invariants_report(
    seed: int = DEFAULT_SEED,
    trials: int = 30,
    max_total: int = 6,
    max_cells: int = 4,
) -> VerificationReport:
    """Random-kernel battery for the tensor algebra: idempotent
    symmetrizations, the symmetrization norm inequality, conjugation
    involution, contraction bilinearity and the contraction norm bound."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t in range(trials):
        p = int(rng.integers(0, max_total + 1))
        q = int(rng.integers(0, max_total + 1 - p))
        n = int(rng.integers(1, max_cells + 1))
        f = random_kernel(p, q, n, rng)
        sym = ito_symmetrize(f)
        osym = ordinary_symmetrize(f)
        worst = max(worst, norm(ito_symmetrize(sym) - sym))
        worst = max(worst, norm(ordinary_symmetrize(osym) - osym))
        worst = max(worst, norm(ito_symmetrize(osym) - osym))
        worst = max(worst, max(0.0, norm(sym) - norm(f)))
        flipped = reversed_conjugate(f)
        worst = max(worst, norm(reversed_conjugate(flipped) - f))
        worst = max(worst, abs(norm(flipped) - norm(f)))
        # bilinearity and the norm bound, against an independent partner
        c = int(rng.integers(0, max_total + 1 - p - q))
        d = int(rng.integers(0, max_total + 1 - p - q - c))
        g = random_kernel(c, d, n, rng)
        f2 = random_kernel(p, q, n, rng)
        alpha = complex(rng.standard_normal(), rng.standard_normal())
        beta = complex(rng.standard_normal(), rng.standard_normal())
        spec = ContractionSpec(
            int(rng.integers(0, min(p, d) + 1)), int(rng.integers(0, min(q, c) + 1))
        )
        lhs = contract(alpha * f + beta * f2, g, spec)
        rhs = alpha * contract(f, g, spec) + beta * contract(f2, g, spec)
        worst = max(worst, norm(lhs - rhs))
        worst = max(worst, max(0.0, norm(contract(f, g, spec)) - norm(f) * norm(g)))
    return VerificationReport(
        name="kernel-invariants",
        residual=worst,
        tolerance=STRUCTURAL_TOL,
        metadata={"seed": seed, "trials": trials, "max_total_order": max_total},
    )


def expand_symmetrization_report(
    seed: int = DEFAULT_SEED, trials: int = 20, max_total: int = 6, max_cells: int = 3
) -> VerificationReport:
    """Expansion is blind to block symmetrization, coefficient by coefficient,
    for random kernels of every order in caps."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p, q in _orders(max_total):
        for t in range(trials):
            n = 1 + t % max_cells
            f = random_kernel(p, q, n, rng)
            worst = max(worst, expand(f).max_diff(expand(ito_symmetrize(f))))
    return VerificationReport(
        name="expand-symmetrization",
        residual=worst,
        tolerance=STRUCTURAL_TOL,
        metadata={"seed": seed, "max_total_order": max_total, "trials": trials},
    )


def conjugate_lemma_report(
    seed: int = DEFAULT_SEED, trials: int = 20, max_total: int = 6, max_cells: int = 3
) -> VerificationReport:
    """Conjugate of the expansion vs expansion of the reversed conjugate, for
    random kernels of every order in caps."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p, q in _orders(max_total):
        for t in range(trials):
            n = 1 + t % max_cells
            worst = max(worst, integral_conjugate(random_kernel(p, q, n, rng)).residual)
    return VerificationReport(
        name="conjugate-lemma",
        residual=worst,
        tolerance=STRUCTURAL_TOL,
        metadata={"seed": seed, "max_total_order": max_total, "trials": trials},
    )


# -- product, isometry, orthogonality grids ---------------------------------------


def product_grid_report(
    max_total: int = 6,
    max_cells: int = 3,
    trials: int = 20,
    seed: int = DEFAULT_SEED,
    conjugated: bool = False,
    tolerance: float = IDENTITY_TOL,
) -> VerificationReport:
    """Certify the (plain or conjugated) product formula on every order tuple
    with a+b+c+d <= max_total, ``trials`` seeded random pairs each, cycling
    the cell count through 1..max_cells."""
    rng = np.random.default_rng(seed)
    check = product_conjugated_check if conjugated else product_check
    worst = 0.0
    count = 0
    for a, b, c, d in _order_tuples(max_total):
        for t in range(trials):
            n = 1 + t % max_cells
            f = random_kernel(a, b, n, rng)
            g = random_kernel(c, d, n, rng)
            worst = max(worst, check(f, g, tolerance).residual)
            count += 1
    return VerificationReport(
        name="product-conjugated-grid" if conjugated else "product-grid",
        residual=worst,
        tolerance=tolerance,
        metadata={
            "seed": seed,
            "max_total_order": max_total,
            "max_cells": max_cells,
            "trials_per_tuple": trials,
            "checks": count,
            "certified_rho": 1,
        },
    )


def isometry_grid_report(
    max_total: int = 6,
    max_cells: int = 3,
    trials: int = 20,
    seed: int = DEFAULT_SEED,
    tolerance: float = STRUCTURAL_TOL,
) -> VerificationReport:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p, q in _orders(max_total):
        for t in range(trials):
            n = 1 + t % max_cells
            worst = max(worst, isometry_check(random_kernel(p, q, n, rng)).residual)
    return VerificationReport(
        name="isometry-grid",
        residual=worst,
        tolerance=tolerance,
        metadata={"seed": seed, "max_total_order": max_total, "trials": trials},
    )


def orthogonality_grid_report(
    max_total: int = 6,
    max_cells: int = 3,
    trials: int = 20,
    seed: int = DEFAULT_SEED,
    tolerance: float = STRUCTURAL_TOL,
) -> VerificationReport:
    """Expansions of different orders are orthogonal under the oracle."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for a, b, c, d in _order_tuples(max_total):
        if (a, b) == (c, d):
            continue
        for t in range(trials):
            n = 1 + t % max_cells
            left = expand(random_kernel(a, b, n, rng))
            right = expand(random_kernel(c, d, n, rng))
            worst = max(worst, abs(oracle.pair_expectation(left, right.conjugate())))
    return VerificationReport(
        name="orthogonality-grid",
        residual=worst,
        tolerance=tolerance,
        metadata={"seed": seed, "max_total_order": max_total, "trials": trials},
    )


def covariance_grid_reports(
    max_total: int = 6,
    max_cells: int = 3,
    trials: int = 20,
    seed: int = DEFAULT_SEED,
    tolerance: float = IDENTITY_TOL,
) -> tuple[VerificationReport, VerificationReport]:
    """Covariance-of-squares formula vs oracle over the order grid, plus the
    non-negativity of the formula value."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    most_negative = 0.0
    count = 0
    for a, b, c, d in _order_tuples(max_total):
        for t in range(trials):
            n = 1 + t % max_cells
            f = random_kernel(a, b, n, rng)
            g = random_kernel(c, d, n, rng)
            comparison = covariance_squares(f, g, tolerance)
            worst = max(worst, comparison.report.residual)
            most_negative = min(most_negative, comparison.formula)
            count += 1
    identity = VerificationReport(
        name="covariance-grid",
        residual=worst,
        tolerance=tolerance,
        metadata={
            "seed": seed,
            "max_total_order": max_total,
            "trials_per_tuple": trials,
            "checks": count,
            "variant": COVARIANCE_VARIANT,
        },
    )
    nonnegative = VerificationReport(
        name="covariance-nonnegative",
        residual=max(0.0, -most_negative),
        tolerance=STRUCTURAL_TOL,
        metadata={"seed": seed, "most_negative_formula": most_negative},
    )
    return identity, nonnegative


# -- independence batteries --------------------------------------------------------


def _masked_random_kernel(
    p: int, q: int, n: int, cells: tuple[int, ...], rng: np.random.Generator
) -> Kernel:
    """Random kernel supported only on multi-indices drawn from ``cells``."""
    base = random_kernel(p, q, n, rng, normalize=False)
    allowed = np.zeros(n, dtype=bool)
    allowed[list(cells)] = True
    if p + q == 0:
        mask = np.ones(())
    else:
        grids = np.meshgrid(*[allowed] * (p + q), indexing="ij")
        mask = np.ones((n,) * (p + q), dtype=bool)
        for g in grids:
            mask &= g
    arr = np.where(mask, base.coeffs, 0.0)
    scale = np.linalg.norm(arr)
    if scale > 0:
        arr = arr / scale
    return Kernel(p, q, n, arr)


def independence_disjoint_report(
    seed: int = DEFAULT_SEED,
    max_degree: int = 6,
    tolerance: float = IDENTITY_TOL,
) -> VerificationReport:
    """Disjointly supported pairs pass the contraction criterion and their
    mixed moments factorize up to the given total degree."""
    rng = np.random.default_rng(seed)
    cases = [
        (Kernel.basis(1, 1, (0, 0), 2), Kernel.basis(1, 1, (1, 1), 2)),
        (
            _masked_random_kernel(2, 0, 3, (0,), rng),
            _masked_random_kernel(1, 1, 3, (1, 2), rng),
        ),
        (
            _masked_random_kernel(1, 0, 3, (0, 1), rng),
            _masked_random_kernel(0, 2, 3, (2,), rng),
        ),
    ]
    worst_criterion = 0.0
    worst_gap = 0.0
    for f, g in cases:
        worst_criterion = max(worst_criterion, independence_check(f, g).residual)
        worst_gap = max(worst_gap, moment_factorization_gap(f, g, max_degree))
    return VerificationReport(
        name="independence-disjoint",
        residual=max(worst_criterion, worst_gap),
        tolerance=tolerance,
        metadata={
            "seed": seed,
            "cases": len(cases),
            "max_moment_degree": max_degree,
            "criterion_residual": worst_criterion,
            "factorization_gap": worst_gap,
        },
    )


def independence_counterexample_report() -> VerificationReport:
    """Negative control: a self-paired kernel must fail the criterion with a
    unit contraction norm and a covariance far from zero."""
    f = Kernel.basis(1, 1, (0, 0), 2)
    report = independence_check(f, f)
    covariance = float(report.metadata["covariance_oracle"])
    ok = report.residual > 0.5 and covariance > 1e-3
    return VerificationReport(
        name="independence-counterexample",
        residual=0.0 if ok else 1.0,
        tolerance=0.5,
        metadata={
            "criterion_residual": report.residual,
            "covariance": covariance,
        },
    )


def independence_implication_report(
    pairs: int = 200,
    seed: int = DEFAULT_SEED,
    criterion_tol: float = STRUCTURAL_TOL,
    tolerance: float = IDENTITY_TOL,
) -> VerificationReport:
    """Whenever the contraction criterion passes, the covariance of squared
    moduli must vanish.  Half of the pairs are built with disjoint supports so
    the passing branch is exercised."""
    rng = np.random.default_rng(seed)
    worst_cov = 0.0
    passing = 0
    for t in range(pairs):
        a = int(rng.integers(0, 3))
        b = int(rng.integers(0 if a else 1, 3 - a))
        c = int(rng.integers(0, 3))
        d = int(rng.integers(0 if c else 1, 3 - c))
        n = 3
        if t % 2 == 0:
            f = _masked_random_kernel(a, b, n, (0,), rng)
            g = _masked_random_kernel(c, d, n, (1, 2), rng)
        else:
            f = random_kernel(a, b, n, rng)
            g = random_kernel(c, d, n, rng)
        report = independence_check(f, g, criterion_tol)
        if report.residual <= criterion_tol:
            passing += 1
            worst_cov = max(worst_cov, abs(float(report.metadata["covariance_oracle"])))
    return VerificationReport(
        name="independence-implication",
        residual=worst_cov,
        tolerance=tolerance,
        metadata={
            "seed": seed,
            "pairs": pairs,
            "criterion_passing": passing,
            "criterion_tolerance": criterion_tol,
        },
    )


# -- hypercontractivity --------------------------------------------------------------


def hypercontractivity_grid_report(
    max_total: int = 4,
    per_order: int = 100,
    max_cells: int = 3,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p, q in _orders(max_total):
        for t in range(per_order):
            n = 1 + t % max_cells
            worst = max(worst, hypercontractivity_check(random_kernel(p, q, n, rng)).residual)
    # closed-form anchors
    single = hypercontractivity_check(Kernel.basis(1, 0, (0,), 1))
    centered = hypercontractivity_check(Kernel.basis(1, 1, (0, 0), 1))
    worst = max(worst, single.residual, centered.residual)
    return VerificationReport(
        name="hypercontractivity-grid",
        residual=worst,
        tolerance=STRUCTURAL_TOL,
        metadata={
            "seed": seed,
            "max_total_order": max_total,
            "per_order": per_order,
            "anchor_l4_single": single.metadata["l4"],
            "anchor_bound_single": single.metadata["l2_bound"],
            "anchor_l4_centered": centered.metadata["l4"],
            "anchor_bound_centered": centered.metadata["l2_bound"],
        },
    )


# -- asymptotic decay -----------------------------------------------------------------


def asymptotic_decay_reports(
    max_index: int = 64,
    band_factor: float = 3.0,
    gap_tolerance: float = 1e-10,
    max_gap_degree: int = 4,
) -> tuple[VerificationReport, VerificationReport]:
    """Diagnostics for the reference 1/index-coupled pair: contraction norms
    and covariances must decay at least like C/index up to ``band_factor``
    (the covariance of this construction falls off quadratically, so the
    band is one-sided), and the mixed moment factorization gap must decay
    monotonically."""
    first, second = coupled_decay_sequences(max_index)
    rows = asymptotic_diagnostics([first, second])
    c_norm = max(p.max_contraction_norm for p in rows[0].pairs)
    c_cov = max(abs(p.covariance) for p in rows[0].pairs)
    worst_band = 0.0
    for row in rows:
        scale = row.index + 1.0
        r_norm = max(p.max_contraction_norm for p in row.pairs) * scale / c_norm
        r_cov = max(abs(p.covariance) for p in row.pairs) * scale / c_cov
        for ratio in (r_norm, r_cov):
            worst_band = max(worst_band, ratio - band_factor)
    decay = VerificationReport(
        name="asymptotic-decay",
        residual=max(0.0, worst_band),
        tolerance=1e-9,
        metadata={
            "indices": max_index,
            "band_factor": band_factor,
            "initial_contraction": c_norm,
            "initial_covariance": c_cov,
        },
    )
    gaps = [
        moment_factorization_gap(first.entries[t], second.entries[t], max_gap_degree)
        for t in range(max_index)
    ]
    worst_rise = 0.0
    for prev, cur in zip(gaps, gaps[1:]):
        worst_rise = max(worst_rise, cur - prev)
    monotone = VerificationReport(
        name="asymptotic-moment-gap",
        residual=max(0.0, worst_rise),
        tolerance=gap_tolerance,
        metadata={
            "indices": max_index,
            "max_degree": max_gap_degree,
            "first_gap": gaps[0],
            "last_gap": gaps[-1],
        },
    )
    return decay, monotone


# -- Monte Carlo ---------------------------------------------------------------------


def mc_isometry_report(
    kernels: int = 50,
    samples: int = 100_000,
    seed: int = DEFAULT_SEED,
    max_sigma: float = 4.0,
    min_fraction: float = 0.95,
    max_total: int = 3,
    max_cells: int = 3,
) -> VerificationReport:
    """Sampled second moments vs oracle values: the estimate must land within
    ``max_sigma`` standard errors in at least ``min_fraction`` of the cases."""
    rng = np.random.default_rng(seed)
    within = 0
    worst_sigma = 0.0
    for t in range(kernels):
        p = int(rng.integers(0, max_total + 1))
        q = int(rng.integers(0 if p else 1, max_total + 1 - p))
        n = 1 + t % max_cells
        f = random_kernel(p, q, n, rng)
        poly = expand(f)
        sq = poly * poly.conjugate()
        plan = montecarlo.SamplePlan(seed=seed + 1000 + t, samples=samples, n=n)
        est = montecarlo.estimate(sq, plan)
        target = oracle.expectation(sq).real
        sigma = abs(est.value - target) / est.stderr if est.stderr > 0 else 0.0
        worst_sigma = max(worst_sigma, sigma)
        if sigma <= max_sigma:
            within += 1
    fraction = within / kernels
    return VerificationReport(
        name="mc-isometry",
        residual=max(0.0, min_fraction - fraction),
        tolerance=STRUCTURAL_TOL,
        metadata={
            "seed": seed,
            "kernels": kernels,
            "samples": samples,
            "fraction_within": fraction,
            "max_sigma": max_sigma,
            "worst_sigma": worst_sigma,
            "generator": montecarlo.GENERATOR_NAME,
        },
    )


# -- the full selftest ----------------------------------------------------------------


def selftest_reports(
    seed: int = DEFAULT_SEED,
    samples: int = 20_000,
    perturbation: float = 0.0,
) -> list[VerificationReport]:
    """Condensed version of every battery; deterministic for a fixed seed.

    ``perturbation`` feeds the negative-control hook of the Hermite product
    battery, which must turn the selftest red when nonzero.
    """
    identity, nonnegative = covariance_grid_reports(
        max_total=4, max_cells=3, trials=6, seed=seed
    )
    decay, monotone = asymptotic_decay_reports(max_index=16)
    reports = [
        hermite_normalization_report(max_total=6),
        hermite_product_report(max_total=8, perturbation=perturbation),
        hermite_orthogonality_report(max_degree=6),
        oracle_quadrature_report(),
        kernel_invariants_report(seed=seed, trials=30),
        expand_symmetrization_report(seed=seed, trials=15),
        conjugate_lemma_report(seed=seed, trials=15),
        product_grid_report(max_total=4, max_cells=3, trials=6, seed=seed),
        product_grid_report(max_total=4, max_cells=3, trials=6, seed=seed, conjugated=True),
        identity,
        nonnegative,
        isometry_grid_report(max_total=4, max_cells=3, trials=6, seed=seed),
        orthogonality_grid_report(max_total=4, max_cells=3, trials=4, seed=seed),
        independence_disjoint_report(seed=seed),
        independence_counterexample_report(),
        independence_implication_report(pairs=60, seed=seed),
        hypercontractivity_grid_report(max_total=4, per_order=12, seed=seed),
        decay,
        monotone,
        mc_isometry_report(kernels=8, samples=samples, seed=seed),
    ]
    return reports
