"""Acceptance suite: every exit criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run pytest with -s to watch them live).
The grids are seeded, so the suite is deterministic end to end.
"""

import json

import pytest

from complexchaos import Kernel, cli, hypercontractivity_check, independence_check
from complexchaos import suites
from complexchaos.chaos import coupled_decay_sequences, moment_factorization_gap


def criterion(number: int, description: str, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {number:2d} {description}: {detail}")
    assert ok, f"criterion {number} failed: {detail}"


def test_criterion_01_product_formula():
    report = suites.product_grid_report(max_total=6, max_cells=3, trials=20, seed=101)
    criterion(
        1,
        "product formula grid (a+b+c+d <= 6, n <= 3, 20 pairs)",
        report.passed and report.tolerance == 1e-9,
        f"max residual {report.residual:.3e} over {report.metadata['checks']} checks",
    )


def test_criterion_02_conjugated_product_formula():
    report = suites.product_grid_report(
        max_total=6, max_cells=3, trials=20, seed=102, conjugated=True
    )
    criterion(
        2,
        "conjugated product formula grid",
        report.passed and report.tolerance == 1e-9,
        f"max residual {report.residual:.3e}",
    )


def test_criterion_03_isometry_and_orthogonality():
    iso = suites.isometry_grid_report(max_total=6, max_cells=3, trials=20, seed=103)
    orth = suites.orthogonality_grid_report(max_total=6, max_cells=3, trials=20, seed=104)
    criterion(
        3,
        "isometry and order-orthogonality at 1e-12",
        iso.passed and orth.passed and iso.tolerance == 1e-12 and orth.tolerance == 1e-12,
        f"isometry {iso.residual:.3e}, orthogonality {orth.residual:.3e}",
    )


def test_criterion_04_reversed_conjugate_lemma():
    report = suites.conjugate_lemma_report(seed=105, trials=20, max_total=6, max_cells=3)
    criterion(
        4,
        "conjugated expansion equals expansion of reversed conjugate",
        report.passed and report.tolerance == 1e-12,
        f"max coefficient deviation {report.residual:.3e}",
    )


def test_criterion_05_covariance_formula():
    identity, nonnegative = suites.covariance_grid_reports(
        max_total=6, max_cells=3, trials=20, seed=106
    )
    variant_recorded = "proof-step" in str(identity.metadata["variant"])
    criterion(
        5,
        "covariance of squared moduli: formula vs oracle, non-negative",
        identity.passed and nonnegative.passed and variant_recorded,
        f"identity residual {identity.residual:.3e}, "
        f"most negative formula {nonnegative.metadata['most_negative_formula']:.3e}, "
        f"variant recorded: {identity.metadata['variant']!r}",
    )


def test_criterion_06_independence_criterion():
    disjoint = suites.independence_disjoint_report(seed=107)
    counter = suites.independence_counterexample_report()
    implication = suites.independence_implication_report(pairs=200, seed=108)
    counter_cov = float(counter.metadata["covariance"])
    nonvacuous = int(implication.metadata["criterion_passing"]) > 0
    criterion(
        6,
        "independence: disjoint pass + factorization, counterexample, implication",
        disjoint.passed and counter.passed and implication.passed and nonvacuous,
        f"disjoint residual {disjoint.residual:.3e}; counterexample covariance "
        f"{counter_cov:.3f} > 1e-3; {implication.metadata['criterion_passing']} passing "
        f"pairs with max covariance {implication.residual:.3e}",
    )


def test_criterion_07_hermite_layer():
    product = suites.hermite_product_report(max_total=8)
    orthogonality = suites.hermite_orthogonality_report(max_degree=6)
    criterion(
        7,
        "Hermite product identity exact to degree 8, orthogonality to degree 6",
        product.passed and product.residual == 0.0 and orthogonality.passed,
        f"product residual {product.residual}, orthogonality residual "
        f"{orthogonality.residual:.3e}, certified rho {product.metadata['certified_rho']}",
    )


def test_criterion_08_hypercontractivity():
    report = suites.hypercontractivity_grid_report(max_total=4, per_order=100, seed=109)
    single = hypercontractivity_check(Kernel.basis(1, 0, (0,), 1))
    centered = hypercontractivity_check(Kernel.basis(1, 1, (0, 0), 1))
    anchors = (
        single.metadata["l4"] == pytest.approx(2.0**0.25)
        and single.metadata["l2_bound"] == pytest.approx(3.0**0.5)
        and centered.metadata["l4"] == pytest.approx(9.0**0.25)
        and centered.metadata["l2_bound"] == pytest.approx(3.0)
    )
    criterion(
        8,
        "fourth-moment hypercontractivity, 100 kernels per order <= 4",
        report.passed and report.residual == 0.0 and anchors,
        f"max excess {report.residual}, anchors 2^(1/4) <= sqrt(3) and 9^(1/4) <= 3",
    )


def test_criterion_09_asymptotic_diagnostics():
    decay, monotone = suites.asymptotic_decay_reports(max_index=64)
    criterion(
        9,
        "1/n-coupled pair: decay band (factor 3) and monotone moment gap at 1e-10",
        decay.passed and monotone.passed and monotone.tolerance == 1e-10,
        f"band excess {decay.residual:.3e}; gap {monotone.metadata['first_gap']:.3g} -> "
        f"{monotone.metadata['last_gap']:.3g}, max rise {monotone.residual:.3e}",
    )


def test_criterion_10_monte_carlo_cross_check():
    report = suites.mc_isometry_report(kernels=50, samples=100_000, seed=110)
    criterion(
        10,
        "Monte Carlo isometry: 50 kernels at 1e5 samples within 4 stderr >= 95%",
        report.passed,
        f"fraction within {report.metadata['fraction_within']:.2%}, worst deviation "
        f"{report.metadata['worst_sigma']:.2f} stderr, generator "
        f"{report.metadata['generator']}",
    )


def test_criterion_11_selftest_determinism(tmp_path):
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    code_a = cli.main(["selftest", "--seed", "42", "--report", str(first)])
    code_b = cli.main(["selftest", "--seed", "42", "--report", str(second)])
    identical = first.read_bytes() == second.read_bytes()
    body = json.loads(first.read_text())
    criterion(
        11,
        "selftest determinism: identical report bodies for equal seeds",
        code_a == 0 and code_b == 0 and identical and body["pass"],
        f"{len(body['checks'])} checks, byte-identical: {identical}",
    )


def test_supporting_closed_forms():
    """Anchor values used by several criteria, derived independently."""
    # the counterexample covariance is Var((W-1)^2) = 8 for W ~ Exp(1)
    f = Kernel.basis(1, 1, (0, 0), 2)
    rep = independence_check(f, f)
    assert rep.metadata["covariance_oracle"] == pytest.approx(8.0)
    # the coupled construction decays exactly like 1/n (norms) and 8/n^2 (cov)
    first, second = coupled_decay_sequences(4)
    gap0 = moment_factorization_gap(first.entries[0], second.entries[0], 4)
    gap3 = moment_factorization_gap(first.entries[3], second.entries[3], 4)
    assert gap3 < gap0
