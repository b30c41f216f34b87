"""Batch front-end: scenario files in, JSON reports out.

Scenario format (JSON)::

    {
      "measure": {"masses": [1.0, 0.5, 2.0]},
      "kernels": [
        {"name": "f", "p": 1, "q": 1,
         "coordinates": "orthonormal",            # or "indicator"
         "entries": [{"idx": [0, 1], "re": 1.0, "im": 0.0}, ...]}
      ],
      "sequences": [{"name": "pair", "kernels": ["f1", "f2", ...]}],
      "checks": [
        {"name": "ind", "kind": "independence", "f": "f", "g": "g",
         "tolerance": 1e-12}
      ]
    }

Kernel entries are sparse (omitted multi-indices are zero); complex numbers
are {re, im} pairs; multi-indices are 0-based integer arrays of length p+q.
Indicator-coordinate kernels are rescaled by the product of sqrt cell masses
at ingestion and the report records both norms.

Check kinds: product, product-conjugated, isometry, conjugate-lemma,
covariance, independence, asymptotic, hypercontractivity, hermite-product,
mc-estimate.  The product checks accept either a kernel pair or a
{"grid": {...}} descriptor running the seeded certification grid.

Exit status: 0 all checks pass, 1 at least one failed, 2 input error (with a
machine-readable error record on stdout).  Report bodies contain no
timestamps, so equal seeds give byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from . import __version__, hermite, montecarlo, oracle, suites
from .chaos import (
    KernelSequence,
    VerificationReport,
    asymptotic_diagnostics,
    covariance_squares,
    expand,
    hypercontractivity_check,
    independence_check,
    integral_conjugate,
    isometry_check,
    product_check,
    product_conjugated_check,
)
from .kernels import (
    MAX_CELLS,
    MAX_TOTAL_ORDER,
    DiscreteMeasure,
    Kernel,
    indicator_to_orthonormal,
    norm,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

CHECK_KINDS = (
    "product",
    "product-conjugated",
    "isometry",
    "conjugate-lemma",
    "covariance",
    "independence",
    "asymptotic",
    "hypercontractivity",
    "hermite-product",
    "mc-estimate",
)


class ScenarioError(Exception):
    """Input problem; ``code`` is 'parse-error' or 'validation-error'."""

    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class Scenario:
    measure: DiscreteMeasure
    kernels: dict[str, Kernel]
    kernel_norms: dict[str, dict[str, float]]
    sequences: dict[str, KernelSequence]
    checks: tuple[dict, ...]


def _fail(code: str, message: str) -> ScenarioError:
    return ScenarioError(code, message)


def _parse_complex(obj: Any, where: str) -> complex:
    if not isinstance(obj, Mapping):
        raise _fail("validation-error", f"{where}: complex values are {{re, im}} maps")
    try:
        return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
    except (TypeError, ValueError) as exc:
        raise _fail("validation-error", f"{where}: {exc}") from None


def _load_kernel(spec: Mapping, measure: DiscreteMeasure, caps: tuple[int, int]):
    name = spec.get("name")
    if not isinstance(name, str) or not name:
        raise _fail("validation-error", "every kernel needs a non-empty name")
    try:
        p, q = int(spec["p"]), int(spec["q"])
    except (KeyError, TypeError, ValueError):
        raise _fail("validation-error", f"kernel {name}: p and q must be integers") from None
    max_order, _ = caps
    if p < 0 or q < 0 or p + q > max_order:
        raise _fail("validation-error", f"kernel {name}: order ({p},{q}) outside caps")
    coords = spec.get("coordinates", "orthonormal")
    if coords not in ("orthonormal", "indicator"):
        raise _fail("validation-error", f"kernel {name}: unknown coordinates {coords!r}")
    n = measure.n
    arr = np.zeros((n,) * (p + q), dtype=np.complex128)
    entries = spec.get("entries", [])
    if not isinstance(entries, list):
        raise _fail("validation-error", f"kernel {name}: entries must be a list")
    for k, entry in enumerate(entries):
        where = f"kernel {name} entry {k}"
        if not isinstance(entry, Mapping):
            raise _fail("validation-error", f"{where}: entries are objects")
        idx = entry.get("idx", [])
        if not isinstance(idx, list) or len(idx) != p + q:
            raise _fail("validation-error", f"{where}: idx must have length {p + q}")
        if not all(isinstance(i, int) and 0 <= i < n for i in idx):
            raise _fail("validation-error", f"{where}: idx components outside 0..{n - 1}")
        arr[tuple(idx)] = _parse_complex(entry, where)
    raw = Kernel(p, q, n, arr)
    if coords == "indicator":
        kernel = indicator_to_orthonormal(measure, p, q, arr)
        norms = {"indicator_norm": norm(raw), "orthonormal_norm": norm(kernel)}
    else:
        kernel = raw
        norms = {"orthonormal_norm": norm(kernel)}
    return name, kernel, norms


def load_scenario(path: str, caps: tuple[int, int] = (MAX_TOTAL_ORDER, MAX_CELLS)) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise _fail("parse-error", f"cannot read scenario: {exc}")
    except json.JSONDecodeError as exc:
        raise _fail("parse-error", f"scenario is not valid JSON: {exc}")
    if not isinstance(data, Mapping):
        raise _fail("validation-error", "scenario root must be an object")
    measure_spec = data.get("measure")
    if not isinstance(measure_spec, Mapping) or "masses" not in measure_spec:
        raise _fail("validation-error", "scenario needs measure.masses")
    _, max_cells = caps
    masses = measure_spec["masses"]
    if not isinstance(masses, list) or len(masses) > max_cells:
        raise _fail("validation-error", f"measure.masses must be a list of <= {max_cells} masses")
    try:
        measure = DiscreteMeasure(masses)
    except ValueError as exc:
        raise _fail("validation-error", str(exc)) from None
    kernels: dict[str, Kernel] = {}
    kernel_norms: dict[str, dict[str, float]] = {}
    for spec in data.get("kernels", []):
        try:
            name, kernel, norms = _load_kernel(spec, measure, caps)
        except ValueError as exc:
            raise _fail("validation-error", str(exc)) from None
        if name in kernels:
            raise _fail("validation-error", f"duplicate kernel name {name!r}")
        kernels[name] = kernel
        kernel_norms[name] = norms
    sequences: dict[str, KernelSequence] = {}
    for spec in data.get("sequences", []):
        name = spec.get("name")
        if not isinstance(name, str) or not name:
            raise _fail("validation-error", "every sequence needs a non-empty name")
        if name in sequences or name in kernels:
            raise _fail("validation-error", f"duplicate name {name!r}")
        members = spec.get("kernels", [])
        missing = [m for m in members if m not in kernels]
        if missing:
            raise _fail("validation-error", f"sequence {name}: unknown kernels {missing}")
        try:
            sequences[name] = KernelSequence(name, tuple(kernels[m] for m in members))
        except ValueError as exc:
            raise _fail("validation-error", f"sequence {name}: {exc}") from None
    checks = data.get("checks", [])
    if not isinstance(checks, list) or not checks:
        raise _fail("validation-error", "scenario needs a non-empty checks list")
    seen = set()
    for check in checks:
        name = check.get("name")
        if not isinstance(name, str) or not name or name in seen:
            raise _fail("validation-error", "checks need unique non-empty names")
        seen.add(name)
        kind = check.get("kind")
        if kind not in CHECK_KINDS:
            raise _fail("validation-error", f"check {name}: unknown kind {kind!r}")
    return Scenario(measure, kernels, kernel_norms, dict(sequences), tuple(checks))


def _kernel_ref(scenario: Scenario, check: Mapping, key: str) -> Kernel:
    name = check.get(key)
    if name not in scenario.kernels:
        raise _fail(
            "validation-error", f"check {check.get('name')}: unknown kernel {name!r} for {key!r}"
        )
    return scenario.kernels[name]


def _run_check(scenario: Scenario, check: Mapping, defaults: Mapping) -> dict:
    kind = check["kind"]
    tol_value = check.get("tolerance")
    tol = float(tol_value) if tol_value else None
    seed = int(check.get("seed", defaults["seed"]))
    record: dict[str, Any] = {"name": check["name"], "kind": kind}

    if kind in ("product", "product-conjugated"):
        conjugated = kind == "product-conjugated"
        if "grid" in check:
            grid = check["grid"]
            report = suites.product_grid_report(
                max_total=int(grid.get("max_total", 6)),
                max_cells=int(grid.get("max_cells", 3)),
                trials=int(grid.get("trials", 20)),
                seed=seed,
                conjugated=conjugated,
                tolerance=tol or 1e-9,
            )
        else:
            f = _kernel_ref(scenario, check, "f")
            g = _kernel_ref(scenario, check, "g")
            checker = product_conjugated_check if conjugated else product_check
            report = checker(f, g, tol or 1e-9)
    elif kind == "isometry":
        report = isometry_check(_kernel_ref(scenario, check, "f"), tol or 1e-12)
    elif kind == "conjugate-lemma":
        report = integral_conjugate(_kernel_ref(scenario, check, "f"), tol or 1e-12)
    elif kind == "covariance":
        comparison = covariance_squares(
            _kernel_ref(scenario, check, "f"), _kernel_ref(scenario, check, "g"), tol or 1e-9
        )
        report = comparison.report
    elif kind == "independence":
        report = independence_check(
            _kernel_ref(scenario, check, "f"), _kernel_ref(scenario, check, "g"), tol or 1e-12
        )
    elif kind == "asymptotic":
        names = check.get("sequences", [])
        unknown = [s for s in names if s not in scenario.sequences]
        if len(names) < 2 or unknown:
            raise _fail(
                "validation-error",
                f"check {check['name']}: needs >= 2 known sequences, got {names}",
            )
        rows = asymptotic_diagnostics([scenario.sequences[s] for s in names])
        last = rows[-1]
        residual = max(
            max(p.max_contraction_norm for p in last.pairs),
            max(abs(p.covariance) for p in last.pairs),
        )
        report = VerificationReport(
            name=check["name"],
            residual=residual,
            tolerance=tol or 1e-9,
            metadata={"sequences": ",".join(names), "length": len(rows)},
        )
        record["table"] = [
            {
                "index": row.index,
                "second_moments": list(row.second_moments),
                "pairs": [
                    {
                        "pair": list(p.pair),
                        "max_contraction_norm": p.max_contraction_norm,
                        "covariance": p.covariance,
                    }
                    for p in row.pairs
                ],
            }
            for row in rows
        ]
    elif kind == "hypercontractivity":
        report = hypercontractivity_check(_kernel_ref(scenario, check, "f"), tol or 1e-12)
    elif kind == "hermite-product":
        report = suites.hermite_product_report(max_total=int(check.get("max_total", 8)))
    elif kind == "mc-estimate":
        f = _kernel_ref(scenario, check, "f")
        samples = int(check.get("samples", defaults["samples"]))
        max_sigma = float(check.get("max_sigma", 4.0))
        poly = expand(f)
        sq = poly * poly.conjugate()
        plan = montecarlo.SamplePlan(seed=seed, samples=samples, n=f.n)
        est = montecarlo.estimate(sq, plan)
        target = oracle.expectation(sq).real
        sigma = abs(est.value - target) / est.stderr if est.stderr > 0 else 0.0
        report = VerificationReport(
            name=check["name"],
            residual=sigma,
            tolerance=max_sigma,
            metadata={
                "estimate": est.value.real,
                "stderr": est.stderr,
                "oracle": target,
                "samples": samples,
                "seed": seed,
                "generator": montecarlo.GENERATOR_NAME,
            },
        )
    else:  # unreachable after validation
        raise _fail("validation-error", f"unhandled check kind {kind!r}")

    body = report.to_dict()
    body["name"] = check["name"]
    record.update(body)
    return record


def _report_body(records: list[dict], config: Mapping) -> dict:
    records = sorted(records, key=lambda r: r["name"])
    return {
        "tool": {"name": "complexchaos", "version": __version__},
        "config": dict(config),
        "checks": records,
        "pass": all(r["pass"] for r in records),
    }


def _emit(body: Mapping, report_path: str | None) -> None:
    text = json.dumps(body, indent=2, sort_keys=True)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        for record in body.get("checks", []):
            status = "PASS" if record["pass"] else "FAIL"
            print(f"{status} {record['name']}: residual={record['residual']:.3e} tol={record['tolerance']:.1e}")
        print(f"report written to {report_path}")
    else:
        print(text)


def _emit_error(exc: ScenarioError, report_path: str | None) -> None:
    body = {"error": {"code": exc.code, "message": str(exc)}}
    text = json.dumps(body, indent=2, sort_keys=True)
    if report_path:
        try:
            with open(report_path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError:
            pass
    print(text, file=sys.stderr)


def cmd_run(args: argparse.Namespace) -> int:
    caps = (args.max_order, args.max_cells)
    try:
        scenario = load_scenario(args.scenario, caps)
        only = set(args.only.split(",")) if args.only else None
        checks = [c for c in scenario.checks if only is None or c["name"] in only]
        if only and len(checks) != len(only):
            missing = only - {c["name"] for c in checks}
            raise _fail("validation-error", f"unknown check names requested: {sorted(missing)}")
        defaults = {"seed": args.seed, "samples": args.samples}
        records = []
        for check in checks:
            if args.tolerance is not None and "tolerance" not in check:
                check = dict(check, tolerance=args.tolerance)
            records.append(_run_check(scenario, check, defaults))
    except ScenarioError as exc:
        _emit_error(exc, args.report)
        return EXIT_INPUT
    except ValueError as exc:
        _emit_error(_fail("validation-error", str(exc)), args.report)
        return EXIT_INPUT
    config = {
        "scenario": args.scenario,
        "seed": args.seed,
        "samples": args.samples,
        "max_total_order": args.max_order,
        "max_cells": args.max_cells,
        "certified_rho": 1,
        "generator": montecarlo.GENERATOR_NAME,
        "kernel_norms": scenario.kernel_norms,
    }
    body = _report_body(records, config)
    _emit(body, args.report)
    return EXIT_PASS if body["pass"] else EXIT_FAIL


def cmd_selftest(args: argparse.Namespace) -> int:
    reports = suites.selftest_reports(
        seed=args.seed, samples=args.samples, perturbation=args.inject_perturbation
    )
    records = [dict(r.to_dict(), kind="selftest") for r in reports]
    config = {
        "seed": args.seed,
        "samples": args.samples,
        "max_total_order": MAX_TOTAL_ORDER,
        "max_cells": MAX_CELLS,
        "certified_rho": 1,
        "generator": montecarlo.GENERATOR_NAME,
        "injected_perturbation": args.inject_perturbation,
    }
    body = _report_body(records, config)
    _emit(body, args.report)
    return EXIT_PASS if body["pass"] else EXIT_FAIL


def cmd_hermite(args: argparse.Namespace) -> int:
    if args.hermite_command == "table":
        rho = args.rho
        for total in range(args.max + 1):
            for m in range(total + 1):
                n = total - m
                poly = hermite.build(m, n, rho)
                print(f"J[{m},{n}](z, rho={rho}) = {hermite.format_polynomial(poly)}")
        return EXIT_PASS
    if args.hermite_command == "product-check":
        report = suites.hermite_product_report(max_total=args.max)
        status = "PASS" if report.passed else "FAIL"
        print(
            f"{status} hermite-product: residual={report.residual:.3e} "
            f"tol={report.tolerance:.1e} rho={report.metadata['certified_rho']}"
        )
        return EXIT_PASS if report.passed else EXIT_FAIL
    raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="complexchaos",
        description="Certification engine for complex Wiener chaos identities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the checks of a scenario file")
    run.add_argument("scenario", help="path to a scenario JSON file")
    run.add_argument("--report", default=None, help="write the JSON report here")
    run.add_argument("--tolerance", type=float, default=None, help="tolerance override")
    run.add_argument("--seed", type=int, default=42)
    run.add_argument("--samples", type=int, default=100_000)
    run.add_argument("--max-order", type=int, default=MAX_TOTAL_ORDER)
    run.add_argument("--max-cells", type=int, default=MAX_CELLS)
    run.add_argument("--only", default=None, help="comma-separated check names")
    run.set_defaults(func=cmd_run)

    selftest = sub.add_parser("selftest", help="run the built-in certification suite")
    selftest.add_argument("--report", default=None)
    selftest.add_argument("--seed", type=int, default=42)
    selftest.add_argument("--samples", type=int, default=20_000)
    selftest.add_argument(
        "--inject-perturbation",
        type=float,
        default=0.0,
        help="negative-control hook: perturb one certified coefficient",
    )
    selftest.set_defaults(func=cmd_selftest)

    herm = sub.add_parser("hermite", help="inspect the complex Hermite layer")
    herm_sub = herm.add_subparsers(dest="hermite_command", required=True)
    table = herm_sub.add_parser("table", help="print the polynomial table")
    table.add_argument("--max", type=int, default=8, help="max total degree m+n")
    table.add_argument("--rho", type=int, default=1)
    check = herm_sub.add_parser("product-check", help="certify the product expansion")
    check.add_argument("--max", type=int, default=8, help="max a+b+c+d")
    herm.set_defaults(func=cmd_hermite)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
