"""Batch command-line front end.

Subcommands: gen, approx, spectral, psd-approx, ridge, baseline, verify,
bench, scaling. Every run writes a fixed-schema JSON report when --report
is given. Exit codes: 0 success, 2 validation or usage error, 3 numerical
failure after retries.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from . import io as fmt
from .bench import CSV_HEADER, run_budget_experiment, success_rate
from .core import (
    HardInstanceSpec,
    NumericalError,
    PsdMatrix,
    ValidationError,
    check_diagonal_domination,
    gen_counterexample_pair,
    gen_hard_instance,
    gen_identity,
    gen_powerlaw_psd,
    gen_spectrum_psd,
    substream,
)
from .exact import (
    best_rank_k,
    eig_psd,
    exact_ridge_scores,
    exact_sqrt_ridge_scores,
    exact_statistical_dimension,
    frob_sq,
    matrix_sqrt,
)
from .lowrank import (
    algorithm1_frobenius,
    algorithm2_spectral,
    evaluate_report,
    psd_output,
    sqrt_route_baseline,
)
from .regression import RidgeProblem, estimate_statistical_dimension, sublinear_ridge
from .sampling import AlgoConfig

VERIFY_EXACT_LIMIT = 4096  # above this, skip eigendecomposition-based fields

CONST_FIELDS = {
    "c-rank": ("c_rank", float),
    "c-prime": ("c_prime", float),
    "c1": ("c1", float),
    "c2": ("c2", float),
    "c3": ("c3", float),
    "c4": ("c4", float),
    "c5": ("c5", float),
    "c-sample": ("c_sample", float),
    "c-stat": ("c_stat", float),
    "oversample-log": ("oversample_log", lambda s: s.lower() in ("1", "true", "yes")),
    "failure-delta": ("failure_delta", float),
    "max-retries": ("max_retries", int),
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="inp", help="input matrix (.psdm or .csv)")
    p.add_argument("--out", help="output path")
    p.add_argument("--report", help="JSON report path")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--seed", type=int, default=0)
    for flag in CONST_FIELDS:
        p.add_argument(f"--const-{flag}", dest=f"const_{flag.replace('-', '_')}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="psdsketch",
        description="Sampled low-rank approximation and ridge regression "
                    "for PSD matrices with entry-access accounting.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated matrix to a PSDM file")
    _add_common(p)
    p.add_argument("--kind", required=True,
                   choices=["powerlaw", "spectrum", "hard", "identity",
                            "counterexample"])

    for name, blurb in [
        ("approx", "Frobenius-error low-rank approximation"),
        ("spectral", "spectral-error low-rank approximation"),
        ("psd-approx", "PSD-constrained low-rank approximation"),
        ("baseline", "square-root-route baseline"),
        ("ridge", "sublinear ridge regression"),
        ("verify", "run the invariant suite against exact oracles"),
    ]:
        p = sub.add_parser(name, help=blurb)
        _add_common(p)

    p = sub.add_parser("bench", help="hard-instance budget experiment")
    _add_common(p)
    p.add_argument("--budget", type=int, help="strawman budget; omit to match "
                                              "the pipeline's access count")
    p.add_argument("--repeats", type=int, default=25)

    p = sub.add_parser("scaling", help="access-count sweep over n")
    _add_common(p)
    p.add_argument("--ns", required=True,
                   help="comma-separated dimensions, e.g. 512,1024,2048")
    return ap


def _config_from(args) -> AlgoConfig:
    cfg = AlgoConfig()
    updates = {}
    for flag, (field_name, conv) in CONST_FIELDS.items():
        raw = getattr(args, f"const_{flag.replace('-', '_')}", None)
        if raw is not None:
            updates[field_name] = conv(raw)
    return replace(cfg, **updates) if updates else cfg


def _load_matrix(args) -> PsdMatrix:
    if not args.inp:
        raise ValidationError("this subcommand requires --in")
    if args.inp.endswith(".csv"):
        return fmt.read_csv_matrix(args.inp)
    return fmt.read_psdm(args.inp)


def _require(args, *names) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ValidationError(
            "missing required flags: " + ", ".join(f"--{m}" for m in missing)
        )


def _cmd_gen(args) -> int:
    _require(args, "out", "n")
    kind = args.kind
    if kind == "powerlaw":
        matrix = gen_powerlaw_psd(args.n, args.seed)
    elif kind == "identity":
        matrix = gen_identity(args.n)
    elif kind == "spectrum":
        if not args.inp:
            raise ValidationError("--kind spectrum needs --in (eigenvalue CSV)")
        lam = fmt.read_csv_vector(args.inp)
        matrix = gen_spectrum_psd(args.n, lam, args.seed)
    elif kind == "hard":
        _require(args, "k", "eps")
        spec = HardInstanceSpec(args.n, args.k, args.eps, "gamma_b", args.seed)
        matrix, _ = gen_hard_instance(spec)
    else:  # counterexample
        _require(args, "k", "eps")
        matrix, _ = gen_counterexample_pair(args.n, args.k, args.eps,
                                            alpha=10.0, beta=1.0)
    fmt.write_psdm(args.out, matrix)
    if args.report:
        fmt.write_report(args.report, {
            "kind": kind, "n": args.n, "seed": args.seed, "out": args.out,
        })
    return 0


def _finish_run(args, matrix, factor, report) -> int:
    if matrix.n <= VERIFY_EXACT_LIMIT:
        evaluate_report(report, factor, matrix)
    if args.out:
        fmt.write_lrkf(args.out, factor)
    if args.report:
        fmt.write_report(args.report, report.report_fields())
    return 0


def _cmd_approx(args) -> int:
    _require(args, "k", "eps")
    matrix = _load_matrix(args)
    factor, report = algorithm1_frobenius(
        matrix.oracle(), args.k, args.eps, _config_from(args), args.seed
    )
    return _finish_run(args, matrix, factor, report)


def _cmd_spectral(args) -> int:
    _require(args, "k", "eps")
    matrix = _load_matrix(args)
    factor, report = algorithm2_spectral(
        matrix.oracle(), args.k, args.eps, _config_from(args), args.seed
    )
    return _finish_run(args, matrix, factor, report)


def _cmd_psd_approx(args) -> int:
    _require(args, "k", "eps")
    matrix = _load_matrix(args)
    factor, report = psd_output(
        matrix.oracle(), args.k, args.eps, _config_from(args), args.seed
    )
    return _finish_run(args, matrix, factor, report)


def _cmd_baseline(args) -> int:
    _require(args, "k", "eps")
    matrix = _load_matrix(args)
    factor, report = sqrt_route_baseline(
        matrix.oracle(), args.k, args.eps, args.seed, _config_from(args)
    )
    return _finish_run(args, matrix, factor, report)


def _cmd_ridge(args) -> int:
    _require(args, "lam", "eps")
    matrix = _load_matrix(args)
    config = _config_from(args)
    oracle = matrix.oracle()
    y = substream(args.seed, "ridge-y").standard_normal(matrix.n)
    hint, _ = estimate_statistical_dimension(oracle, args.lam, config,
                                             args.seed)
    problem = RidgeProblem(oracle=oracle, y=y, lam=args.lam,
                           s_lambda_hint=hint)
    x, report = sublinear_ridge(problem, args.eps, config, args.seed)
    report.internals = {}
    if matrix.n <= VERIFY_EXACT_LIMIT:
        from .exact import exact_ridge_regression, ridge_objective

        _, opt = exact_ridge_regression(matrix, y, args.lam)
        attained = ridge_objective(matrix, y, args.lam, x)
        report.frob_err_sq = attained
        report.opt_frob_tail_sq = opt
        report.ratio = attained / max(opt, 1e-30)
    if args.out:
        fmt.write_csv_vector(args.out, x)
    if args.report:
        fields = report.report_fields()
        fields["s_lambda_hint"] = hint
        fmt.write_report(args.report, fields)
    return 0


def _verify_checks(matrix: PsdMatrix, k: int, seed: int) -> dict:
    checks = {}
    a = matrix.values
    checks["symmetric"] = bool(np.array_equal(a, a.T))
    checks["diagonal_domination"] = check_diagonal_domination(matrix)
    sd = eig_psd(matrix)
    top = max(float(sd.eigenvalues[0]), 0.0)
    checks["psd_witness"] = bool(sd.eigenvalues.min() >= -1e-8 * max(top, 1.0))
    recon = sd.reconstruct()
    checks["eig_reconstructs"] = bool(
        math.sqrt(frob_sq(recon - a)) <= 1e-8 * (1.0 + math.sqrt(frob_sq(a)))
    )
    if k and 1 <= k < matrix.n:
        scores = exact_ridge_scores(a, k)
        checks["score_sum_le_2k"] = bool(scores.sum() <= 2 * k + 1e-6)
        sqrt_scores = exact_sqrt_ridge_scores(matrix, k)
        bound = 2.0 * math.sqrt(matrix.n / k) * sqrt_scores + 1e-8
        checks["score_transfer"] = bool((scores <= bound).all())
        root = matrix_sqrt(matrix)
        col_norms = np.sum(root.values**2, axis=0)
        checks["sqrt_diagonal_identity"] = bool(
            np.allclose(col_norms, np.diag(a), atol=1e-7, rtol=1e-7)
        )
    return checks


def _cmd_verify(args) -> int:
    matrix = _load_matrix(args)
    if matrix.n > VERIFY_EXACT_LIMIT:
        fields = {"n": matrix.n, "checks": {}, "skipped": "matrix too large "
                  "for exact verification", "passed": True}
    else:
        checks = _verify_checks(matrix, args.k or 0, args.seed)
        fields = {"n": matrix.n, "checks": checks,
                  "passed": all(checks.values())}
    if args.report:
        fmt.write_report(args.report, fields)
    if not fields["passed"]:
        print("verification failed:", fields["checks"], file=sys.stderr)
        return 3
    return 0


def _cmd_bench(args) -> int:
    _require(args, "n", "k", "eps")
    spec = HardInstanceSpec(args.n, args.k, args.eps, "gamma_b", args.seed)
    budgets = "matched" if args.budget is None else [args.budget]
    runs = run_budget_experiment(
        spec, ("algorithm1", "strawman"), budgets, args.repeats, args.seed,
        _config_from(args)
    )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(CSV_HEADER + "\n")
            for r in runs:
                fh.write(r.csv_row() + "\n")
    if args.report:
        fmt.write_report(args.report, {
            "n": args.n, "k": args.k, "eps": args.eps, "seed": args.seed,
            "repeats": args.repeats,
            "algorithm1_success_rate": success_rate(runs, "algorithm1"),
            "strawman_success_rate": success_rate(runs, "strawman"),
        })
    return 0


def _cmd_scaling(args) -> int:
    _require(args, "k", "eps")
    dims = [int(s) for s in args.ns.split(",") if s]
    if not dims:
        raise ValidationError("--ns must list at least one dimension")
    config = _config_from(args)
    rows = []
    for n in dims:
        matrix = gen_powerlaw_psd(n, args.seed)
        _, report = algorithm1_frobenius(matrix.oracle(), args.k, args.eps,
                                         config, args.seed)
        rows.append((n, report.accesses, report.accesses / n**2,
                     report.wall_ms))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("n,accesses,accesses_per_n2,wall_ms\n")
            for n, acc, frac, ms in rows:
                fh.write(f"{n},{acc},{fmt.fmt_float(frac)},"
                         f"{fmt.fmt_float(ms)}\n")
    if args.report:
        fmt.write_report(args.report, {
            "k": args.k, "eps": args.eps, "seed": args.seed,
            "ns": [r[0] for r in rows],
            "accesses": [r[1] for r in rows],
            "accesses_per_n2": [r[2] for r in rows],
        })
    return 0


COMMANDS = {
    "gen": _cmd_gen,
    "approx": _cmd_approx,
    "spectral": _cmd_spectral,
    "psd-approx": _cmd_psd_approx,
    "baseline": _cmd_baseline,
    "ridge": _cmd_ridge,
    "verify": _cmd_verify,
    "bench": _cmd_bench,
    "scaling": _cmd_scaling,
}


def cli_main(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    try:
        return COMMANDS[args.command](args)
    except (ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
