"""Command-line front end: analysis and experiments with JSON reports.

Reports are deterministic for a fixed seed and configuration: keys are
sorted, no timestamps are embedded, and all randomness is seeded, so
rerunning a command reproduces the output byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .exact import GaussianRational, MultiPoly
from .operators import (
    DiffOp,
    OperatorFormatError,
    OperatorPair,
    catalog,
    load_op,
    multiindex_count,
    op_to_dict,
    save_op,
)
from .analysis import (
    HypothesesNotMet,
    NotInImage,
    SampleBudgetExceeded,
    SMaxExceeded,
    compute_W,
    construct_L,
    find_witness,
    is_elliptic,
    kernel_inclusion,
    quotient_spec,
    rank_profile,
)
from .numerics import (
    InclusionFails,
    IllConditionedQuotient,
    NyquistViolation,
    PlaneWaveFamily,
    UnboundedSuspected,
    bb_ratio_experiment,
    counterexample_blowup,
    korn_constant_p2,
    sobolev_ratio_experiment,
)

SCHEMA = "symcheck-report/1"

EXIT_OK = 0
EXIT_HYPOTHESES = 2
EXIT_BUDGET = 3
EXIT_INPUT = 4

MULTIINDEX_NOTE = (
    "multi-index component counts use the enumeration binom(N+k-1, N-1)"
)


def _scalar_str(c) -> str:
    if isinstance(c, GaussianRational):
        return str(c)
    return str(Fraction(c))


def _vector_json(vec):
    return [_scalar_str(c) for c in vec]


def _matrix_json(m) -> list:
    return [[_scalar_str(c) for c in row] for row in m.entries]


def _poly_json(p: MultiPoly) -> dict:
    return {
        ",".join(str(e) for e in exp): _scalar_str(c)
        for exp, c in sorted(p.terms.items())
    }


def _witness_json(w) -> dict:
    return {
        "xi": _vector_json(w.xi),
        "v": _vector_json(w.v),
        "residual": _vector_json(w.residual),
        "real": w.is_real,
    }


def make_report(command: str, config: dict, operators: dict, results, status: str) -> dict:
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "config": config,
        "operators": {
            name: {"name": op.name, "content_hash": op.content_hash()}
            for name, op in operators.items()
        },
        "results": results,
        "status": status,
    }


def emit(report: dict, out_path, summary_lines) -> None:
    for line in summary_lines:
        print(line)
    text = json.dumps(report, sort_keys=True, indent=2, separators=(",", ": "))
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load(path) -> DiffOp:
    try:
        return load_op(path)
    except FileNotFoundError:
        raise OperatorFormatError(f"operator file not found: {path}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    op = _load(args.op)
    config = {"op": str(args.op), "seed": args.seed}
    profile = rank_profile(op, seed=args.seed)
    ell_R = is_elliptic(op, "R", seed=args.seed)
    ell_C = is_elliptic(op, "C", seed=args.seed)
    cancel = compute_W(op, profile=profile, seed=args.seed)
    results = {
        "N": op.N,
        "d": op.d,
        "l": op.l,
        "k": op.k,
        "elliptic_R": ell_R.status if not ell_C.value else "CERTIFIED_YES",
        "elliptic_R_value": ell_R.value,
        "elliptic_C": ell_C.value,
        "constant_rank_C": profile.constant_rank_C,
        "constant_rank_R": profile.constant_rank_R,
        "generic_rank": profile.generic_rank,
        "r": profile.kernel_dim,
        "cancelling": cancel.cancelling,
        "dim_W": len(cancel.W_basis),
        "W_basis": [_vector_json(w) for w in cancel.W_basis],
        "notes": [MULTIINDEX_NOTE],
    }
    report = make_report("analyze", config, {"op": op}, results, "OK")
    emit(report, args.out, [
        f"operator {op.name}: N={op.N} d={op.d} l={op.l} k={op.k}",
        f"  elliptic over R: {ell_R.value} ({results['elliptic_R']})",
        f"  elliptic over C: {ell_C.value}",
        f"  constant rank over C: {profile.constant_rank_C} (r = {profile.kernel_dim})",
        f"  constant rank over R: {profile.constant_rank_R}",
        f"  cancelling: {cancel.cancelling} (dim W = {len(cancel.W_basis)})",
    ])
    return EXIT_OK


def cmd_compare(args) -> int:
    calA = _load(args.calA)
    A = _load(args.A)
    pair = OperatorPair(calA=calA, A=A, mode=args.mode)
    config = {
        "calA": str(args.calA),
        "A": str(args.A),
        "mode": args.mode,
        "s_max": args.s_max,
        "seed": args.seed,
    }
    ops = {"calA": calA, "A": A}
    try:
        verdict = kernel_inclusion(pair, seed=args.seed)
    except HypothesesNotMet as exc:
        results = {
            "constant_rank_C": False,
            "generic_rank": exc.profile.generic_rank,
            "detail": "the inner operator is not of constant rank over C; "
            "identically vanishing inclusion minors carry no information here",
        }
        report = make_report("compare", config, ops, results, "HYPOTHESES_NOT_MET")
        emit(report, args.out, ["HYPOTHESES_NOT_MET: inner operator lacks complex constant rank"])
        return EXIT_HYPOTHESES
    results = {
        "inclusion_holds": verdict.holds,
        "rank": verdict.rank,
        "minors_checked": verdict.minors_checked,
    }
    status = "OK"
    exit_code = EXIT_OK
    if verdict.holds:
        try:
            cert = construct_L(pair, args.s_max, seed=args.seed)
        except SMaxExceeded:
            report = make_report("compare", config, ops, results, "S_MAX_EXCEEDED")
            emit(report, args.out, [f"inclusion holds but no factorization up to s = {args.s_max}"])
            return EXIT_BUDGET
        qspec = quotient_spec(pair, cert.s)
        results["factorization"] = {
            "s": cert.s,
            "L": op_to_dict(cert.L),
            "verified": cert.verified,
        }
        results["quotient"] = {
            "degree_bound": qspec.degree_bound,
            "dimension": qspec.dimension,
        }
        summary = [
            "kernel inclusion holds",
            f"  factorization certificate: s = {cert.s}, order(L) = {cert.L.k}",
            f"  quotient degree bound {qspec.degree_bound}, dimension {qspec.dimension}",
        ]
    else:
        try:
            w = find_witness(pair, verdict=verdict, seed=args.seed)
        except SampleBudgetExceeded:
            report = make_report("compare", config, ops, results, "SAMPLE_BUDGET_EXCEEDED")
            emit(report, args.out, ["inclusion fails but witness search exhausted its budget"])
            return EXIT_BUDGET
        results["witness"] = _witness_json(w)
        results["counterexample"] = {
            "family": "u_n(x) = Re[v exp(2 pi i n xi.x)]",
            "suggested_modes": [1, 2, 4, 8],
            "suggested_grid": 256,
        }
        summary = [
            "kernel inclusion fails",
            f"  witness xi = {results['witness']['xi']}",
            f"  witness v  = {results['witness']['v']}",
        ]
    report = make_report("compare", config, ops, results, status)
    emit(report, args.out, summary)
    return exit_code


def _experiment_pair(args) -> OperatorPair:
    calA = _load(args.calA)
    A = _load(args.A)
    return OperatorPair(calA=calA, A=A, mode=args.mode)


def cmd_experiment(args) -> int:
    kind = args.kind
    config = {
        "kind": kind,
        "seed": args.seed,
        "grid": args.grid,
        "trials": args.trials,
        "mode": args.mode,
        "s_max": args.s_max,
    }
    ops = {}
    try:
        if kind == "korn2":
            pair = _experiment_pair(args)
            ops = {"calA": pair.calA, "A": pair.A}
            config.update({"calA": str(args.calA), "A": str(args.A)})
            value = korn_constant_p2(
                pair, samples=args.trials, seed=args.seed
            )
            results = {
                "constant_p2": value,
                "notes": ["certified-by-Parseval reduction at p = 2 only"],
            }
            report = make_report("experiment", config, ops, results, "OK")
            emit(report, args.out, [f"korn2 constant estimate: {value:.6f}"])
            return EXIT_OK
        if kind == "blowup":
            pair = _experiment_pair(args)
            ops = {"calA": pair.calA, "A": pair.A}
            config.update({"calA": str(args.calA), "A": str(args.A)})
            verdict = kernel_inclusion(pair, seed=args.seed)
            if verdict.holds:
                results = {"inclusion_holds": True}
                report = make_report("experiment", config, ops, results, "OK")
                emit(report, args.out, ["inclusion holds; no counterexample family exists"])
                return EXIT_OK
            w = find_witness(pair, verdict=verdict, seed=args.seed)
            exp = counterexample_blowup(
                pair, w, modes=(1, 2, 4, 8), n_grid=args.grid, seed=args.seed
            )
            results = {"witness": _witness_json(w), "experiment": exp.to_dict()}
            report = make_report("experiment", config, ops, results, "OK")
            slope = exp.summary["loglog_slope"]
            emit(report, args.out, [
                "counterexample blow-up:",
                f"  rhs status: {exp.summary['rhs_status']} (symbolically zero)",
                f"  log-log slope: {slope} (expected {exp.summary['expected_slope']})",
                f"  Gram rank: {exp.summary['gram_rank']}",
            ])
            return EXIT_OK
        if kind == "bb":
            config.update({"k": args.k, "N": args.N})
            exp = bb_ratio_experiment(
                args.k, args.N, trials=args.trials, n_grid=args.grid,
                seed=args.seed,
            )
            results = {"experiment": exp.to_dict()}
            report = make_report("experiment", config, {}, results, "OK")
            emit(report, args.out, [
                f"bb ratios: max {exp.summary['max_ratio']:.6f}, "
                f"constraint residual {exp.summary['max_constraint_residual']:.2e}",
            ])
            return EXIT_OK
        if kind == "sobolev":
            pair = _experiment_pair(args)
            ops = {"calA": pair.calA, "A": pair.A}
            config.update({"calA": str(args.calA), "A": str(args.A), "p": args.p})
            exp = sobolev_ratio_experiment(
                pair, args.p, trials=args.trials, n_grid=args.grid,
                seed=args.seed, s_max=args.s_max,
            )
            results = {"experiment": exp.to_dict()}
            status = exp.status
            report = make_report("experiment", config, ops, results, status)
            emit(report, args.out, [
                f"sobolev ratios: max {exp.summary['max_ratio']:.6f} "
                f"(refined {exp.summary['max_ratio_refined']:.6f}), status {status}",
            ])
            return EXIT_OK if status in ("OK", "BOUNDED") else EXIT_HYPOTHESES
        raise OperatorFormatError(f"unknown experiment kind: {kind}")
    except HypothesesNotMet:
        report = make_report("experiment", config, ops, {}, "HYPOTHESES_NOT_MET")
        emit(report, args.out, ["HYPOTHESES_NOT_MET"])
        return EXIT_HYPOTHESES
    except (InclusionFails, UnboundedSuspected) as exc:
        status = (
            "UNBOUNDED_SUSPECTED"
            if isinstance(exc, UnboundedSuspected)
            else "INCLUSION_FAILS"
        )
        report = make_report("experiment", config, ops, {"detail": str(exc)}, status)
        emit(report, args.out, [f"{status}: {exc}"])
        return EXIT_HYPOTHESES
    except (SMaxExceeded, SampleBudgetExceeded) as exc:
        status = (
            "S_MAX_EXCEEDED" if isinstance(exc, SMaxExceeded)
            else "SAMPLE_BUDGET_EXCEEDED"
        )
        report = make_report("experiment", config, ops, {}, status)
        emit(report, args.out, [status])
        return EXIT_BUDGET
    except (NyquistViolation, IllConditionedQuotient) as exc:
        status = (
            "NYQUIST_VIOLATION" if isinstance(exc, NyquistViolation)
            else "ILL_CONDITIONED_QUOTIENT"
        )
        report = make_report("experiment", config, ops, {"detail": str(exc)}, status)
        emit(report, args.out, [f"{status}: {exc}"])
        return EXIT_INPUT


def cmd_catalog(args) -> int:
    try:
        op = catalog(args.name, args.N, k=args.k)
    except (KeyError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        save_op(op, args.out)
        print(f"wrote {op.name} (N={op.N}, d={op.d}, l={op.l}, k={op.k}) to {args.out}")
    else:
        print(json.dumps(op_to_dict(op), sort_keys=True, indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symcheck",
        description="Symbolic and numerical checks for constant-coefficient "
        "differential operators.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, pair=False):
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        p.add_argument("--out", default=None, help="write the JSON report here")
        if pair:
            p.add_argument("-a", "--calA", required=True,
                           help="inner operator file (right-hand side of the inequality)")
            p.add_argument("-A", required=True, dest="A",
                           help="outer operator file (left-hand side)")
            p.add_argument("--mode", choices=("korn", "sobolev"), default="korn")
            p.add_argument("--s-max", type=int, default=6, dest="s_max")

    p = sub.add_parser("analyze", help="classify a single operator")
    p.add_argument("--op", required=True, help="operator file")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="kernel inclusion and factorization for a pair")
    common(p, pair=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("experiment", help="run a numerical experiment")
    p.add_argument("kind", choices=("korn2", "blowup", "bb", "sobolev"))
    common(p)
    p.add_argument("-a", "--calA", default=None,
                   help="inner operator file (korn2/blowup/sobolev)")
    p.add_argument("-A", default=None, dest="A", help="outer operator file")
    p.add_argument("--mode", choices=("korn", "sobolev"), default="korn")
    p.add_argument("--s-max", type=int, default=6, dest="s_max")
    p.add_argument("--grid", type=int, default=256, help="grid resolution per axis")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--p", type=float, default=1.0, help="exponent for the sobolev kind")
    p.add_argument("--k", type=int, default=1, help="divergence order for the bb kind")
    p.add_argument("--N", type=int, default=2, help="dimension for the bb kind")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("catalog", help="write a built-in operator to a file")
    p.add_argument("name", help="gradient, divergence, curl, sym_gradient, "
                   "laplacian, bilaplacian, cauchy_riemann, d2_laplacian, div_k")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "experiment" and args.kind != "bb" and not (args.calA and args.A):
        parser.error(f"experiment {args.kind} requires -a and -A operator files")
    try:
        return args.func(args)
    except OperatorFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except json.JSONDecodeError as exc:
        print(f"input error: malformed JSON ({exc})", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
