"""Command-line harness: validate and query networks, run the samplers,
print requirement tables, and sweep parameter grids into CSV.

Exit codes are a stable contract: 0 success, 1 usage error, 2 validation
error (unparseable or invalid network, positivity refusals), 3 runtime or
capacity error (I/O failures, enumeration caps, impossible evidence).

All result output shares one flat CSV schema (header below); checkpoint
rows carry the cumulative transition count in the ``checkpoint`` column,
summary rows leave it empty. The ``BNRAS_ENUM_CAP`` environment variable
overrides the enumeration cap used for oracle computations.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from . import exact as exact_mod
from .bounds import ErrorTolerances, report_bounds
from .errors import (
    CapacityError,
    DeterministicConflictError,
    ImpossibleEvidenceError,
    MixingOverflowError,
    NetworkFormatError,
    NetworkValidationError,
    PositivityError,
)
from .estimate import PosteriorEstimate, error_metrics, bnras_estimate, straight_estimate
from .exact import enumerate_posteriors
from .model_io import builtin_networks, format_evidence, parse_document, parse_evidence
from .network import BeliefNetwork, Evidence, validate_network
from .rng import RandomStream

CSV_HEADER = (
    "run_id,seed,algorithm,network,evidence,trials,transitions_per_trial,"
    "total_transitions,checkpoint,avg_error,max_error,worst_node,"
    "cpu_seconds,wall_seconds"
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that exits with the package's usage code instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _enum_cap() -> int:
    raw = os.environ.get("BNRAS_ENUM_CAP")
    if raw is None:
        return exact_mod.DEFAULT_ENUM_CAP
    try:
        cap = int(raw)
        if cap < 1:
            raise ValueError
    except ValueError:
        raise UsageError(f"BNRAS_ENUM_CAP must be a positive integer, got {raw!r}")
    return cap


def _load_network(ref: str) -> BeliefNetwork:
    """Resolve a builtin name or parse a file path."""
    catalog = builtin_networks()
    if ref in catalog:
        return catalog[ref]
    with open(ref, "r", encoding="utf-8") as handle:
        text = handle.read()
    doc = parse_document(text)
    if doc.network is None:
        for diag in doc.diagnostics:
            print(f"{ref}: {diag}", file=sys.stderr)
        raise NetworkFormatError(f"{ref}: could not parse network")
    report = validate_network(doc.network)
    if not report.ok:
        for issue in report.issues:
            print(f"{ref}: {issue}", file=sys.stderr)
        raise NetworkValidationError(f"{ref}: network failed validation")
    return doc.network


def _parse_seeds(text: str) -> list[int]:
    text = text.strip()
    if not text:
        raise UsageError("empty --seeds")
    if ":" in text:
        lo, _, hi = text.partition(":")
        try:
            lo_i, hi_i = int(lo), int(hi)
        except ValueError:
            raise UsageError(f"bad seed range {text!r}")
        if hi_i <= lo_i:
            raise UsageError(f"empty seed range {text!r}")
        return list(range(lo_i, hi_i))
    try:
        seeds = [int(part) for part in text.split(",")]
    except ValueError:
        raise UsageError(f"bad seed list {text!r}")
    if len(set(seeds)) != len(seeds):
        raise UsageError("seeds must be distinct")
    return seeds


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",")]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated integers, got {text!r}")
    if not values:
        raise UsageError(f"{flag} must not be empty")
    return values


@dataclass
class _Run:
    run_id: str
    seed: int
    algorithm: str
    net: BeliefNetwork
    evidence_str: str
    estimate: PosteriorEstimate


def _rows_for_run(run: _Run, oracle) -> list[str]:
    """Checkpoint rows (if any) followed by the summary row."""
    rows = []
    est = run.estimate
    trials = est.trials
    tpt = "" if est.transitions_per_trial is None else est.transitions_per_trial
    common = (
        f"{run.run_id},{run.seed},{run.algorithm},{run.net.name},"
        f"{run.evidence_str},{trials},{tpt},{est.total_transitions}"
    )
    for ck in est.checkpoints:
        snap = PosteriorEstimate(
            nodes=est.nodes,
            outcome_labels=est.outcome_labels,
            probs=ck.probs,
            tallies=est.tallies,
            trials=ck.scored,
            transitions_per_trial=est.transitions_per_trial,
            total_transitions=ck.transitions,
            cpu_seconds=0.0,
            wall_seconds=0.0,
        )
        err = error_metrics(snap, oracle)
        rows.append(
            f"{common},{ck.transitions},{err.avg_error:.9g},{err.max_error:.9g},"
            f"{err.worst_node},,"
        )
    err = error_metrics(est, oracle)
    rows.append(
        f"{common},,{err.avg_error:.9g},{err.max_error:.9g},{err.worst_node},"
        f"{est.cpu_seconds:.6f},{est.wall_seconds:.6f}"
    )
    return rows


def _write_csv(lines: list[str], out: str) -> None:
    text = "\n".join([CSV_HEADER] + lines) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def cmd_validate(args) -> int:
    try:
        with open(args.path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    doc = parse_document(text)
    if doc.network is None:
        for diag in doc.diagnostics:
            print(f"{args.path}: {diag}", file=sys.stderr)
        return EXIT_VALIDATION
    report = validate_network(doc.network)
    for issue in report.issues:
        print(f"{args.path}: {issue}", file=sys.stderr)
    if not report.ok:
        return EXIT_VALIDATION
    positivity = "strictly positive" if report.positive else "contains 0/1 entries"
    print(
        f"{doc.network.name}: ok ({len(doc.network.nodes)} nodes, {positivity})"
    )
    return EXIT_OK


def cmd_exact(args) -> int:
    net = _load_network(args.network)
    ev = parse_evidence(args.evidence, net)
    table = enumerate_posteriors(net, ev, cap=_enum_cap())
    suffix = f"|{format_evidence(ev, net)}" if len(ev) else ""
    for name, labels, row in zip(table.nodes, table.outcome_labels, table.probs):
        for label, p in zip(labels, row):
            print(f"P({name}={label}{suffix})={p:.6f}")
    print(f"P(evidence)={table.evidence_probability:.6g}")
    return EXIT_OK


def _run_one(net, ev, ev_str, algorithm, trials, transitions, total, seed, stride):
    rng = RandomStream(seed)
    if algorithm == "bnras":
        est = bnras_estimate(net, ev, trials, transitions, rng, checkpoint_stride=stride)
        run_id = f"bnras-{net.name}-N{trials}-t{transitions}-s{seed}"
    else:
        est = straight_estimate(net, ev, total, rng, checkpoint_stride=stride)
        run_id = f"straight-{net.name}-T{total}-s{seed}"
    return _Run(run_id, seed, algorithm, net, ev_str, est)


def cmd_run(args) -> int:
    net = _load_network(args.network)
    ev = parse_evidence(args.evidence, net)
    ev_str = format_evidence(ev, net)
    if args.algorithm == "bnras":
        if args.trials is None or args.transitions is None:
            raise UsageError("bnras needs --trials and --transitions")
        if args.trials < 1:
            raise UsageError("--trials must be >= 1")
        if args.transitions < 0:
            raise UsageError("--transitions must be >= 0")
    else:
        if args.total is None:
            raise UsageError("straight needs --total")
        if args.total < 1:
            raise UsageError("--total must be >= 1")
    oracle = enumerate_posteriors(net, ev, cap=_enum_cap())
    run = _run_one(
        net, ev, ev_str, args.algorithm, args.trials, args.transitions,
        args.total, args.seed, args.stride,
    )
    _write_csv(_rows_for_run(run, oracle), "-")
    return EXIT_OK


def cmd_bounds(args) -> int:
    net = _load_network(args.network)
    ev = parse_evidence(args.evidence, net)
    tol = ErrorTolerances(alpha=args.alpha, delta=args.delta, gamma=args.gamma)
    report = report_bounds(
        net, ev, tol, mode=args.mode,
        enum_cap=_enum_cap(), matrix_cap=exact_mod.DEFAULT_MATRIX_CAP,
    )
    ev_str = format_evidence(ev, net) or "(none)"
    inputs = "exact inputs" if report.exact_inputs else "lower-bound inputs"
    print(f"network {net.name}  evidence {ev_str}  mode {report.mode} ({inputs})")
    print(f"alpha={tol.alpha:g} delta={tol.delta:g} gamma={tol.gamma:g}")
    print(f"pi_min={report.pi_min:.9g} p0={report.p0:.9g}")
    print(f"trials required            N = {report.trials}")
    print(f"mixing transitions     t_mix = {report.t_mix}")
    print(f"transitions per trial      t = {report.t_per_trial}")
    print("network,evidence,mode,alpha,delta,gamma,pi_min,p0,trials,t_mix,t_per_trial")
    print(
        f"{net.name},{format_evidence(ev, net)},{report.mode},{tol.alpha:g},"
        f"{tol.delta:g},{tol.gamma:g},{report.pi_min:.9g},{report.p0:.9g},"
        f"{report.trials},{report.t_mix},{report.t_per_trial}"
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    net = _load_network(args.network)
    ev = parse_evidence(args.evidence, net)
    ev_str = format_evidence(ev, net)
    seeds = _parse_seeds(args.seeds)
    oracle = enumerate_posteriors(net, ev, cap=_enum_cap())
    lines: list[str] = []
    if args.algorithm == "bnras":
        if args.trials is None or args.transitions is None:
            raise UsageError("bnras sweeps need --trials and --transitions grids")
        trials_grid = _parse_int_list(args.trials, "--trials")
        trans_grid = _parse_int_list(args.transitions, "--transitions")
        if any(n < 1 for n in trials_grid) or any(t < 0 for t in trans_grid):
            raise UsageError("grid values out of range")
        for trials in trials_grid:
            for transitions in trans_grid:
                for seed in seeds:
                    run = _run_one(net, ev, ev_str, "bnras", trials, transitions,
                                   None, seed, args.stride)
                    lines.extend(_rows_for_run(run, oracle))
    else:
        if args.total is None:
            raise UsageError("straight sweeps need a --total grid")
        total_grid = _parse_int_list(args.total, "--total")
        if any(t < 1 for t in total_grid):
            raise UsageError("--total values must be >= 1")
        for total in total_grid:
            for seed in seeds:
                run = _run_one(net, ev, ev_str, "straight", None, None,
                               total, seed, args.stride)
                lines.extend(_rows_for_run(run, oracle))
    _write_csv(lines, args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    net = _load_network(args.network)
    ev = parse_evidence(args.evidence, net)
    ev_str = format_evidence(ev, net)
    seeds = _parse_seeds(args.seeds)
    if args.total is None or args.total < 1:
        raise UsageError("--total budget must be >= 1")
    transitions = args.transitions if args.transitions is not None else 100
    if transitions < 1:
        raise UsageError("--transitions must be >= 1")
    trials = args.total // transitions
    if trials < 1:
        raise UsageError("budget smaller than one trial")
    oracle = enumerate_posteriors(net, ev, cap=_enum_cap())
    lines: list[str] = []
    for seed in seeds:
        run = _run_one(net, ev, ev_str, "bnras", trials, transitions,
                       None, seed, args.stride)
        lines.extend(_rows_for_run(run, oracle))
        run = _run_one(net, ev, ev_str, "straight", None, None,
                       args.total, seed, args.stride)
        lines.extend(_rows_for_run(run, oracle))
    _write_csv(lines, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="bnras", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a network file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    def common(p, evidence=True):
        p.add_argument("--network", required=True,
                       help="builtin name (AB, PATH2, CHAIN5, MINIALARM) or file path")
        if evidence:
            p.add_argument("--evidence", default="", help="Name=outcome,... (default none)")

    p = sub.add_parser("exact", help="exact posteriors by enumeration")
    common(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("run", help="one sampler run, CSV on stdout")
    common(p)
    p.add_argument("--algorithm", choices=("bnras", "straight"), required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--transitions", type=int)
    p.add_argument("--total", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stride", type=int, default=0,
                   help="checkpoint every this many transitions (0: none)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bounds", help="a-priori requirement table")
    common(p)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--mode", choices=("exact", "factored"), default="exact")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", help="grid of runs to CSV")
    common(p)
    p.add_argument("--algorithm", choices=("bnras", "straight"), required=True)
    p.add_argument("--trials", help="comma-separated trial counts (bnras)")
    p.add_argument("--transitions", help="comma-separated transition counts (bnras)")
    p.add_argument("--total", help="comma-separated totals (straight)")
    p.add_argument("--seeds", default="0", help="list 1,2,3 or range 0:30")
    p.add_argument("--stride", type=int, default=0)
    p.add_argument("--out", default="-", help="CSV path, - for stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="both samplers at a matched budget")
    common(p)
    p.add_argument("--total", type=int, required=True, help="transition budget")
    p.add_argument("--transitions", type=int, default=100,
                   help="transitions per trial for the randomized sampler")
    p.add_argument("--seeds", default="0")
    p.add_argument("--stride", type=int, default=100)
    p.add_argument("--out", default="-", help="CSV path, - for stdout")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NetworkFormatError, NetworkValidationError, PositivityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (
        CapacityError,
        ImpossibleEvidenceError,
        MixingOverflowError,
        DeterministicConflictError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
