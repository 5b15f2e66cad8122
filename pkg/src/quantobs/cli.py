"""Command line interface.

Subcommands operate on JSON system descriptions and print a JSON report
document to stdout (except `demo`, which prints a text table). Exit
codes: 0 success, 2 input/format problem, 3 violated precondition or
budget, 4 analysis not applicable to the given system.
"""

import argparse
import os
import sys as _sys
import time

from . import __version__
from .analysis import forced_response_distance, full_report
from .errors import (
    BudgetError,
    DimensionError,
    DomainError,
    InapplicableError,
    InputFormatError,
    PlantOverflowError,
    PreconditionError,
)
from .family import adversarial_walk, build_family, family_parameters, verify_family
from .fileio import dump_document, load_system, report_document
from .fixtures import example1
from .harness import gain_functional, monte_carlo_settling, record_to_csv, trial_record
from .observer import build_finite_input_observer
from .plant import simulate

DEFAULT_SEED = 20260816


def _emit(doc, out_path=None):
    text = dump_document(doc)
    print(text)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")


def _write_csv(path, record):
    with open(path, "w") as fh:
        fh.write(record_to_csv(record))


def _resolve_x0_bound(args, desc):
    if getattr(args, "x0_bound", None) is not None:
        return float(args.x0_bound)
    if desc.x0_bound is not None:
        return float(desc.x0_bound)
    return 1.0


def cmd_analyze(args):
    t0 = time.perf_counter()
    desc = load_system(args.system)
    report = full_report(
        desc.system,
        x0_bound=_resolve_x0_bound(args, desc),
        max_k=args.max_k,
        budget=args.budget,
    )
    doc = report_document(
        "analyze",
        report.to_payload(),
        system=desc.system,
        source=args.system,
        timestamp=not args.no_timestamp,
        elapsed=time.perf_counter() - t0,
    )
    _emit(doc, args.out)
    return 0


def cmd_distance(args):
    t0 = time.perf_counter()
    desc = load_system(args.system)
    result = forced_response_distance(
        desc.system,
        max_k=args.max_k,
        witness_tol=args.witness_tol,
        budget=args.budget,
    )
    doc = report_document(
        "distance",
        result.to_payload(),
        system=desc.system,
        source=args.system,
        timestamp=not args.no_timestamp,
        elapsed=time.perf_counter() - t0,
    )
    _emit(doc, args.out)
    return 0


def _parse_window(text):
    if text == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'auto' or a positive integer")
    if value < 1:
        raise argparse.ArgumentTypeError("window must be >= 1")
    return value


def cmd_observe(args):
    t0 = time.perf_counter()
    desc = load_system(args.system)
    system = desc.system
    x0_bound = _resolve_x0_bound(args, desc)

    if args.T is None:
        report = full_report(system, x0_bound=x0_bound, budget=args.budget)
        if report.chosen_T is None:
            raise InapplicableError(
                "no certified window for this system (verdict: %s); pass --T N "
                "to force one" % report.verdict)
        window = int(report.chosen_T)
        window_source = "auto"
    else:
        window = int(args.T)
        window_source = "explicit"

    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)

    def factory():
        return build_finite_input_observer(system, window)

    summary = monte_carlo_settling(
        system,
        factory,
        trials=args.trials,
        horizon=args.horizon,
        x0_bound=x0_bound,
        seed=args.seed,
        settle_by=window,
        threads=threads,
    )
    result = {
        "window": window,
        "window_source": window_source,
        "max_last_error_time": summary.max_last_error_time,
        "settled_before_window": (
            summary.max_last_error_time is None
            or summary.max_last_error_time < window
        ),
        "summary": summary.to_payload(),
    }
    if args.csv:
        record = trial_record(
            system,
            factory,
            horizon=args.horizon,
            x0_bound=x0_bound,
            seed=args.seed,
            trial=0,
        )
        _write_csv(args.csv, record)
        result["csv"] = args.csv
    doc = report_document(
        "observe",
        result,
        system=system,
        source=args.system,
        timestamp=not args.no_timestamp,
        elapsed=time.perf_counter() - t0,
    )
    _emit(doc, args.out)
    return 0


def cmd_psi(args):
    t0 = time.perf_counter()
    desc = load_system(args.system)
    system = desc.system
    params = family_parameters(system)
    family = build_family(system, params, depth=args.depth, budget=args.budget)

    if args.action == "build":
        result = {"node_count": len(family), "family": family.to_payload()}
    elif args.action == "verify":
        ver = verify_family(system, family)
        result = {
            "params": params.to_payload(),
            "depth": family.depth,
            "node_count": len(family),
            "ok": ver.ok,
            "verification": ver.to_payload(),
        }
    else:
        def factory():
            return build_finite_input_observer(system, args.observer_T)

        attack = adversarial_walk(system, family, factory)
        result = {
            "observer_window": args.observer_T,
            "depth": family.depth,
            "error_times": list(attack.error_times),
            "path": [list(node) for node in attack.path],
            "final_last_error_time": attack.final_record.last_error_time,
        }
        if args.csv:
            _write_csv(args.csv, attack.final_record)
            result["csv"] = args.csv

    doc = report_document(
        "psi %s" % args.action,
        result,
        system=system,
        source=args.system,
        timestamp=not args.no_timestamp,
        elapsed=time.perf_counter() - t0,
    )
    _emit(doc, args.out)
    return 0


def cmd_demo(args):
    # two plants, identical inputs, initial states +/-0.1: the labels agree
    # for a long stretch and then split, so no finite record pins the state.
    desc = example1()
    system = desc.system
    horizon = 13
    idx = [0] * horizon
    idx[9] = 1
    traj_a = simulate(system, [0.1], idx)
    traj_b = simulate(system, [-0.1], idx)
    print("demo: %s (x0 = +0.1 vs x0 = -0.1, pulse u=1 at t=9)" % desc.name)
    print()
    header = "%3s %6s | %10s %4s | %10s %4s |" % (
        "t", "u", "raw(+)", "y(+)", "raw(-)", "y(-)")
    print(header)
    print("-" * len(header))
    split_at = None
    for t in range(horizon):
        u = system.input_vector(idx[t])[0]
        ra, ya = traj_a.raw_outputs[t, 0], traj_a.outputs[t, 0]
        rb, yb = traj_b.raw_outputs[t, 0], traj_b.outputs[t, 0]
        differ = ya != yb
        if differ and split_at is None:
            split_at = t
        print("%3d %6.1f | %10.6f %4.1f | %10.6f %4.1f | %s" % (
            t, u, ra, ya, rb, yb, "<-- labels differ" if differ else ""))
    print()
    if split_at is None:
        print("labels never diverged on this horizon")
    else:
        print("labels first diverge at t = %d: the pulse pushed both raw "
              "outputs next to the breakpoint at 0.5, where the residual "
              "initial-state difference decides the cell." % split_at)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quantobs",
        description="Quantized-output observability analysis and observers.",
    )
    parser.add_argument("--version", action="version",
                        version="quantobs %s" % __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", metavar="PATH",
                       help="also write the JSON document to PATH")
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit volatile fields for reproducible output")

    p = sub.add_parser("analyze", help="full observability report")
    p.add_argument("system", help="path to a system description JSON file")
    p.add_argument("--x0-bound", type=float, default=None,
                   help="initial-state bound (default: from file, else 1.0)")
    p.add_argument("--max-k", type=int, default=12,
                   help="deepest lookback for the distance search")
    p.add_argument("--budget", type=int, default=None,
                   help="cap on enumerated input tuples per stage")
    add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("distance",
                       help="distance from forced responses to breakpoints")
    p.add_argument("system", help="path to a system description JSON file")
    p.add_argument("--max-k", type=int, default=12)
    p.add_argument("--witness-tol", type=float, default=None,
                   help="distance below which a witness is declared")
    p.add_argument("--budget", type=int, default=None)
    add_common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("observe",
                       help="Monte-Carlo settling study of a window observer")
    p.add_argument("system", help="path to a system description JSON file")
    p.add_argument("--T", type=_parse_window, default="auto", metavar="auto|N",
                   help="observer window (default: certified automatically)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--horizon", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--x0-bound", type=float, default=None)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: all cores)")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--csv", metavar="PATH",
                   help="write the first trial's record as CSV to PATH")
    add_common(p)
    p.set_defaults(func=cmd_observe)

    p = sub.add_parser("psi",
                       help="unobservable-family construction and attacks")
    p.add_argument("system", help="path to a system description JSON file")
    p.add_argument("action", choices=("build", "verify", "attack"))
    p.add_argument("--depth", type=int, default=4,
                   help="number of branching generations")
    p.add_argument("--observer-T", type=int, default=5,
                   help="window of the observer under attack")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--csv", metavar="PATH",
                   help="attack only: write the final run record as CSV")
    add_common(p)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("demo", help="side-by-side indistinguishability demo")
    p.add_argument("scenario", choices=("example1",))
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputFormatError, DimensionError, DomainError) as err:
        print("error: %s" % err, file=_sys.stderr)
        return 2
    except (PreconditionError, BudgetError, PlantOverflowError) as err:
        print("error: %s" % err, file=_sys.stderr)
        return 3
    except InapplicableError as err:
        print("error: %s" % err, file=_sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
