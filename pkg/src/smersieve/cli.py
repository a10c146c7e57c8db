"""Command-line entry point.

Subcommands: sieve, smer, ser, wheel, scan-phi. All numeric output is ASCII
decimal, lists one item per line, so results diff cleanly against oracle
output. Exit codes: 0 success, 1 usage or I/O error, 2 oracle mismatch,
3 simulation timeout.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import gcd
from pathlib import Path

from .harness import SimulationTimeout, TraceEvent, emit_trace
from .multigraph import parse_graph, parse_orientation, find_sinks
from .ser import ser_run
from .sieve import run_sieve, scan_phi
from .smer import PairWalk
from .wheel import eratosthenes, primorial
from . import report


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="smersieve",
        description="Edge-reversal scheduling engines and a distributed wheel sieve.",
    )
    sub = parser.add_subparsers(dest="command")

    p_sieve = sub.add_parser("sieve", help="distributed sieve: primes in [2, n]")
    p_sieve.add_argument("--n", type=int, required=True)
    p_sieve.add_argument("--start-wheel", type=int, choices=(1, 3), default=1)
    p_sieve.add_argument("--oracle-check", action="store_true",
                         help="compare against the bitmap sieve; exit 2 on mismatch")
    p_sieve.add_argument("--trace", metavar="FILE",
                         help="write message events as JSON lines (runs the message engine)")
    p_sieve.add_argument("--stats", metavar="FILE", help="write a one-row stats CSV")

    p_smer = sub.add_parser("smer", help="two-node pairwise walk")
    p_smer.add_argument("--ri", type=int, required=True)
    p_smer.add_argument("--rj", type=int, required=True)
    p_smer.add_argument("--trace", action="store_true",
                        help="print the state sequence as JSON lines")

    p_ser = sub.add_parser("ser", help="plain edge reversal on a simple graph")
    p_ser.add_argument("--graph", required=True, metavar="FILE")
    p_ser.add_argument("--orientation", required=True, metavar="FILE")
    p_ser.add_argument("--max-steps", type=int, default=None)
    p_ser.add_argument("--events", metavar="FILE",
                       help="write per-step fire events as JSON lines")

    p_wheel = sub.add_parser("wheel", help="wheel candidate sets and the oracle")
    p_wheel.add_argument("--k", type=int, help="print the order-k candidate set")
    p_wheel.add_argument("--limit", type=int, help="truncate the candidate set")
    p_wheel.add_argument("--oracle", type=int, metavar="N",
                         help="print the bitmap-sieve primes up to N")

    p_scan = sub.add_parser("scan-phi", help="per-n step and message statistics")
    p_scan.add_argument("--from", dest="n_from", type=int, required=True)
    p_scan.add_argument("--to", dest="n_to", type=int, required=True)
    p_scan.add_argument("--start-wheel", type=int, choices=(1, 3), default=1)
    p_scan.add_argument("--csv", metavar="FILE", help="also write the table to FILE")
    p_scan.add_argument("--plot", action="store_true",
                        help="render figures next to the CSV (requires --csv)")
    return parser


def cmd_sieve(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be positive")
    trace = [] if args.trace else None
    engine = "harness" if args.trace else "formula"
    primes, stats = run_sieve(
        args.n, start_wheel=args.start_wheel, engine=engine, trace=trace
    )
    if args.trace:
        with open(args.trace, "w") as fp:
            emit_trace(trace, fp)
    if args.stats:
        with open(args.stats, "w") as fp:
            report.write_stats_csv([stats], fp)
    for q in primes:
        print(q)
    if args.oracle_check:
        expected = eratosthenes(args.n)
        if primes != expected:
            missing = sorted(set(expected) - set(primes))[:10]
            extra = sorted(set(primes) - set(expected))[:10]
            print(
                f"oracle mismatch for n={args.n}: "
                f"missing={missing} extra={extra}",
                file=sys.stderr,
            )
            return 2
    return 0


def cmd_smer(args) -> int:
    if args.ri < 1 or args.rj < 1:
        raise UsageError("--ri and --rj must be positive")
    hi, lo = (args.ri, args.rj) if args.ri >= args.rj else (args.rj, args.ri)
    walk = PairWalk.start(hi, lo, "detector")
    states = [walk.incoming]
    while not walk.done:
        if walk.wants_send:
            walk.fire()
        else:
            walk.absorb()
        states.append(walk.incoming)
    coprime = "true" if walk.zero_visited else "false"
    print(f"period={walk.steps} coprime={coprime}")
    if args.trace:
        for t, v in enumerate(states):
            print(json.dumps({"step": t, "incoming": v}, separators=(",", ":")))
    return 0


def cmd_ser(args) -> int:
    g = parse_graph(Path(args.graph).read_text())
    o0 = parse_orientation(Path(args.orientation).read_text(), g)
    run = ser_run(o0, g, max_steps=args.max_steps)
    print(f"period={run.period}")
    print(f"prefix={run.prefix_len}")
    for node in g.nodes:
        print(f"{node} {run.ops_per_node[node]}")
    if args.events:
        events = []
        for t, o in enumerate(run.orientations[:-1]):
            for s in sorted(find_sinks(o, g)):
                events.append(TraceEvent(t + 1, s, "fire", None, ()))
        with open(args.events, "w") as fp:
            emit_trace(events, fp)
    return 0


def cmd_wheel(args) -> int:
    if (args.k is None) == (args.oracle is None):
        raise UsageError("give exactly one of --k or --oracle")
    if args.oracle is not None:
        for q in eratosthenes(args.oracle):
            print(q)
        return 0
    if args.k < 1:
        raise UsageError("--k must be positive")
    span = primorial(args.k)
    limit = span if args.limit is None else min(args.limit, span)
    if limit > 2_000_000:
        raise UsageError("candidate set too large; lower --limit")
    for y in range(1, limit + 1):
        if gcd(y, span) == 1:
            print(y)
    return 0


def cmd_scan(args) -> int:
    if args.plot and not args.csv:
        raise UsageError("--plot requires --csv")
    stats_list = scan_phi(args.n_from, args.n_to, start_wheel=args.start_wheel)
    report.write_stats_csv(stats_list, sys.stdout)
    summary = report.phi_summary(stats_list)
    print(f"# rows={summary.count}")
    print(f"# mean_phi={summary.mean:.4f}")
    print(f"# reference_mean={summary.reference}")
    print(f"# phi_ge_5_count={len(summary.over_threshold)}")
    if summary.over_threshold:
        print("# phi_ge_5_n=" + ",".join(str(n) for n in summary.over_threshold))
    if args.csv:
        with open(args.csv, "w") as fp:
            report.write_stats_csv(stats_list, fp)
        if args.plot:
            prefix = Path(args.csv).with_suffix("")
            for path in report.render_phi_figures(stats_list, prefix):
                print(f"# wrote {path}")
    return 0


_COMMANDS = {
    "sieve": cmd_sieve,
    "smer": cmd_smer,
    "ser": cmd_ser,
    "wheel": cmd_wheel,
    "scan-phi": cmd_scan,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SimulationTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
