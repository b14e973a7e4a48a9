"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 floor not certified within the
precision cap, 3 mismatch between two engines that should agree.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import analytic, billiards, duality, grover, traces
from .analytic import Method
from .numerics import DEFAULT_PRECISION_CAP, AmbiguousFloor, format_rational, to_rational

EXIT_OK, EXIT_USAGE, EXIT_AMBIGUOUS, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str):
    try:
        return to_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _iterations(text: str):
    if text == "optimal":
        return text
    try:
        k = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected an integer or 'optimal'") from exc
    if k < 0:
        raise argparse.ArgumentTypeError("iterations must be >= 0")
    return k


def _add_trace_args(p: argparse.ArgumentParser):
    p.add_argument("--trace", metavar="PATH", help="write a per-event trace")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")


def _add_precision_cap(p: argparse.ArgumentParser):
    p.add_argument("--precision-cap", type=int, default=DEFAULT_PRECISION_CAP, metavar="BITS")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poolsearch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("count", help="count billiard collisions")
    p.add_argument("--mass-ratio", "-M", type=_rational, required=True, help="heavy mass, e.g. 100 or 7/3")
    p.add_argument("--light-mass", "-m", type=_rational, default=to_rational(1))
    p.add_argument("--start", choices=[s.value for s in billiards.Start], default="galperin")
    p.add_argument("--mode", choices=[x.value for x in Method], default="direct")
    p.add_argument("--max-events", type=int, default=billiards.DEFAULT_MAX_EVENTS)
    _add_precision_cap(p)
    _add_trace_args(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("grover", help="simulate Grover search")
    p.add_argument("--dimension", "-d", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--needles", "-n", type=int, default=1, help="mark the last N indices")
    group.add_argument("--marked", help="comma-separated 0-based marked indices")
    p.add_argument("--iterations", "-k", type=_iterations, default="optimal")
    p.add_argument("--exact", action="store_true", help="rational engine, unscaled start")
    _add_precision_cap(p)
    _add_trace_args(p)
    p.set_defaults(func=cmd_grover)

    p = sub.add_parser("duality", help="run billiards and Grover in lockstep")
    p.add_argument("--dimension", "-d", type=int, required=True)
    p.add_argument("--needles", "-n", type=int, default=1)
    p.add_argument("--steps", type=int, help="iterations to check (default: until the balls stop)")
    p.add_argument("--exact", action="store_true", help="exact rational comparison")
    _add_trace_args(p)
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("pi-digits", help="digits of pi from the collision count at M = 100**N")
    p.add_argument("--N", "-N", dest="N", type=int, required=True)
    _add_precision_cap(p)
    p.set_defaults(func=cmd_pi_digits)
    return parser


def cmd_count(args) -> int:
    mode = Method(args.mode)
    if args.start != billiards.Start.GALPERIN.value and mode is not Method.DIRECT:
        raise UsageError("analytic counting covers the galperin start only")
    if args.mass_ratio <= 0 or args.light_mass <= 0:
        raise UsageError("masses must be positive")
    if mode is Method.DIRECT or args.trace:
        trace = billiards.run(args.mass_ratio, args.light_mass, args.start, args.max_events)
        direct = len(trace)
        if args.trace:
            traces.write_records(traces.billiard_records(trace), args.trace, args.format)
    if mode is Method.DIRECT:
        print(direct)
        return EXIT_OK
    cert = analytic.count_collisions_analytic(args.mass_ratio, args.light_mass, args.precision_cap)
    print(cert.count)
    if mode is Method.BOTH:
        if not args.trace:
            direct = billiards.count_collisions_direct(
                args.mass_ratio, args.light_mass, args.start, args.max_events
            )
        agree = direct == cert.count
        print(f"direct={direct} analytic={cert.count} agreement={str(agree).lower()}")
        return EXIT_OK if agree else EXIT_MISMATCH
    return EXIT_OK


def _marked_from_args(args) -> frozenset[int]:
    if args.marked:
        try:
            return frozenset(int(x) for x in args.marked.split(","))
        except ValueError as exc:
            raise UsageError(f"bad --marked list: {args.marked!r}") from exc
    if not 1 <= args.needles < args.dimension:
        raise UsageError("need 1 <= needles < dimension")
    return grover.default_marked(args.dimension, args.needles)


def cmd_grover(args) -> int:
    d = args.dimension
    if d < 2:
        raise UsageError("dimension must be >= 2")
    marked = _marked_from_args(args)
    state = grover.make_uniform(d, marked, exact=args.exact)
    plan = None
    if args.iterations == "optimal":
        plan = grover.optimal_iterations(d, len(marked), args.precision_cap)
        k = plan.iterations
    else:
        k = args.iterations
    records = [traces.grover_record(0, "initial", state)]
    step = 0
    for _ in range(k):
        for event, op in (("oracle", grover.apply_oracle), ("diffusion", grover.apply_diffusion)):
            state = op(state)
            step += 1
            if args.trace:
                records.append(traces.grover_record(step, event, state))
    if args.trace:
        traces.write_records(records, args.trace, args.format)
    p = grover.success_probability(state)
    print(f"iterations: {k}")
    if plan is not None:
        print(f"closed_form: {plan.closed_form} agree={str(plan.agree).lower()}")
    print(f"success_probability: {float(p)!r}")
    if args.exact:
        print(f"success_probability_exact: {format_rational(p)}")
    return EXIT_OK


def cmd_duality(args) -> int:
    d, n = args.dimension, args.needles
    if d < 2 or not 1 <= n < d:
        raise UsageError("need dimension >= 2 and 1 <= needles < dimension")
    if args.steps is not None and args.steps < 1:
        raise UsageError("steps must be >= 1")
    records = []

    def record(step, event, b, g):
        records.append(traces.billiard_record(step, event.value, b, side="both"))

    try:
        report = duality.verify_trace_equivalence(
            d, n, args.steps, exact=args.exact, on_step=record if args.trace else None
        )
    except duality.MismatchAt as exc:
        print(f"mismatch at half-step {exc.step}: {exc}")
        return EXIT_MISMATCH
    finally:
        if args.trace:
            traces.write_records(records, args.trace, args.format)
    print(f"match: {'exact' if report.exact_match else 'float'}")
    print(f"dimension: {d} needles: {n}")
    print(f"half_steps: {report.steps_checked} collisions: {report.collision_count} queries: {report.query_count}")
    print(f"terminated: {str(report.terminated).lower()}")
    if not report.exact_match:
        print(f"max_float_deviation: {report.max_float_deviation:.3e}")
    if d <= 16:
        values = [format_rational(x) if args.exact else repr(float(x)) for x in report.final_state]
        print(f"final_state: ({', '.join(values)})")
    return EXIT_OK


def cmd_pi_digits(args) -> int:
    if args.N < 1:
        raise UsageError("N must be >= 1")
    print(analytic.pi_digits_via_collisions(args.N, args.precision_cap))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"poolsearch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AmbiguousFloor as exc:
        print(f"poolsearch: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except billiards.MaxEventsExceeded as exc:
        print(f"poolsearch: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
