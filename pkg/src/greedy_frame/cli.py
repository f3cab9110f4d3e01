"""Command line entry point.

Exit status: 0 success, 1 invalid arguments, 2 runtime or numerical failure.
"""
import argparse
import logging
import sys

import numpy as np

from . import experiments as ex
from .frame_core import Frame, NotAFrame, contraction_constant, optimal_frame_bounds, optimal_relaxation

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_report_args(p):
    p.add_argument("--csv", metavar="PATH", help="write per-iteration statistics as CSV")
    p.add_argument("--svg", metavar="PATH", help="write a standalone SVG chart")
    p.add_argument("--figure", metavar="PATH", help="render the chart with matplotlib (format from suffix)")
    p.add_argument("--log-scale", action="store_true", help="logarithmic error axis")
    p.add_argument("--workers", type=int, default=1, help="worker processes for trials")


def build_parser():
    parser = _Parser(prog="greedy-frame", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p1 = sub.add_parser("example1", help="noisy coefficients with erasures")
    p1.add_argument("--d", type=int, default=100)
    p1.add_argument("--n", type=int, default=200)
    p1.add_argument("--trials", type=int, default=1000)
    p1.add_argument("--iters", type=int, default=50)
    p1.add_argument("--noise", type=float, default=1e-6)
    p1.add_argument("--erasures", type=int, default=10)
    p1.add_argument("--alpha", type=float, default=1.0)
    p1.add_argument("--seed", type=int, default=0)
    _add_report_args(p1)

    p2 = sub.add_parser("example2", help="saturated coefficients")
    p2.add_argument("--d", type=int, default=100)
    p2.add_argument("--n", type=int, default=250)
    p2.add_argument("--trials", type=int, default=1000)
    p2.add_argument("--iters", type=int, default=50)
    p2.add_argument("--lambda", dest="lam", type=float, default=0.08)
    p2.add_argument("--seed", type=int, default=0)
    _add_report_args(p2)

    pb = sub.add_parser("bounds", help="optimal frame bounds of a frame stored as CSV")
    pb.add_argument("--frame-file", required=True, metavar="PATH")
    return parser


def _report(summary, args, title):
    for name, rate in summary.reduction_rates.items():
        n1, n2 = summary.window
        print(f"{name}: reduction rate {n1}->{n2} = {rate:.4f}")
    print(f"trials: {summary.trials}, redraws: {summary.redraws}")
    if args.csv:
        ex.write_csv(summary, args.csv)
    if args.svg:
        from .svg import write_svg
        write_svg(summary, args.svg, log_scale=args.log_scale, title=title)
    if args.figure:
        from .plotting import plot_summary
        plot_summary(summary, args.figure, log_scale=args.log_scale, title=title)


def _config(make, **kw):
    try:
        return make(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_example1(args):
    cfg = _config(ex.example1_config, d=args.d, N=args.n, trials=args.trials, iters=args.iters,
                  seed=args.seed, noise_norm=args.noise, erasures=args.erasures,
                  classical_alpha=args.alpha)
    summary = ex.run_example1(cfg, workers=args.workers)
    _report(summary, args, "Erasures and noisy measurements")


def cmd_example2(args):
    cfg = _config(ex.example2_config, d=args.d, N=args.n, trials=args.trials, iters=args.iters,
                  seed=args.seed, lam=args.lam)
    summary = ex.run_example2(cfg, workers=args.workers)
    _report(summary, args, f"Saturation level {args.lam:g}")


def cmd_bounds(args):
    try:
        vectors = np.loadtxt(args.frame_file, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read frame file {args.frame_file}: {exc}") from exc
    try:
        frame = Frame(vectors)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    b = optimal_frame_bounds(frame)
    alpha = optimal_relaxation(b)
    print(f"A={b.lower!r}")
    print(f"B={b.upper!r}")
    print(f"alpha={alpha!r}")
    print(f"contraction={contraction_constant(b, alpha)!r}")


COMMANDS = {"example1": cmd_example1, "example2": cmd_example2, "bounds": cmd_bounds}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotAFrame, ArithmeticError, RuntimeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
