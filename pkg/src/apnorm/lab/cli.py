"""
Command-line entry point.

Exit codes: 0 success, 1 configuration or input error, 2 acceptance
threshold violated, 3 numeric failure.
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Tuple

from .. import __version__, bounds, modulus as moduli
from ..errors import ApNormError, NumericError
from ..modulus import Modulus
from .fitting import compare_envelopes, fit_exponent, fit_report
from .output import emit_plot, read_norms, write_norms, write_witnesses
from .session import Experiment

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2
EXIT_NUMERIC = 3


def _range(text: str) -> Tuple[float, float]:
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            raise ValueError
        pair = float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if pair[0] > pair[1]:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return pair


def _modulus(args: argparse.Namespace) -> Modulus:
    if args.beta is not None:
        return moduli.power_log(args.alpha, args.beta)
    return moduli.power(args.alpha)


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------


def cmd_norms(args: argparse.Namespace) -> int:
    experiment = Experiment.from_file(args.config)
    rows = experiment.run_norms()
    config = experiment.config
    if config.output_csv:
        print(f"wrote {len(rows)} rows to {config.output_csv}")
        if config.output_plot:
            emit_plot(config.output_csv, config.output_plot, ps=config.ps)
            print(f"wrote plot {config.output_plot}")
    else:
        sys.stdout.write(write_norms(rows))
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    rows = read_norms(args.csv)
    if args.window:
        fits = [fit_exponent(rows, args.p, args.window)]
    else:
        fits = list(fit_report(rows, args.p))
    for label, fit in zip(("window", "full"), fits):
        print(f"{label}: {fit}")
        print(f"  intercept={fit.intercept:.6f} residual_max={fit.residual_max:.3g}")
    if args.expect:
        lo, hi = args.expect
        exponent = fits[0].exponent
        if not (lo <= exponent <= hi):
            print(f"FAIL: exponent {exponent:.6f} outside [{lo:g}, {hi:g}]")
            return EXIT_VIOLATION
        print(f"ok: exponent within [{lo:g}, {hi:g}]")
    return EXIT_OK


def cmd_witness(args: argparse.Namespace) -> int:
    experiment = Experiment.from_file(args.config)
    suite = experiment.witness_suite()
    total = len(suite.reports)
    print(f"lip constant c = {suite.lip_constant:.6g}")
    print(f"witness: {suite.passed}/{total} passed, min margin {suite.min_margin:.6g}")
    for lam, binding in suite.skipped:
        print(f"  lambda={lam:g} skipped: {binding} threshold not met")
    for check in suite.checks:
        status = "ok" if check.holds else "FAIL"
        print(
            f"  final lambda={check.lam:g} p={check.p:g}: "
            f"{check.lower:.6g} <= {check.hi:.6g} {status}"
        )
    if not experiment.config.output_witness and args.show:
        sys.stdout.write(write_witnesses(suite.reports))
    return EXIT_OK if suite.ok else EXIT_VIOLATION


def cmd_envelopes(args: argparse.Namespace) -> int:
    rows = read_norms(args.csv)
    env = bounds.envelope(args.kind, _modulus(args), args.p)
    comparison = compare_envelopes(rows, env, args.p, args.window, use=args.use)
    print(f"lambda,ratio ({args.use} / {args.kind})")
    for lam, ratio in zip(comparison.lams, comparison.ratios):
        print(f"{lam:.17g},{ratio:.17g}")
    print(
        f"constant={comparison.constant:.6g} max={comparison.max_ratio:.6g} "
        f"min={comparison.min_ratio:.6g} spread={comparison.spread:.6g}"
    )
    if args.max_ratio is not None and comparison.spread > args.max_ratio:
        print(f"FAIL: spread {comparison.spread:.6g} exceeds {args.max_ratio:g}")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    overlays: Dict[str, Callable[[float, float], float]] = {}
    modulus = _modulus(args)
    for kind in args.envelope or ():
        overlays[kind] = (
            lambda p, lam, kind=kind: bounds.envelope(kind, modulus, p)(lam)
        )
    out = emit_plot(args.csv, args.out, overlays, ps=args.p)
    print(f"wrote plot {out}")
    return EXIT_OK


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------


def _add_modulus_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--alpha", type=float, default=0.5, help="Modulus exponent (default 0.5)"
    )
    parser.add_argument(
        "--beta", type=float, default=None, help="Log exponent (power-log modulus)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apnorm",
        description="A_p norms of exp(i lam phi) and their growth in lam.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    norms = commands.add_parser("norms", help="Sweep lambda and write a norms table")
    norms.add_argument("config")
    norms.set_defaults(handler=cmd_norms)

    fit = commands.add_parser("fit", help="Fit the growth exponent of a norms table")
    fit.add_argument("csv")
    fit.add_argument("--p", type=float, required=True)
    fit.add_argument("--window", type=_range, help="lo:hi lambda range")
    fit.add_argument("--expect", type=_range, help="lo:hi accepted exponent range")
    fit.set_defaults(handler=cmd_fit)

    witness = commands.add_parser("witness", help="Run the witness suite of a config")
    witness.add_argument("config")
    witness.add_argument(
        "--show", action="store_true", help="Print the witness table to stdout"
    )
    witness.set_defaults(handler=cmd_witness)

    envelopes = commands.add_parser("envelopes", help="Compare norms with an envelope")
    envelopes.add_argument("csv")
    envelopes.add_argument("--kind", choices=bounds.ENVELOPE_KINDS, required=True)
    envelopes.add_argument("--p", type=float, default=1.0)
    envelopes.add_argument("--window", type=_range, help="lo:hi lambda range")
    envelopes.add_argument("--use", choices=("mid", "lo", "hi"), default="mid")
    envelopes.add_argument(
        "--max-ratio", type=float, default=None, help="Fail when max/min exceeds this"
    )
    _add_modulus_options(envelopes)
    envelopes.set_defaults(handler=cmd_envelopes)

    plot = commands.add_parser("plot", help="Log-log SVG plot of a norms table")
    plot.add_argument("csv")
    plot.add_argument("--out", required=True)
    plot.add_argument(
        "--envelope", action="append", choices=bounds.ENVELOPE_KINDS, help="Overlay"
    )
    plot.add_argument("--p", type=float, action="append", help="Only these p")
    _add_modulus_options(plot)
    plot.set_defaults(handler=cmd_plot)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except (NumericError, MemoryError) as exc:
        logger.error("numeric failure: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ApNormError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
