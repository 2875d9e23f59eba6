"""
Command-line interface for erasure-rate-kit

Subcommands: rate, sweep, figure, simulate, validate, serve.
Settings resolve as command-line flags > config file > defaults.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from erasure_rate_kit._version import __version__
from erasure_rate_kit.config import CliConfig, resolve_config
from erasure_rate_kit.exceptions import ParameterError
from erasure_rate_kit.figures import write_figure
from erasure_rate_kit.models import (
    Curve,
    FigureId,
    FigureSpec,
    Formula,
    OperatingPoint,
    RateRequest,
    Scheme,
    SimulateRequest,
    SweepSpec,
    SweepVariable,
)
from erasure_rate_kit.output import record_json, write_sweep_csv
from erasure_rate_kit.rate_tools import RateTools
from erasure_rate_kit.sweeps import run_sweep
from erasure_rate_kit.validation import format_report, run_validation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_IO_ERROR = 3
EXIT_INTERRUPTED = 130


# ============================================================================
# Argument helpers
# ============================================================================


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from e


def _complex_list(text: str) -> list[complex]:
    try:
        return [complex(v.strip().replace(" ", "")) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated complex taps like 1,0.5+0.2j: {text!r}"
        ) from e


def _curve_list(text: str) -> list[Curve]:
    try:
        return [Curve(v.strip()) for v in text.split(",") if v.strip()]
    except ValueError as e:
        choices = ", ".join(c.value for c in Curve)
        raise argparse.ArgumentTypeError(f"unknown curve in {text!r}; choose from {choices}") from e


def _override(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"override {key!r} needs a number") from e


def _add_point_args(parser: argparse.ArgumentParser) -> None:
    point = parser.add_argument_group("operating point")
    point.add_argument("--g0", type=float, default=0.8, help="|h0|^2 (default: 0.8)")
    point.add_argument("--g1", type=float, default=0.2, help="|h1|^2 (default: 0.2)")
    power = point.add_mutually_exclusive_group()
    power.add_argument(
        "--snr",
        type=float,
        default=10.0,
        help="input power P; dB unless --snr-linear is given (default: 10)",
    )
    power.add_argument(
        "--snr-db",
        type=float,
        help="input power P in dB; cannot be combined with --snr-linear",
    )
    point.add_argument("--q", type=float, default=0.2, help="erasure probability")
    point.add_argument("--q0", type=float, help="Markov Pr(erased -> erased)")
    point.add_argument("--q1", type=float, help="Markov Pr(received -> erased)")
    point.add_argument("--alpha-sq", type=float, default=0.5, help="inter-cell gain alpha^2")


def _add_mc_args(parser: argparse.ArgumentParser) -> None:
    mc = parser.add_argument_group("monte carlo")
    mc.add_argument("--block-size", "-N", type=int, help="symbols per block (default: 200)")
    mc.add_argument("--trials", type=int, help="number of blocks (default: 50)")
    mc.add_argument("--workers", type=int, help="worker processes (default: 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="erk",
        description="erk - achievable rates of the two-tap input-erasure Gaussian channel",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Single rate in nats per channel use
  erk rate two-tap --g0 0.8 --g1 0.2 --snr-db 10 --q 0.2

  # q sweep of the cellular schemes, written to CSV
  erk sweep --variable q --start 0 --stop 1 --step 0.01 --curves mcp,scp,icfs

  # Figure with Monte-Carlo overlay
  erk figure fig2 --mc --seed 7 --out-dir figures

  # Identity suite
  erk validate --level quick
        """,
    )
    parser.add_argument("--version", action="version", version=f"erk {__version__}")
    parser.add_argument("--bits", action="store_true", default=None, help="report bits instead of nats")
    parser.add_argument(
        "--snr-linear",
        action="store_true",
        default=None,
        help="read --snr as a linear power instead of dB",
    )
    parser.add_argument("--seed", type=int, help="Monte-Carlo seed (default: 0)")
    parser.add_argument("--out-dir", type=Path, help="directory for CSV/SVG artifacts")
    parser.add_argument("--config", type=Path, help="TOML config file")
    parser.add_argument("--max-terms", type=int, help="series truncation limit (default: 200)")
    parser.add_argument("--debug", "-d", action="store_true", help="enable debug logging")

    sub = parser.add_subparsers(dest="command", required=True)

    rate = sub.add_parser("rate", help="evaluate one formula at one point")
    rate.add_argument("formula", choices=[f.value for f in Formula])
    rate.add_argument(
        "--scheme",
        choices=[s.value for s in Scheme],
        help="cellular scheme for high-snr (default: two-tap channel)",
    )
    _add_point_args(rate)

    sweep = sub.add_parser("sweep", help="evaluate curves over a parameter grid (CSV)")
    sweep.add_argument(
        "--variable", required=True, choices=[v.value for v in SweepVariable]
    )
    sweep.add_argument("--start", type=float)
    sweep.add_argument("--stop", type=float)
    sweep.add_argument("--step", type=float)
    sweep.add_argument("--values", type=_float_list, help="explicit grid, comma separated")
    sweep.add_argument(
        "--curves", type=_curve_list, default=[Curve.TWO_TAP], help="comma-separated curves"
    )
    sweep.add_argument("--mc", action="store_true", help="add Monte-Carlo columns")
    sweep.add_argument("--output", "-o", type=Path, help="CSV path (default: <out-dir>/sweep.csv)")
    _add_point_args(sweep)
    _add_mc_args(sweep)

    figure = sub.add_parser("figure", help="reproduce a figure as CSV + SVG")
    figure.add_argument("id", choices=[f.value for f in FigureId])
    figure.add_argument("--mc", action="store_true", help="overlay Monte-Carlo points")
    figure.add_argument(
        "--set",
        dest="overrides",
        type=_override,
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a default (g0, g1, snr_db, alpha_sq, start, stop, step)",
    )
    _add_mc_args(figure)

    simulate = sub.add_parser("simulate", help="one Monte-Carlo run (JSON)")
    simulate.add_argument("--taps", type=_complex_list, help="general FIR taps h0,h1,...")
    simulate.add_argument("--markov", action="store_true", help="Markov erasures (needs --q0 --q1)")
    simulate.add_argument(
        "--user-activity", action="store_true", help="MCP throughput per active user"
    )
    simulate.add_argument(
        "--validate-forms",
        action="store_true",
        help="also report input- vs output-form logdet agreement",
    )
    _add_point_args(simulate)
    _add_mc_args(simulate)

    validate = sub.add_parser("validate", help="run the identity and oracle suite")
    validate.add_argument("--level", choices=["quick", "full"], default="quick")

    serve = sub.add_parser("serve", help="run the MCP server")
    serve.add_argument("--transport", "-t", choices=["stdio", "sse"], default="stdio")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", "-p", type=int, default=3000)

    return parser


def _settings(args: argparse.Namespace) -> CliConfig:
    overrides: dict[str, Any] = {
        "bits": args.bits,
        "snr_linear": args.snr_linear,
        "seed": args.seed,
        "out_dir": args.out_dir,
        "max_terms": args.max_terms,
        "block_size": getattr(args, "block_size", None),
        "trials": getattr(args, "trials", None),
        "workers": getattr(args, "workers", None),
    }
    return resolve_config(args.config, overrides)


def _point(args: argparse.Namespace, cfg: CliConfig) -> OperatingPoint:
    if args.snr_db is not None and cfg.snr_linear:
        raise ParameterError("--snr-db is a dB value; use --snr with --snr-linear")
    return OperatingPoint(
        g0=args.g0,
        g1=args.g1,
        snr=args.snr if args.snr_db is None else args.snr_db,
        snr_in_db=not cfg.snr_linear,
        q=args.q,
        q0=args.q0,
        q1=args.q1,
        alpha_sq=args.alpha_sq,
    )


# ============================================================================
# Commands
# ============================================================================


def cmd_rate(args: argparse.Namespace, cfg: CliConfig) -> int:
    request = RateRequest(
        formula=Formula(args.formula),
        point=_point(args, cfg),
        scheme=Scheme(args.scheme) if args.scheme else None,
        bits=cfg.bits,
        series=cfg.series(),
    )
    sys.stdout.write(record_json(RateTools().rate(request)))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, cfg: CliConfig) -> int:
    spec = SweepSpec(
        variable=SweepVariable(args.variable),
        start=args.start,
        stop=args.stop,
        step=args.step,
        values=args.values,
        fixed=_point(args, cfg),
        curves=args.curves,
        series=cfg.series(),
        mc=cfg.mc() if args.mc else None,
    )
    table = run_sweep(spec, bits=cfg.bits)
    path = write_sweep_csv(table, args.output or cfg.out_dir / "sweep.csv")
    print(path)
    return EXIT_OK


def cmd_figure(args: argparse.Namespace, cfg: CliConfig) -> int:
    overrides = dict(args.overrides)
    spec = FigureSpec(
        id=FigureId(args.id),
        overrides=overrides,
        mc=cfg.mc() if args.mc else None,
        series=cfg.series(),
    )
    logger.warning("figure %s: SNR values are read as dB (assumed)", spec.id.value)
    csv_path, svg_path = write_figure(spec, cfg.out_dir, bits=cfg.bits)
    print(csv_path)
    print(svg_path)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, cfg: CliConfig) -> int:
    request = SimulateRequest(
        point=_point(args, cfg),
        taps=args.taps,
        markov=args.markov,
        user_activity=args.user_activity,
        validate_forms=args.validate_forms,
        bits=cfg.bits,
        mc=cfg.mc(),
    )
    sys.stdout.write(record_json(RateTools().simulate(request)))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, cfg: CliConfig) -> int:
    report = run_validation(args.level)
    sys.stdout.write(format_report(report))
    return EXIT_OK if report.passed else EXIT_VALIDATION_FAILED


def cmd_serve(args: argparse.Namespace, cfg: CliConfig) -> int:
    from erasure_rate_kit.server import run_server

    run_server(transport=args.transport, host=args.host, port=args.port, debug=args.debug)
    return EXIT_OK


COMMANDS = {
    "rate": cmd_rate,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
    "simulate": cmd_simulate,
    "validate": cmd_validate,
    "serve": cmd_serve,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.debug else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )

    try:
        cfg = _settings(args)
        return COMMANDS[args.command](args, cfg)
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return EXIT_INTERRUPTED
    except ParameterError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ValueError as e:
        print(f"Error: invalid input: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
