#!/usr/bin/env python3
"""Command line interface for the cuspidal torsion calculator.

Subcommands:
    torsion     torsion of J_0(N) and of the generalized Jacobian
    delta       orders and kernel of the connecting map delta from cuspidal
                classes into D_3 (x) F^x (x) Q/Z
    verify      closed forms checked against independent computations
    verify-eta  discriminant-quotient oracle over all squarefree N <= nmax
    hecke       Eisenstein checks for the Hecke action on L

Exit status is 0 on success, 1 when a verification fails or is cut short by
the time limit, and 2 for usage and domain errors.
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional, Tuple

from . import __version__, report
from .base_ring import Setting, parse_level
from .delta import delta_summary
from .errors import CuspidalError
from .hecke import eisenstein_report, hecke_primes, parse_prime_range
from .torsion import default_ells, torsion_summary
from .verify import SUITES, Check, VerificationReport, eta_checks, modulus_checks, run_suites

logger = logging.getLogger(__name__)

TRUNCATION_ENV = "CUSPIDAL_TRUNC"

SUITE_FLAGS = {
    "prime_level": "--prime-level",
    "matrix": "--matrix",
    "eta": "--eta",
    "structure": "--structure",
    "hecke": "--hecke",
    "ell": "--ell",
}


class UsageError(Exception):
    """Invalid combination of options; reported with exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    setting: Setting
    level: Optional[str] = None
    output: str = "text"
    extra_inverted: Tuple[int, ...] = ()
    nmax: int = 60
    smax: int = 4
    primes: Optional[str] = None
    suites: Tuple[str, ...] = ()
    time_limit: Optional[float] = None
    samples: int = 1000
    seed: int = 0
    truncation: Optional[int] = None
    verbosity: int = 0

    def modulus(self):
        if self.level is None:
            raise UsageError(f"'{self.command}' needs a level (--level or --nf LEVEL)")
        return parse_level(self.setting, self.level)

    def suite_options(self):
        return {
            "nmax": self.nmax,
            "smax": self.smax,
            "samples": self.samples,
            "seed": self.seed,
            "truncation": self.truncation,
        }


def truncation_from_env(environ):
    """Integer truncation T from CUSPIDAL_TRUNC, or None when unset."""
    raw = environ.get(TRUNCATION_ENV)
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError as e:
        raise UsageError(f"{TRUNCATION_ENV}={raw!r} is not an integer") from e
    if value < 1:
        raise UsageError(f"{TRUNCATION_ENV} must be positive, got {value}")
    return value


def _add_common(parser):
    parser.add_argument(
        "--nf",
        nargs="?",
        const="",
        default=None,
        metavar="LEVEL",
        help="number-field setting over Q, optionally with the level",
    )
    parser.add_argument("--ff", type=int, metavar="Q", help="function-field setting over GF(Q)[T]")
    parser.add_argument(
        "--level",
        help="squarefree level: an integer, a prime list p1,p2 or a polynomial product",
    )
    output = parser.add_mutually_exclusive_group()
    output.add_argument("--json", action="store_true", help="print JSON")
    output.add_argument("--csv", action="store_true", help="print CSV")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug")


def _add_invert(parser):
    parser.add_argument(
        "--invert",
        type=int,
        action="append",
        default=[],
        metavar="P",
        help="additionally invert the prime P (repeatable)",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cuspidal-torsion",
        description="Rational torsion of J_0(N) and its generalized Jacobian for squarefree N",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    torsion = subparsers.add_parser("torsion", help="torsion groups and e-part tables")
    _add_common(torsion)
    _add_invert(torsion)
    torsion.add_argument(
        "--ell-bound",
        type=int,
        default=13,
        help="odd primes up to this bound get an ell-part column (default: 13)",
    )

    delta = subparsers.add_parser("delta", help="orders and kernel of delta")
    _add_common(delta)
    _add_invert(delta)

    verify = subparsers.add_parser("verify", help="run verification suites")
    _add_common(verify)
    for suite, flag in SUITE_FLAGS.items():
        verify.add_argument(flag, dest=f"suite_{suite}", action="store_true", help=f"run the {suite} suite")
    verify.add_argument("--nmax", type=int, default=60, help="largest NF level (default: 60)")
    verify.add_argument("--smax", type=int, default=4, help="largest number of primes for --matrix (default: 4)")
    verify.add_argument("--p", "--primes", dest="primes", help="Hecke primes: a range 2..50 or a list 2,3,5")
    verify.add_argument("--samples", type=int, default=1000, help="random L^0 samples (default: 1000)")
    verify.add_argument("--seed", type=int, default=0, help="seed for the L^0 samples (default: 0)")
    verify.add_argument("--time-limit", type=float, metavar="SECONDS", help="stop and report INCOMPLETE")

    verify_eta = subparsers.add_parser("verify-eta", help="discriminant-quotient oracle")
    _add_common(verify_eta)
    verify_eta.add_argument("--nmax", type=int, default=60, help="largest NF level (default: 60)")

    hecke = subparsers.add_parser("hecke", help="Eisenstein checks for the Hecke action")
    _add_common(hecke)
    hecke.add_argument("--p", "--primes", dest="primes", default="2..50", help="range 2..50 or list 2,3,5")
    hecke.add_argument("--report", choices=("text", "json"), default="text", help="output format")
    hecke.add_argument("--samples", type=int, default=1000, help="random L^0 samples (default: 1000)")
    hecke.add_argument("--seed", type=int, default=0, help="seed for the L^0 samples (default: 0)")
    return parser


def build_config(args, environ):
    """Turn parsed arguments and the environment into a RunConfig.

    Raises:
        UsageError: for conflicting options or a bad CUSPIDAL_TRUNC
    """
    if args.ff is not None and args.nf is not None:
        raise UsageError("--nf and --ff are mutually exclusive")
    if args.nf and args.level and args.nf != args.level:
        raise UsageError("two different levels given")
    setting = Setting.ff(args.ff) if args.ff is not None else Setting.nf()
    level = args.level or args.nf or None

    output = "json" if args.json else "csv" if args.csv else "text"
    if getattr(args, "report", "text") == "json":
        output = "json"

    suites = tuple(s for s in SUITES if getattr(args, f"suite_{s}", False))
    return RunConfig(
        command=args.command,
        setting=setting,
        level=level,
        output=output,
        extra_inverted=tuple(getattr(args, "invert", ())),
        nmax=getattr(args, "nmax", 60),
        smax=getattr(args, "smax", 4),
        primes=getattr(args, "primes", None),
        suites=suites,
        time_limit=getattr(args, "time_limit", None),
        samples=getattr(args, "samples", 1000),
        seed=getattr(args, "seed", 0),
        truncation=truncation_from_env(environ),
        verbosity=args.verbose,
    )


def run_torsion(config, ell_bound=13):
    modulus = config.modulus()
    summary = torsion_summary(modulus, config.extra_inverted, default_ells(modulus, ell_bound))
    if config.output == "json":
        print(report.to_json(summary))
    elif config.output == "csv":
        print(report.torsion_csv(summary), end="")
    else:
        print(report.torsion_text(summary))
    return 0


def run_delta(config):
    summary = delta_summary(config.modulus(), config.extra_inverted)
    if config.output == "json":
        print(report.to_json(summary))
    elif config.output == "csv":
        print(report.delta_csv(summary), end="")
    else:
        print(report.delta_text(summary))
    return 0


def _print_verification(config, result, show_checks=False):
    data = result.to_dict(include_checks=show_checks)
    if config.output == "json":
        print(report.to_json(data))
    elif config.output == "csv":
        print(report.verify_csv(result.checks), end="")
    else:
        print(report.verify_text(data, result.checks if show_checks else None))
    return 0 if result.ok else 1


def run_verify(config):
    if config.level is None:
        suites = config.suites or SUITES
        result = run_suites(suites, config.suite_options(), config.time_limit)
        return _print_verification(config, result)

    modulus = config.modulus()
    if "hecke" in config.suites:
        primes = parse_prime_range(modulus, config.primes) if config.primes else hecke_primes(modulus, 50)
        rows = eisenstein_report(modulus, primes, config.samples, config.seed)
        result = VerificationReport([
            Check("hecke", f"p={row.prime}", row.passed) for row in rows
        ])
        if config.output == "json":
            data = result.to_dict()
            data["rows"] = [row.to_dict() for row in rows]
            print(report.to_json(data))
        elif config.output == "csv":
            print(report.hecke_csv(rows), end="")
        else:
            print(report.hecke_text(modulus, rows))
            print(result.to_dict()["status"])
        return 0 if result.ok else 1
    return _print_verification(config, modulus_checks(modulus, config.suite_options()), show_checks=True)


def run_verify_eta(config):
    if not config.setting.is_nf:
        raise UsageError("verify-eta is only available in the NF setting")
    result = VerificationReport(list(eta_checks(config.nmax, config.truncation)))
    return _print_verification(config, result, show_checks=True)


def run_hecke(config):
    modulus = config.modulus()
    primes = parse_prime_range(modulus, config.primes or "2..50")
    rows = eisenstein_report(modulus, primes, config.samples, config.seed)
    if config.output == "json":
        print(report.to_json({"modulus": str(modulus), "rows": [row.to_dict() for row in rows]}))
    elif config.output == "csv":
        print(report.hecke_csv(rows), end="")
    else:
        print(report.hecke_text(modulus, rows))
    return 0 if all(row.passed for row in rows) else 1


def configure_logging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv=None, environ=None):
    """Main entry point for the cuspidal-torsion tool."""
    parser = build_parser()
    args = parser.parse_args(argv)
    environ = os.environ if environ is None else environ

    configure_logging(args.verbose)
    try:
        config = build_config(args, environ)
        logger.debug("running with %s", config)
        if config.command == "torsion":
            status = run_torsion(config, args.ell_bound)
        elif config.command == "delta":
            status = run_delta(config)
        elif config.command == "verify":
            status = run_verify(config)
        elif config.command == "verify-eta":
            status = run_verify_eta(config)
        else:
            status = run_hecke(config)
    except (UsageError, CuspidalError) as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(2)
    sys.exit(status)


if __name__ == "__main__":
    main()
