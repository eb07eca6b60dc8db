################################################################
#          Command-line driver of wgplate studies
#
# Usage: `python3 -m wgplate [-v] [--debug] convergence|verify|solve [study]`
################################################################

import argparse
import logging
import sys
import time

from wgplate.display import DisplayDataframe, DisplayDict, DisplayStudySummary
from wgplate.exceptions import WgplateException
from wgplate.session import Session

_logger = logging.getLogger(__name__)


def logging_setup(session, verbose_mode, debug_mode):
    # setup logging format, channel and granularity
    log_format = "%(asctime)s %(levelname)s %(name)s %(message)s"
    log_console = logging.StreamHandler()
    if session:
        log_file = logging.FileHandler(session.log_file_path)
        log_handlers = [log_console, log_file] if verbose_mode else [log_file]
    else:
        log_handlers = [log_console]
    logging.basicConfig(
        format=log_format,
        datefmt="%H:%M:%S",
        level=logging.DEBUG if debug_mode else logging.INFO,
        handlers=log_handlers,
        force=True,
    )


def _level_list(text):
    try:
        return [int(n) for n in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f'"{text}" is not a comma-separated list of integers')


def build_parser():
    parser = argparse.ArgumentParser(prog="wgplate", description="Weak Galerkin plate bending studies")
    parser.add_argument("-v", "--verbose", help="print verbose log", action="store_true")
    parser.add_argument("--json", help="print results as JSON", action="store_true")
    parser.add_argument(
        "--debug", help="debug level log (default is info level)", action="store_true"
    )
    parser.add_argument(
        "--config", action="append", default=[], help="extra TOML configuration file (repeatable)"
    )

    study = argparse.ArgumentParser(add_help=False)
    study.add_argument("study", nargs="?", help="study file of key = value lines")
    study.add_argument("--k", type=int, help="interior degree")
    study.add_argument("--p", type=int, help="trace degree (default k)")
    study.add_argument("--q", type=int, help="normal-derivative degree (default k-1)")
    study.add_argument("--r-mode", dest="r_mode", help="nonconvex, convex or custom")
    study.add_argument("--r", type=int, help="weak Laplacian degree for r-mode custom")
    study.add_argument("--mesh", help="mesh family: square or nonconvex")
    study.add_argument("--levels", type=_level_list, help="refinements, e.g. 4,8,16")
    study.add_argument("--solution", help="manufactured solution: trig or poly")
    study.add_argument("--solver", help="direct or cg")
    study.add_argument("--tol", type=float, help="relative residual tolerance of the solve")
    study.add_argument("--out", help="output CSV path")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("convergence", parents=[study], help="error table over the study levels")
    commands.add_parser("verify", parents=[study], help="stability and consistency checks")
    solve = commands.add_parser("solve", parents=[study], help="one solve with its errors")
    solve.add_argument("--n", type=int, help="refinement level (default: first study level)")
    return parser


def _overrides(args):
    keys = ("k", "p", "q", "r_mode", "r", "mesh", "levels", "solution", "solver", "tol", "out")
    return {key: getattr(args, key) for key in keys}


def _emit(display, as_json):
    print(display.to_json() if as_json else display.to_string())


def run(session, args):
    study = session.load_study(args.study, _overrides(args))
    start = time.time()

    if args.command == "convergence":
        report = session.run_convergence(study)
        df = report.to_dataframe()
        if study.out:
            footnotes = [
                f"final energy rate {report.rate('energy'):.3f}",
                f"final L2 rate {report.rate('l2'):.3f}",
                f"table written to {study.out}",
            ]
            _emit(DisplayStudySummary("convergence study", df, time.time() - start, footnotes), args.json)
        elif args.json:
            _emit(DisplayDataframe(df), True)
        else:
            sys.stdout.write(DisplayDataframe(df).to_csv())

    elif args.command == "verify":
        report = session.run_verify(study)
        df = report.to_dataframe()
        if args.json:
            _emit(DisplayStudySummary("verification", df, time.time() - start, report.failures), True)
        else:
            print(DisplayDataframe(df).to_string())
            print(DisplayDict({"checks": len(report.rows), "failures": len(report.failures)}).to_string())
        report.raise_on_failure()

    elif args.command == "solve":
        n = args.n if args.n else study.levels[0]
        result = session.solve(study, n)
        summary = dict(vars(result.errors))
        summary.update(
            {
                "cells": result.mesh.n_cells,
                "solver": result.info.method,
                "iterations": result.info.iterations,
                "residual": result.info.residual,
            }
        )
        _emit(DisplayDict(summary), args.json)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging_setup(None, args.verbose, args.debug)
    try:
        with Session(debug_mode=args.debug, config_paths=args.config) as session:
            logging_setup(session, args.verbose, args.debug)
            run(session, args)
    except WgplateException as err:
        _logger.debug("study failed", exc_info=True)
        print(err, file=sys.stderr)
        return err.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
