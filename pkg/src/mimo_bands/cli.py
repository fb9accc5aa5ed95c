"""Command-line entry point: ``mimo-bands {run,list-scenarios,validate-config,version}``."""

import argparse
import logging
import os
import sys

from . import __version__
from .config import ConfigError, load_config
from .experiments import StudyError, run_study, write_csv
from .propagation import SCENARIOS

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: {message}")


def _error(msg: str):
    # one line, machine parsable
    print(f"error: {' '.join(str(msg).split())}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mimo-bands",
                     description="mu-wave vs mm-wave massive MIMO channel studies")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    run = sub.add_parser("run", help="run a study and write CSV")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True)
    run.add_argument("--seed", type=int)
    run.add_argument("--set", dest="overrides", action="append", default=[],
                     metavar="KEY=VALUE")
    run.add_argument("--workers", type=int,
                     default=int(os.environ.get("MIMO_BANDS_WORKERS", "1") or 1))
    run.add_argument("--quiet", action="store_true")

    val = sub.add_parser("validate-config", help="check a config file")
    val.add_argument("--config", required=True)
    val.add_argument("--set", dest="overrides", action="append", default=[],
                     metavar="KEY=VALUE")
    val.add_argument("--seed", type=int)

    sub.add_parser("list-scenarios", help="print the mm-wave scenario table")
    sub.add_parser("version", help="print the package version")
    return parser


def _list_scenarios():
    for name, s in SCENARIOS.items():
        line = f"{name} n={s.n:g} sigma={s.sigma_db:g} b={s.b:g}"
        if s.f0_ghz is not None:
            line += f" f0={s.f0_ghz:g}GHz"
        print(line)


def _run(args) -> int:
    loaded = load_config(args.config, args.overrides, args.seed)
    if args.workers < 1:
        raise _UsageError(f"--workers must be at least 1, got {args.workers}")
    points = run_study(loaded.config, workers=args.workers)
    comments = ["config: " + "; ".join(loaded.echo_lines())]
    write_csv(points, args.out, comments)
    if not args.quiet:
        print(f"wrote {len(points)} points to {args.out}", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise _UsageError(build_parser().format_usage().strip())
        logging.basicConfig(
            level=logging.WARNING if getattr(args, "quiet", True) else logging.INFO,
            format="%(levelname)s %(name)s: %(message)s")
        if args.command == "version":
            print(__version__)
            return EXIT_OK
        if args.command == "list-scenarios":
            _list_scenarios()
            return EXIT_OK
        if args.command == "validate-config":
            load_config(args.config, args.overrides, args.seed)
            return EXIT_OK
        return _run(args)
    except _UsageError as exc:
        usage, _, msg = str(exc).rpartition("\n")
        if usage:
            print(usage, file=sys.stderr)
        _error(msg)
        return EXIT_USAGE
    except ConfigError as exc:
        _error(f"config: {exc}")
        return EXIT_CONFIG
    except (StudyError, OSError) as exc:
        _error(exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
