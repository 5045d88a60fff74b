"""``vilenkin-lab`` command line.

Exit codes: 0 when every check passes, 1 when a check fails (the report
carries witnesses), 2 for usage, configuration, capacity or I/O errors.
"""
from __future__ import annotations

import argparse
import sys

from ..errors import VilenkinError
from ..families import SubsequenceFamily
from .config import build_config, read_config_file
from .experiments import counterexample_report, growth_experiment, kernel_table, maximal_report
from .regression import RegressionStore
from .report import emit
from .suites import SUITES, run_suite

EXPERIMENTS = ("kernel", "counterexample", "maximal", "growth")
COMMANDS = ("suite",) + tuple(SUITES) + EXPERIMENTS

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vilenkin-lab", description="Vilenkin-system verification suites and experiments.")
    ap.add_argument("command", choices=COMMANDS, help="suite name, 'suite NAME', or an experiment")
    ap.add_argument("name", nargs="?", help="suite name when the command is 'suite'")
    ap.add_argument("--radix", help="comma-separated radix pattern, e.g. 2 or 2,3 (default 2)")
    ap.add_argument("--repeat", type=int, help="cycle the pattern to this length (default: the resolution)")
    ap.add_argument("--resolution", type=int, help="working resolution N (default 12 for Walsh, else 8)")
    ap.add_argument("--p", help="comma-separated exponents; fractions like 1/2 allowed")
    ap.add_argument("--family", help="Mn, Mn+1, Mn+Mprev, list:a,b,... or pattern:top=..;low=..")
    ap.add_argument("--K", type=int, help="number of family members / selected indices")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--format", choices=("json", "csv"))
    ap.add_argument("--budget", type=int, help="cell budget for M_N (default 65536)")
    ap.add_argument("--config", help="flat key = value file; flags override it")
    ap.add_argument("--regression", help="regression constants file (default: the packaged one)")
    ap.add_argument("--no-record", action="store_true", help="fail instead of recording missing constants")
    ap.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE", help="tolerance override")
    return ap


def _settings(args: argparse.Namespace) -> dict:
    settings: dict = read_config_file(args.config) if args.config else {}
    for key in ("radix", "repeat", "resolution", "p", "family", "K", "trials", "seed", "out", "format", "budget",
                "regression"):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    settings["tol_overrides"] = args.tol
    radix = str(settings.get("radix", "2"))
    if "resolution" not in settings:
        walsh = {t.strip() for t in radix.split(",") if t.strip()} == {"2"}
        settings["resolution"] = 12 if walsh else 8
    return settings


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command
    if command == "suite":
        if args.name not in SUITES:
            print(f"vilenkin-lab: error: 'suite' needs one of {', '.join(SUITES)}", file=sys.stderr)
            return EXIT_USAGE
        command = args.name
    elif args.name is not None:
        print(f"vilenkin-lab: error: unexpected argument {args.name!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        settings = _settings(args)
        if command == "growth":
            settings.setdefault("K", 4)
            settings.setdefault("p", "1/2")
        config = build_config(settings)
        store = RegressionStore(config.regression, record=not args.no_record)
        if command in SUITES:
            report = run_suite(command, config, store)
        elif command == "kernel":
            report = kernel_table(config.resolution, config.radix, budget=config.budget, store=store)
        elif command == "counterexample":
            report = counterexample_report(config)
        elif command == "maximal":
            report = maximal_report(config, store)
        else:
            p = next((v for v in config.p_values if v < 1), config.p_values[0])
            report = growth_experiment(p, SubsequenceFamily.parse(config.family), config.K, config.resolution,
                                       config.radix, store, config)
        default_fmt = "csv" if command == "kernel" and "format" not in settings else config.format
        text = emit(report, default_fmt, config.out)
    except VilenkinError as exc:
        print(f"vilenkin-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"vilenkin-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if config.out is None:
        sys.stdout.write(text)
    else:
        print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
