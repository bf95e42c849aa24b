"""Command-line entry point: ``dso run | list-problems | eval``.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .engine import ConfigError, DsoConfig
from .harness import ExperimentError, ExperimentSpec, load_config_file, run_experiment, write_report
from .model import evaluate
from .problems import CATALOG, get_benchmark

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

PROBLEM_CHOICES = [name.replace("_", "-") for name in CATALOG]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dso", description="Drone Squadron Optimization on constrained engineering benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="run a seeded multi-run experiment")
    p_run.add_argument("--problem", required=True, help=f"one of {', '.join(PROBLEM_CHOICES)} or 'all'")
    p_run.add_argument("--runs", type=int, default=None, help="independent runs (default 50)")
    p_run.add_argument("--budget", type=int, default=None, help="evaluations per run (default: catalog)")
    p_run.add_argument("--seed", type=int, default=None, help="base seed; run i uses seed+i (default 1)")
    p_run.add_argument("--out", default=None, help="report path (default: stdout)")
    p_run.add_argument("--format", choices=("csv", "markdown"), default="csv")
    p_run.add_argument("--config", default=None, help="key = value parameter file")
    p_run.add_argument("--workers", type=int, default=1, help="worker processes")
    p_run.add_argument("--trace", action="store_true", help="log one line per iteration to stderr")

    sub.add_parser("list-problems", help="print the benchmark catalog")

    p_eval = sub.add_parser("eval", help="evaluate one coordinate")
    p_eval.add_argument("--problem", required=True)
    p_eval.add_argument("--x", required=True, help="comma-separated coordinate, e.g. --x=1,1")
    return parser


def _problems(name: str) -> list[str]:
    if name == "all":
        return list(CATALOG)
    try:
        return [get_benchmark(name).problem.name]
    except KeyError:
        raise UsageError(
            f"unknown problem {name!r}; valid problems: {', '.join(PROBLEM_CHOICES)}, all"
        ) from None


def _cmd_run(args) -> int:
    names = _problems(args.problem)
    overrides = {}
    if args.config:
        try:
            overrides.update(load_config_file(args.config))
        except OSError as exc:
            raise UsageError(f"cannot read config file {args.config}: {exc.strerror}") from None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.budget is not None:
        overrides["budget"] = args.budget
    if args.seed is not None:
        overrides["seed"] = args.seed
    runs = 50 if args.runs is None else args.runs
    if runs < 1:
        raise UsageError("--runs must be >= 1")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    try:
        config = DsoConfig(**overrides)
    except ConfigError as exc:
        raise UsageError(str(exc)) from None

    if args.trace:
        logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="%(message)s")
        logging.getLogger("dso.engine").setLevel(logging.INFO)

    experiments = []
    for name in names:
        try:
            spec = ExperimentSpec(name, runs=runs, config=config, base_seed=config.seed, output_path=args.out)
        except (ConfigError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        experiments.append((spec, run_experiment(spec, workers=args.workers, trace=args.trace)))

    text = write_report(experiments, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_list(args) -> int:
    for name, entry in CATALOG.items():
        p = entry.problem
        bounds = ", ".join(f"[{lo:g}, {hi:g}]" for lo, hi in zip(p.lower_bounds, p.upper_bounds))
        print(
            f"{name.replace('_', '-')}: n={p.dimension} constraints={p.inequality_count} "
            f"budget={entry.budget} bounds={bounds}"
        )
    return EXIT_OK


def _cmd_eval(args) -> int:
    problem = get_benchmark(_problems(args.problem)[0]).problem
    try:
        x = [float(v) for v in args.x.split(",")]
    except ValueError:
        raise UsageError(f"--x must be comma-separated numbers, got {args.x!r}") from None
    if len(x) != problem.dimension:
        raise UsageError(f"{problem.name} needs {problem.dimension} values, got {len(x)}")
    ev = evaluate(problem, x)
    print(f"problem: {problem.name}")
    print(f"x: {', '.join(repr(v) for v in x)}")
    print(f"objective: {ev.objective!r}")
    for i, g in enumerate(ev.constraint_values, 1):
        print(f"g{i}: {g!r}")
    print(f"feasible: {'yes' if ev.feasible else 'no'}")
    print(f"penalized: {ev.penalized!r}")
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "list-problems": _cmd_list, "eval": _cmd_eval}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ExperimentError, OSError, RuntimeError) as exc:
        print(f"dso: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
