"""Multi-run experiments, summary statistics and CSV / Markdown reports."""

from __future__ import annotations

import csv
import dataclasses
import io
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .engine import ConfigError, DsoConfig, RunResult, run
from .model import PENALTY_VALUE
from .problems import get_benchmark

__all__ = [
    "CSV_HEADER",
    "ExperimentError",
    "ExperimentSpec",
    "RunStatistics",
    "summarize",
    "run_experiment",
    "format_csv",
    "format_markdown",
    "emit_report",
    "write_report",
    "load_config_file",
]

CSV_HEADER = (
    "problem", "method", "runs", "evaluations", "best", "mean",
    "median", "worst", "std", "feasible_runs", "base_seed",
)


class ExperimentError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentSpec:
    problem: str
    runs: int = 50
    config: DsoConfig = field(default_factory=DsoConfig)
    base_seed: int = 1
    output_path: str | None = None

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        entry = get_benchmark(self.problem)
        object.__setattr__(self, "problem", entry.problem.name)
        if self.config.budget is None:
            object.__setattr__(self, "config", dataclasses.replace(self.config, budget=entry.budget))

    @property
    def budget(self) -> int:
        return self.config.budget

    def seed_for(self, run_index: int) -> int:
        return self.base_seed + run_index


@dataclass(frozen=True)
class RunStatistics:
    best: float
    mean: float
    median: float
    worst: float
    std: float
    feasible_runs: int
    per_run: tuple[RunResult, ...] = ()

    @property
    def runs(self) -> int:
        return len(self.per_run)

    @property
    def contaminated(self) -> bool:
        """True when some run never found a feasible point (its best is the penalty)."""
        return self.feasible_runs < len(self.per_run)


def summarize(values, per_run=(), feasible_runs=None) -> RunStatistics:
    """Best/mean/median/worst and sample standard deviation of run bests.

    ``std`` is 0 for a single run.
    """
    values = [float(v) for v in values]
    if not values:
        raise ValueError("need at least one value")
    # realmax entries overflow both sums; report them as inf-sized spread
    try:
        mean = math.fsum(values) / len(values)
    except OverflowError:
        mean = max(values)
    try:
        std = statistics.stdev(values) if len(values) > 1 else 0.0
    except OverflowError:
        std = math.inf
    if feasible_runs is None:
        feasible_runs = sum(v < PENALTY_VALUE for v in values)
    return RunStatistics(
        best=min(values),
        mean=min(max(mean, min(values)), max(values)),
        median=statistics.median(values),
        worst=max(values),
        std=std,
        feasible_runs=feasible_runs,
        per_run=tuple(per_run),
    )


def _one_run(problem_name: str, config: DsoConfig, seed: int, trace: bool) -> RunResult:
    return run(get_benchmark(problem_name).problem, config, seed=seed, trace=trace)


def run_experiment(spec: ExperimentSpec, workers: int = 1, trace: bool = False) -> RunStatistics:
    """Execute ``spec.runs`` independent runs (seeds ``base_seed + i``) and aggregate.

    With ``workers > 1`` runs are fanned out to processes; results are still
    ordered by run index so reports do not depend on scheduling.
    """
    seeds = [spec.seed_for(i) for i in range(spec.runs)]
    results: list[RunResult] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_one_run, spec.problem, spec.config, s, trace) for s in seeds]
            for i, fut in enumerate(futures):
                try:
                    results.append(fut.result())
                except (ConfigError, ValueError) as exc:
                    raise ExperimentError(f"run {i} (seed {seeds[i]}) failed: {exc}") from exc
    else:
        for i, s in enumerate(seeds):
            try:
                results.append(_one_run(spec.problem, spec.config, s, trace))
            except (ConfigError, ValueError) as exc:
                raise ExperimentError(f"run {i} (seed {s}) failed: {exc}") from exc
    return summarize(
        [r.best_value for r in results],
        per_run=results,
        feasible_runs=sum(r.best_feasible for r in results),
    )


def _real(v: float) -> str:
    return format(v, ".17g")


def format_csv(experiments) -> str:
    """One header plus one row per ``(spec, stats)`` pair."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for spec, stats in experiments:
        writer.writerow([
            spec.problem, "DSO", stats.runs, spec.budget,
            _real(stats.best), _real(stats.mean), _real(stats.median),
            _real(stats.worst), _real(stats.std), stats.feasible_runs, spec.base_seed,
        ])
    return buf.getvalue()


def _md_value(v: float) -> str:
    return "realmax (infeasible)" if v >= PENALTY_VALUE else f"{v:.10g}"


def format_markdown(experiments) -> str:
    lines = []
    for spec, stats in experiments:
        entry = get_benchmark(spec.problem)
        title = spec.problem.replace("_", " ").capitalize()
        lines += [
            f"## {title}",
            "",
            "| Method | Evaluations | Best | Average |",
            "|---|---|---|---|",
            f"| DSO (this build, {stats.runs} runs) | {spec.budget} "
            f"| {_md_value(stats.best)} | {_md_value(stats.mean)} |",
        ]
        for row in (entry.paper_dso,) + entry.references:
            label = "DSO (published)" if row is entry.paper_dso else row.method
            lines.append(f"| {label} | {row.evaluations} | {row.best} | {row.average} |")
        lines += [
            "",
            f"Median {_md_value(stats.median)}, worst {_md_value(stats.worst)}, "
            f"std {stats.std:.6g}, feasible runs {stats.feasible_runs}/{stats.runs}, "
            f"base seed {spec.base_seed}.",
        ]
        if stats.contaminated:
            lines.append(
                f"\n**Warning:** {stats.runs - stats.feasible_runs} run(s) found no feasible "
                "point; their bests enter the statistics as realmax."
            )
        if entry.note:
            lines += ["", f"Note: {entry.note}"]
        lines += [
            "",
            "### Per-run results",
            "",
            "| Seed | Best | Feasible | Found at | Winning firmware |",
            "|---|---|---|---|---|",
        ]
        for r in stats.per_run:
            lines.append(
                f"| {r.seed} | {_real(r.best_value)} | {'yes' if r.best_feasible else 'no'} "
                f"| {r.found_at_evaluation} | `{r.winning_firmware}` |"
            )
        lines.append("")
    return "\n".join(lines)


def emit_report(stats: RunStatistics, spec: ExperimentSpec, fmt: str = "csv", path=None) -> str:
    """Render one experiment as ``csv`` or ``markdown``; write it to ``path`` if given."""
    return write_report([(spec, stats)], fmt, path if path is not None else spec.output_path)


def write_report(experiments, fmt: str, path=None) -> str:
    if fmt == "csv":
        text = format_csv(experiments)
    elif fmt == "markdown":
        text = format_markdown(experiments)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
    return text


_CONFIG_FIELDS = {f.name: f for f in dataclasses.fields(DsoConfig)}
_INT_FIELDS = {"teams", "drones_per_team", "max_stagnation", "commander_iter", "budget", "seed"}


def load_config_file(path) -> dict:
    """Read ``key = value`` lines (``#`` comments) into DsoConfig keyword arguments."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not sep or not key or not value:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        if key not in _CONFIG_FIELDS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = int(value) if key in _INT_FIELDS else float(value)
        except ValueError:
            raise ValueError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return out
