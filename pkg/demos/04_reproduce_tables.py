"""Reproduce the three results tables: 50 seeded runs per problem.

Takes about two minutes on one core. Writes a Markdown report with the
literature rows and per-run details.

    python demos/04_reproduce_tables.py [runs] [report.md]
"""
import sys
import time

from dso.harness import ExperimentSpec, run_experiment, write_report

runs = int(sys.argv[1]) if len(sys.argv) > 1 else 50
path = sys.argv[2] if len(sys.argv) > 2 else "dso_tables.md"

experiments = []
for name in ("welded_beam", "pressure_vessel", "three_bar_truss"):
    t0 = time.perf_counter()
    spec = ExperimentSpec(name, runs=runs)
    stats = run_experiment(spec)
    experiments.append((spec, stats))
    print(
        f"{name:16s} best {stats.best:.8g}  mean {stats.mean:.8g}  worst {stats.worst:.8g}"
        f"  feasible {stats.feasible_runs}/{runs}  ({time.perf_counter() - t0:.0f}s)"
    )

write_report(experiments, "markdown", path)
print("report written to", path)
