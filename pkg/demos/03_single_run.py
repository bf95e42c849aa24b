"""One traced optimization run on the three-bar truss.

    python demos/03_single_run.py
"""
from dso.engine import DsoConfig, run
from dso.problems import get_benchmark

entry = get_benchmark("three_bar_truss")
result = run(entry.problem, DsoConfig(budget=entry.budget), seed=7, trace=True)

print(f"best value      {result.best_value:.10f}  (published {entry.paper_dso.best})")
print(f"best design     {result.best_coordinate}")
print(f"found at eval   {result.found_at_evaluation} of {result.evaluations_used}")
print(f"iterations      {result.iterations}")
print(f"winning firmware {result.winning_firmware}")

# Convergence curve: best-so-far every 5 iterations
for rec in result.trace[::5]:
    print(f"  iter {rec.iteration:3d}  evals {rec.evaluations_used:5d}  best {rec.global_best:.6f}  teams {rec.firmware_digests}")
