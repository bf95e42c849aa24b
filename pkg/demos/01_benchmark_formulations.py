"""The three engineering benchmarks and the death penalty.

Evaluates each problem at its best known design, then shows how an
infeasible design is flattened onto the realmax plateau.

    python demos/01_benchmark_formulations.py
"""
import numpy as np

from dso.model import PENALTY_VALUE, evaluate
from dso.problems import CATALOG

best_known = {
    "welded_beam": (0.205730, 3.470489, 9.036624, 0.205730),
    "pressure_vessel": (0.778169, 0.384649, 40.319619, 200.0),
    "three_bar_truss": (0.788675, 0.408248),
}

for name, entry in CATALOG.items():
    p = entry.problem
    ev = evaluate(p, best_known[name])
    print(f"{name}: n={p.dimension}, {p.inequality_count} constraints, budget {entry.budget}")
    print(f"  f(best known) = {ev.objective:.6f}   published best {entry.paper_dso.best}")
    print(f"  max g = {max(ev.constraint_values):.3e}   feasible = {ev.feasible}")

# Sample the box: what fraction of random designs is feasible?
rng = np.random.default_rng(0)
for name, entry in CATALOG.items():
    p = entry.problem
    evs = [evaluate(p, p.random_coordinate(rng)) for _ in range(5000)]
    frac = np.mean([e.feasible for e in evs])
    plateau = {e.penalized for e in evs if not e.feasible}
    print(f"{name}: {frac:.1%} of uniform samples feasible; infeasible values {plateau}")

print("realmax =", PENALTY_VALUE)
