"""Constrained minimization problems, bound repair and death-penalty evaluation."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "PENALTY_VALUE",
    "FEASIBILITY_TOL",
    "BudgetExhaustedError",
    "ConstrainedEvaluation",
    "CountingEvaluator",
    "PenaltyKind",
    "PenaltyPolicy",
    "ProblemDefinition",
    "clamp_to_bounds",
    "evaluate",
]

#: Largest finite double (MATLAB's ``realmax``); every infeasible point scores this.
PENALTY_VALUE = sys.float_info.max

#: Absolute slack on each ``g_i <= 0``. Published optima are quoted to six
#: decimals and sit ~1e-7 outside their active constraints.
FEASIBILITY_TOL = 1e-6


class BudgetExhaustedError(RuntimeError):
    """Raised when an evaluation is requested past the configured budget."""


@dataclass(frozen=True)
class ProblemDefinition:
    """Box-bounded minimization problem with inequality constraints ``g(x) <= 0``.

    ``objective`` maps a coordinate to a float, ``constraints`` to a sequence
    of ``inequality_count`` floats.
    """

    name: str
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    inequality_count: int
    objective: Callable[[Sequence[float]], float]
    constraints: Callable[[Sequence[float]], Sequence[float]]

    def __post_init__(self):
        lower = np.asarray(self.lower_bounds, dtype=float)
        upper = np.asarray(self.upper_bounds, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ValueError("lower_bounds and upper_bounds must be 1-D of equal length")
        if not np.all(lower < upper):
            raise ValueError("lower_bounds must be strictly below upper_bounds")
        if self.inequality_count < 0:
            raise ValueError("inequality_count must be non-negative")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower_bounds", lower)
        object.__setattr__(self, "upper_bounds", upper)

    @property
    def dimension(self) -> int:
        return self.lower_bounds.shape[0]

    def random_coordinate(self, rng: np.random.Generator) -> np.ndarray:
        """Uniform draw inside the box."""
        return self.lower_bounds + rng.random(self.dimension) * (self.upper_bounds - self.lower_bounds)


@dataclass(frozen=True)
class ConstrainedEvaluation:
    objective: float
    constraint_values: tuple[float, ...]
    feasible: bool
    penalized: float


class PenaltyKind(Enum):
    DEATH_PENALTY = "death_penalty"


@dataclass(frozen=True)
class PenaltyPolicy:
    kind: PenaltyKind = PenaltyKind.DEATH_PENALTY
    penalty_value: float = PENALTY_VALUE
    feasibility_tol: float = FEASIBILITY_TOL


DEATH_PENALTY = PenaltyPolicy()


def clamp_to_bounds(x, problem: ProblemDefinition, rng: np.random.Generator | None = None) -> np.ndarray:
    """Project ``x`` onto the box of ``problem``.

    Non-finite components are replaced by a uniform draw from ``rng`` inside
    their bounds (``rng`` is then required).
    """
    x = np.asarray(x, dtype=float)
    if x.shape != problem.lower_bounds.shape:
        raise ValueError(
            f"coordinate has shape {x.shape}, expected ({problem.dimension},)"
        )
    lower, upper = problem.lower_bounds, problem.upper_bounds
    bad = ~np.isfinite(x)
    if bad.any():
        if rng is None:
            raise ValueError("non-finite coordinate needs a random stream for repair")
        x = x.copy()
        for k in np.flatnonzero(bad):
            x[k] = lower[k] + rng.random() * (upper[k] - lower[k])
    return np.minimum(upper, np.maximum(lower, x))


def evaluate(problem: ProblemDefinition, x, policy: PenaltyPolicy = DEATH_PENALTY) -> ConstrainedEvaluation:
    """Evaluate ``x`` and apply the death penalty.

    Infeasible points (any ``g_i`` above tolerance, or any non-finite output)
    get ``policy.penalty_value`` assigned rather than added.
    """
    xs = x.tolist() if isinstance(x, np.ndarray) else list(x)
    with np.errstate(all="ignore"):
        try:
            f = float(problem.objective(xs))
        except (ZeroDivisionError, OverflowError, ValueError):
            f = math.nan
        try:
            g = tuple(float(v) for v in problem.constraints(xs))
        except (ZeroDivisionError, OverflowError, ValueError):
            g = (math.nan,) * problem.inequality_count
    tol = policy.feasibility_tol
    feasible = math.isfinite(f) and all(math.isfinite(v) and v <= tol for v in g)
    return ConstrainedEvaluation(f, g, feasible, f if feasible else policy.penalty_value)


@dataclass
class CountingEvaluator:
    """Single gateway for objective calls within one run; enforces the budget."""

    problem: ProblemDefinition
    budget: int
    policy: PenaltyPolicy = DEATH_PENALTY
    count: int = field(default=0, init=False)

    @property
    def remaining(self) -> int:
        return self.budget - self.count

    def __call__(self, x) -> ConstrainedEvaluation:
        if self.count >= self.budget:
            raise BudgetExhaustedError(f"budget of {self.budget} evaluations exhausted")
        self.count += 1
        return evaluate(self.problem, x, self.policy)
