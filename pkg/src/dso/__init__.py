"""Drone Squadron Optimization with death-penalty constraint handling."""

from .engine import DsoConfig, RunResult, run
from .firmware import Firmware, parse, serialize
from .harness import ExperimentSpec, RunStatistics, run_experiment
from .model import PENALTY_VALUE, ProblemDefinition, clamp_to_bounds, evaluate
from .problems import CATALOG, get_benchmark

__all__ = [
    "CATALOG",
    "PENALTY_VALUE",
    "DsoConfig",
    "ExperimentSpec",
    "Firmware",
    "ProblemDefinition",
    "RunResult",
    "RunStatistics",
    "clamp_to_bounds",
    "evaluate",
    "get_benchmark",
    "parse",
    "run",
    "run_experiment",
    "serialize",
]

__version__ = "0.1.0"
