"""Engineering design benchmarks: welded beam, pressure vessel, three-bar truss.

Standard literature formulations. Each evaluator takes a sequence of floats
and returns ``(objective, constraints)``; the split ``*_objective`` /
``*_constraints`` functions back the :class:`ProblemDefinition` objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ProblemDefinition

__all__ = [
    "CATALOG",
    "BenchmarkEntry",
    "ReferenceRow",
    "get_benchmark",
    "pressure_vessel",
    "problem_names",
    "three_bar_truss",
    "welded_beam",
]

SQRT2 = math.sqrt(2.0)

# welded beam constants
WB_LOAD = 6000.0
WB_LENGTH = 14.0
WB_E = 30e6
WB_G = 12e6
WB_TAU_MAX = 13600.0
WB_SIGMA_MAX = 30000.0
WB_DELTA_MAX = 0.25

# three-bar truss constants
TB_LOAD = 2.0
TB_SIGMA = 2.0


def _check_dim(x, n):
    if len(x) != n:
        raise ValueError(f"expected a coordinate of length {n}, got {len(x)}")


def welded_beam_objective(x):
    _check_dim(x, 4)
    h, l, t, b = x
    return 1.10471 * h * h * l + 0.04811 * t * b * (14.0 + l)


def welded_beam_constraints(x):
    _check_dim(x, 4)
    h, l, t, b = x
    P, L, E, G = WB_LOAD, WB_LENGTH, WB_E, WB_G

    tau_p = P / (SQRT2 * h * l)
    moment = P * (L + l / 2.0)
    half_sum = (h + t) / 2.0
    radius = math.sqrt(l * l / 4.0 + half_sum * half_sum)
    polar = 2.0 * (SQRT2 * h * l * (l * l / 12.0 + half_sum * half_sum))
    tau_pp = moment * radius / polar
    tau = math.sqrt(tau_p * tau_p + 2.0 * tau_p * tau_pp * l / (2.0 * radius) + tau_pp * tau_pp)

    sigma = 6.0 * P * L / (b * t * t)
    delta = 4.0 * P * L**3 / (E * t**3 * b)
    p_crit = (
        4.013 * E * math.sqrt(t * t * b**6 / 36.0) / (L * L)
        * (1.0 - t / (2.0 * L) * math.sqrt(E / (4.0 * G)))
    )
    return (
        tau - WB_TAU_MAX,
        sigma - WB_SIGMA_MAX,
        h - b,
        0.10471 * h * h + 0.04811 * t * b * (14.0 + l) - 5.0,
        0.125 - h,
        delta - WB_DELTA_MAX,
        P - p_crit,
    )


def welded_beam(x):
    """Welded beam: ``x = (h, l, t, b)``; 7 constraints."""
    return welded_beam_objective(x), welded_beam_constraints(x)


def pressure_vessel_objective(x):
    _check_dim(x, 4)
    ts, th, r, length = x
    return (
        0.6224 * ts * r * length
        + 1.7781 * th * r * r
        + 3.1661 * ts * ts * length
        + 19.84 * ts * ts * r
    )


def pressure_vessel_constraints(x):
    _check_dim(x, 4)
    ts, th, r, length = x
    return (
        -ts + 0.0193 * r,
        -th + 0.00954 * r,
        -math.pi * r * r * length - (4.0 / 3.0) * math.pi * r**3 + 1296000.0,
        length - 240.0,
    )


def pressure_vessel(x):
    """Pressure vessel, continuous thicknesses: ``x = (Ts, Th, R, L)``."""
    return pressure_vessel_objective(x), pressure_vessel_constraints(x)


def three_bar_truss_objective(x):
    _check_dim(x, 2)
    a1, a2 = x
    return (2.0 * SQRT2 * a1 + a2) * 100.0


def three_bar_truss_constraints(x):
    # Zero denominators raise ZeroDivisionError; evaluate() maps that to infeasible.
    _check_dim(x, 2)
    a1, a2 = x
    denom = SQRT2 * a1 * a1 + 2.0 * a1 * a2
    return (
        (SQRT2 * a1 + a2) / denom * TB_LOAD - TB_SIGMA,
        a2 / denom * TB_LOAD - TB_SIGMA,
        1.0 / (SQRT2 * a2 + a1) * TB_LOAD - TB_SIGMA,
    )


def three_bar_truss(x):
    """Three-bar truss: ``x = (A1, A2)``; 3 stress constraints."""
    return three_bar_truss_objective(x), three_bar_truss_constraints(x)


@dataclass(frozen=True)
class ReferenceRow:
    """One literature row of a results table, kept as printed ('-' = not available)."""

    method: str
    evaluations: str
    best: str
    average: str


@dataclass(frozen=True)
class BenchmarkEntry:
    problem: ProblemDefinition
    budget: int
    paper_dso: ReferenceRow
    references: tuple[ReferenceRow, ...]
    note: str = ""


WELDED_BEAM = ProblemDefinition(
    name="welded_beam",
    lower_bounds=[0.1, 0.1, 0.1, 0.1],
    upper_bounds=[2.0, 10.0, 10.0, 2.0],
    inequality_count=7,
    objective=welded_beam_objective,
    constraints=welded_beam_constraints,
)

PRESSURE_VESSEL = ProblemDefinition(
    name="pressure_vessel",
    lower_bounds=[0.0, 0.0, 10.0, 10.0],
    upper_bounds=[99.0, 99.0, 200.0, 200.0],
    inequality_count=4,
    objective=pressure_vessel_objective,
    constraints=pressure_vessel_constraints,
)

THREE_BAR_TRUSS = ProblemDefinition(
    name="three_bar_truss",
    lower_bounds=[0.0, 0.0],
    upper_bounds=[1.0, 1.0],
    inequality_count=3,
    objective=three_bar_truss_objective,
    constraints=three_bar_truss_constraints,
)

CATALOG: dict[str, BenchmarkEntry] = {
    "welded_beam": BenchmarkEntry(
        problem=WELDED_BEAM,
        budget=30000,
        paper_dso=ReferenceRow("DSO", "30,000", "1.72485230859736", "1.82878489196467"),
        references=(
            ReferenceRow("ABC", "30,000", "1.724852", "1.741913"),
            ReferenceRow("CSA", "100,000", "1.7248523086", "1.7248523086"),
            ReferenceRow("GA", "900,000", "1.748309", "1.771973"),
            ReferenceRow("MBA", "47,370", "1.724853", "1.724853"),
            ReferenceRow("PSO-DE", "66,600", "1.724852", "1.724852"),
            ReferenceRow("SC", "33,095", "2.3854347", "3.0025883"),
        ),
    ),
    "pressure_vessel": BenchmarkEntry(
        problem=PRESSURE_VESSEL,
        budget=30000,
        paper_dso=ReferenceRow("DSO", "30,000", "5885.3332019268", "6489.2853259488"),
        references=(
            ReferenceRow("ABC", "30,000", "6059.714736", "6245.308144"),
            ReferenceRow("CSA", "250,000", "6059.71436343", "6342.49910551"),
            ReferenceRow("GA", "900,000", "6288.7445", "6293.8432"),
            ReferenceRow("MBA", "70,650", "5889.3216", "6200.64765"),
            ReferenceRow("PSO-DE", "42,100", "6059.714", "6059.714"),
            ReferenceRow("SC", "-", "-", "-"),
        ),
        note=(
            "Shell and head thicknesses are treated as continuous. Rows near "
            "6059.71 come from the discrete-thickness variant (multiples of "
            "0.0625 in) and are not directly comparable."
        ),
    ),
    "three_bar_truss": BenchmarkEntry(
        problem=THREE_BAR_TRUSS,
        budget=3000,
        paper_dso=ReferenceRow("DSO", "3000", "263.895843376498", "264.067092887924"),
        references=(
            ReferenceRow("ABC", "-", "-", "-"),
            ReferenceRow("CSA", "25,000", "263.8958433765", "263.8958433765"),
            ReferenceRow("GA", "-", "-", "-"),
            ReferenceRow("MBA", "13,280", "263.895852", "263.897996"),
            ReferenceRow("PSO-DE", "17,600", "263.895843", "263.895843"),
            ReferenceRow("SC", "17,610", "263.895846", "263.903356"),
        ),
    ),
}


def problem_names() -> list[str]:
    return list(CATALOG)


def get_benchmark(name: str) -> BenchmarkEntry:
    """Look up a catalog entry; hyphens and underscores are interchangeable."""
    key = name.strip().lower().replace("-", "_")
    try:
        return CATALOG[key]
    except KeyError:
        valid = ", ".join(n.replace("_", "-") for n in CATALOG)
        raise KeyError(f"unknown problem {name!r}; valid problems: {valid}") from None
