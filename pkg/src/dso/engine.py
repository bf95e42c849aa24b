"""Drone Squadron Optimization search loop.

Teams of drones propose candidates with their team's firmware; a command
center periodically rewrites the least successful team's firmware from the
most successful ones. Stagnating teams and a collapsed population are
re-seeded at random.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .firmware import (
    EvalContext,
    Firmware,
    mutate_firmware,
    recombine_firmware,
)
from .model import (
    DEATH_PENALTY,
    PENALTY_VALUE,
    ConstrainedEvaluation,
    CountingEvaluator,
    PenaltyPolicy,
    ProblemDefinition,
    clamp_to_bounds,
)

__all__ = [
    "SEED_TEMPLATES",
    "ConfigError",
    "DsoConfig",
    "Drone",
    "Team",
    "Squadron",
    "RunResult",
    "TraceRecord",
    "initialize",
    "step",
    "command_center_update",
    "apply_countermeasures",
    "run",
]

logger = logging.getLogger(__name__)

SEED_TEMPLATES = (
    "tb + C1*(r1 - r2)",
    "x + C1*U*(tb - x) + C2*U*(gb - x)",
    "x + N*(gb - x)",
    "r1 + U*(gb - r1)",
)


class ConfigError(ValueError):
    """Invalid :class:`DsoConfig` or a budget too small for the population."""


@dataclass(frozen=True)
class DsoConfig:
    teams: int = 4
    drones_per_team: int = 15
    c1: float = 0.5
    c2: float = 0.3
    c3: float = 0.7
    max_stagnation: int = 50
    pacc: float = 0.5
    commander_iter: int = 2
    conv_thres: float = 1e-8
    budget: int | None = None
    seed: int = 1

    def __post_init__(self):
        if self.teams < 2:
            raise ConfigError(f"teams must be >= 2, got {self.teams}")
        if self.drones_per_team < 3:
            raise ConfigError(f"drones_per_team must be >= 3, got {self.drones_per_team}")
        if not 0.0 <= self.pacc <= 1.0:
            raise ConfigError(f"pacc must be in [0, 1], got {self.pacc}")
        if self.commander_iter < 1:
            raise ConfigError(f"commander_iter must be >= 1, got {self.commander_iter}")
        if self.max_stagnation < 1:
            raise ConfigError(f"max_stagnation must be >= 1, got {self.max_stagnation}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.budget is not None and self.budget < self.population:
            raise ConfigError(
                f"budget {self.budget} is smaller than the initial population of {self.population}"
            )

    @property
    def population(self) -> int:
        return self.teams * self.drones_per_team


@dataclass
class Drone:
    position: np.ndarray
    evaluation: ConstrainedEvaluation


@dataclass
class Team:
    firmware: Firmware
    drones: list[Drone]
    best_position: np.ndarray
    best: ConstrainedEvaluation
    improvements_since_command: int = 0
    stagnation_counter: int = 0
    improved_this_iteration: bool = False


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    evaluations_used: int
    global_best: float
    firmware_digests: tuple[str, ...]

    def __str__(self):
        return (
            f"iter={self.iteration} evals={self.evaluations_used} "
            f"best={self.global_best!r} firmware={','.join(self.firmware_digests)}"
        )


@dataclass
class Squadron:
    teams: list[Team]
    best_position: np.ndarray
    best: ConstrainedEvaluation
    found_at_evaluation: int
    winning_firmware: str
    evaluator: CountingEvaluator
    rng: np.random.Generator
    iteration: int = 0
    trace: list[TraceRecord] | None = None

    @property
    def evaluations_used(self) -> int:
        return self.evaluator.count

    @property
    def drones(self) -> list[Drone]:
        return [d for team in self.teams for d in team.drones]


@dataclass(frozen=True)
class RunResult:
    best_value: float
    best_coordinate: np.ndarray
    best_feasible: bool
    evaluations_used: int
    winning_firmware: str
    iterations: int
    seed: int
    found_at_evaluation: int = 0
    trace: tuple[TraceRecord, ...] = field(default=(), repr=False)


def _record(squadron: Squadron, team: Team, position: np.ndarray, ev: ConstrainedEvaluation):
    """Fold a freshly evaluated point into team and global bests."""
    if ev.penalized < team.best.penalized:
        team.best = ev
        team.best_position = position
        team.improved_this_iteration = True
    if ev.penalized < squadron.best.penalized:
        squadron.best = ev
        squadron.best_position = position
        squadron.found_at_evaluation = squadron.evaluator.count
        squadron.winning_firmware = team.firmware.source


def initialize(
    problem: ProblemDefinition,
    config: DsoConfig,
    seed: int | None = None,
    policy: PenaltyPolicy = DEATH_PENALTY,
) -> Squadron:
    """Scatter the squadron uniformly and evaluate every drone once."""
    if config.budget is None:
        raise ConfigError("config.budget must be set")
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    evaluator = CountingEvaluator(problem, config.budget, policy)

    teams = []
    for k in range(config.teams):
        drones = []
        for _ in range(config.drones_per_team):
            pos = problem.random_coordinate(rng)
            drones.append(Drone(pos, evaluator(pos)))
        lead = min(drones, key=lambda d: d.evaluation.penalized)
        teams.append(
            Team(
                firmware=Firmware.from_source(SEED_TEMPLATES[k % len(SEED_TEMPLATES)]),
                drones=drones,
                best_position=lead.position,
                best=lead.evaluation,
            )
        )
    lead_team = min(teams, key=lambda t: t.best.penalized)
    return Squadron(
        teams=teams,
        best_position=lead_team.best_position,
        best=lead_team.best,
        found_at_evaluation=evaluator.count,
        winning_firmware=lead_team.firmware.source,
        evaluator=evaluator,
        rng=rng,
    )


def _sweep(squadron: Squadron, problem: ProblemDefinition, config: DsoConfig):
    rng = squadron.rng
    evaluator = squadron.evaluator
    everyone = squadron.drones
    n_all = len(everyone)
    idx = 0
    for team in squadron.teams:
        firmware = team.firmware
        for drone in team.drones:
            if evaluator.remaining <= 0:
                return
            # two distinct partners, both different from this drone
            a = int(rng.integers(n_all - 1))
            b = int(rng.integers(n_all - 2))
            if b >= a:
                b += 1
            a += a >= idx
            b += b >= idx
            ctx = EvalContext(
                x=drone.position,
                tb=team.best_position,
                gb=squadron.best_position,
                r1=everyone[a].position,
                r2=everyone[b].position,
                rng=rng,
                c1=config.c1,
                c2=config.c2,
                c3=config.c3,
            )
            candidate = clamp_to_bounds(firmware(ctx), problem, rng)
            ev = evaluator(candidate)
            improved = ev.penalized < drone.evaluation.penalized
            if improved or (ev.feasible and rng.random() < config.pacc):
                drone.position = candidate
                drone.evaluation = ev
            if improved:
                team.improvements_since_command += 1
            _record(squadron, team, candidate, ev)
            idx += 1


def step(squadron: Squadron, problem: ProblemDefinition, config: DsoConfig) -> Squadron:
    """Advance one iteration in place and return the squadron."""
    if squadron.evaluator.remaining <= 0:
        raise ValueError("evaluation budget already exhausted")
    previous_best = squadron.best.penalized
    for team in squadron.teams:
        team.improved_this_iteration = False

    _sweep(squadron, problem, config)
    squadron.iteration += 1
    for team in squadron.teams:
        team.stagnation_counter = 0 if team.improved_this_iteration else team.stagnation_counter + 1

    if squadron.iteration % config.commander_iter == 0:
        command_center_update(squadron, config)
    apply_countermeasures(squadron, problem, config)

    assert squadron.best.penalized <= previous_best, "global best regressed"
    if squadron.trace is not None:
        rec = TraceRecord(
            squadron.iteration,
            squadron.evaluations_used,
            squadron.best.penalized,
            tuple(t.firmware.digest for t in squadron.teams),
        )
        squadron.trace.append(rec)
        logger.info("%s", rec)
    return squadron


def command_center_update(squadron: Squadron, config: DsoConfig) -> Squadron:
    """Rewrite the firmware of the team with the fewest accepted moves.

    Ties rank the lower team index higher. The replacement is a mutation of
    the top team's firmware or, with equal probability, a crossover of the
    top two. Counters are reset afterwards.
    """
    teams = squadron.teams
    order = sorted(range(len(teams)), key=lambda k: (-teams[k].improvements_since_command, k))
    best, second, worst = teams[order[0]], teams[order[1]], teams[order[-1]]
    rng = squadron.rng
    if rng.random() < 0.5:
        tree = mutate_firmware(best.firmware.tree, rng)
    else:
        tree = recombine_firmware(best.firmware.tree, second.firmware.tree, rng)
    worst.firmware = Firmware(tree)
    for team in teams:
        team.improvements_since_command = 0
    return squadron


def _redraw(squadron: Squadron, problem: ProblemDefinition, team: Team, drone: Drone) -> bool:
    if squadron.evaluator.remaining <= 0:
        return False
    drone.position = problem.random_coordinate(squadron.rng)
    drone.evaluation = squadron.evaluator(drone.position)
    _record(squadron, team, drone.position, drone.evaluation)
    return True


def apply_countermeasures(squadron: Squadron, problem: ProblemDefinition, config: DsoConfig) -> Squadron:
    """Restart stagnant teams, then restart everyone but the leader on collapse."""
    for team in squadron.teams:
        if team.stagnation_counter >= config.max_stagnation:
            for drone in team.drones:
                if not _redraw(squadron, problem, team, drone):
                    break
            team.stagnation_counter = 0

    values = [d.evaluation.penalized for d in squadron.drones]
    hi = max(values)
    if hi < PENALTY_VALUE and hi - min(values) < config.conv_thres:
        keep = values.index(min(values))
        i = 0
        for team in squadron.teams:
            for drone in team.drones:
                if i != keep and not _redraw(squadron, problem, team, drone):
                    return squadron
                i += 1
    return squadron


def _result(squadron: Squadron, seed: int) -> RunResult:
    return RunResult(
        best_value=squadron.best.penalized,
        best_coordinate=squadron.best_position.copy(),
        best_feasible=squadron.best.feasible,
        evaluations_used=squadron.evaluations_used,
        winning_firmware=squadron.winning_firmware,
        iterations=squadron.iteration,
        seed=seed,
        found_at_evaluation=squadron.found_at_evaluation,
        trace=tuple(squadron.trace or ()),
    )


def run(
    problem: ProblemDefinition,
    config: DsoConfig,
    *,
    seed: int | None = None,
    trace: bool = False,
    policy: PenaltyPolicy = DEATH_PENALTY,
) -> RunResult:
    """Optimize ``problem`` until exactly ``config.budget`` evaluations are spent."""
    seed = config.seed if seed is None else seed
    squadron = initialize(problem, config, seed, policy)
    if trace:
        squadron.trace = []
    while squadron.evaluations_used < config.budget:
        step(squadron, problem, config)
    return _result(squadron, seed)


def with_budget(config: DsoConfig, budget: int) -> DsoConfig:
    return replace(config, budget=budget)
