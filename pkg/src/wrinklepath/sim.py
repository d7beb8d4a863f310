"""Forward execution of plans, exact and under a calibrated turn-error model."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Union

import numpy as np

from .geometry import DomainError, Pose, advance, normalize_signed, rotate_in_place
from .planner import Grow, Plan
from .wrinkle import Direction

RNG_ALGORITHM = "numpy.PCG64"

DEFAULT_TURN_SIGMA = math.radians(1.5)
DEFAULT_MAX_CONSECUTIVE = 10


@dataclass(frozen=True)
class ErrorModel:
    """Per-turn angle error.

    Each turn has magnitude ``turn_mean - degradation_per_repeat * (c - 1)``
    plus gaussian noise, where ``c`` counts consecutive turns in the same
    direction (a turn the other way resets it to 1). Turn number
    ``max_consecutive_same_dir + 1`` in one direction fails the run.
    ``turn_mean=None`` uses the plan's own increment.
    """

    turn_mean: Optional[float] = None
    turn_sigma: float = DEFAULT_TURN_SIGMA
    degradation_per_repeat: float = 0.0
    max_consecutive_same_dir: int = DEFAULT_MAX_CONSECUTIVE
    seed: int = 0
    distribution: str = "gaussian"

    def __post_init__(self):
        if not self.turn_sigma >= 0:
            raise DomainError(f"turn_sigma must be >= 0, got {self.turn_sigma!r}")
        if not self.degradation_per_repeat >= 0:
            raise DomainError(f"degradation_per_repeat must be >= 0, got {self.degradation_per_repeat!r}")
        if int(self.max_consecutive_same_dir) != self.max_consecutive_same_dir or self.max_consecutive_same_dir < 1:
            raise DomainError(f"max_consecutive_same_dir must be an integer >= 1, got {self.max_consecutive_same_dir!r}")
        if self.distribution != "gaussian":
            raise DomainError(f"unsupported distribution {self.distribution!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError(f"seed must fit in 64 bits, got {self.seed!r}")

    @classmethod
    def noise_free(cls, turn_mean: Optional[float] = None, **kw) -> "ErrorModel":
        return cls(turn_mean=turn_mean, turn_sigma=0.0, **kw)

    @classmethod
    def single_turn_group(cls, **kw) -> "ErrorModel":
        """Isolated turns with a reset between them: 21.5 ± 1.5 deg."""
        return cls(turn_mean=math.radians(21.5), turn_sigma=math.radians(1.5), **kw)

    @classmethod
    def alternating_group(cls, **kw) -> "ErrorModel":
        """Alternating left/right turns: 21 ± 2 deg."""
        return cls(turn_mean=math.radians(21.0), turn_sigma=math.radians(2.0), **kw)


@dataclass(frozen=True)
class Grew:
    length: float
    kind: str = field(default="grew", init=False)


@dataclass(frozen=True)
class Turned:
    direction: Direction
    angle: float
    kind: str = field(default="turned", init=False)


@dataclass(frozen=True)
class Failed:
    reason: str
    kind: str = field(default="failed", init=False)


Event = Union[Grew, Turned, Failed]


@dataclass(frozen=True)
class SimTrace:
    poses: tuple
    events: tuple
    rng: Optional[str] = None

    @property
    def terminal(self) -> Pose:
        return self.poses[-1]

    @property
    def failed(self) -> bool:
        return bool(self.events) and isinstance(self.events[-1], Failed)

    @property
    def turn_angles(self) -> List[float]:
        return [e.angle for e in self.events if isinstance(e, Turned)]

    @property
    def grown(self) -> float:
        return math.fsum(e.length for e in self.events if isinstance(e, Grew))


def execute(plan: Plan, start: Pose) -> SimTrace:
    poses = [start]
    events: List[Event] = []
    p = start
    for prim in plan.primitives:
        if isinstance(prim, Grow):
            p = advance(p, prim.length)
            events.append(Grew(prim.length))
        else:
            p = rotate_in_place(p, prim.direction.sign * plan.increment)
            events.append(Turned(prim.direction, plan.increment))
        poses.append(p)
    return SimTrace(tuple(poses), tuple(events))


def execute_noisy(plan: Plan, start: Pose, em: ErrorModel) -> SimTrace:
    rng = np.random.Generator(np.random.PCG64(int(em.seed)))
    mean = plan.increment if em.turn_mean is None else em.turn_mean
    poses = [start]
    events: List[Event] = []
    p = start
    last_dir: Optional[Direction] = None
    run = 0
    for prim in plan.primitives:
        if isinstance(prim, Grow):
            p = advance(p, prim.length)
            events.append(Grew(prim.length))
            poses.append(p)
            continue
        run = run + 1 if prim.direction is last_dir else 1
        last_dir = prim.direction
        if run > em.max_consecutive_same_dir:
            events.append(Failed(f"{run} consecutive {prim.direction.value} turns exceed limit {em.max_consecutive_same_dir}"))
            break
        angle = mean - em.degradation_per_repeat * (run - 1)
        if em.turn_sigma > 0:
            angle += em.turn_sigma * rng.standard_normal()
        p = rotate_in_place(p, prim.direction.sign * angle)
        events.append(Turned(prim.direction, angle))
        poses.append(p)
    return SimTrace(tuple(poses), tuple(events), RNG_ALGORITHM)


@dataclass(frozen=True)
class TurnStats:
    index: int
    count: int
    mean: float
    sd: float


@dataclass(frozen=True)
class MonteCarloSummary:
    runs: int
    failures: int
    failure_rate: float
    pose_stats_defined: bool
    mean_terminal: Optional[Pose]
    position_rmse: float
    heading_mean: float
    heading_sd: float
    nominal_terminal: Pose
    per_turn: tuple
    rng: str = RNG_ALGORITHM


def _mean_sd(values: List[float]):
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / n
    return mean, math.sqrt(var)


def monte_carlo(plan: Plan, start: Pose, em: ErrorModel, runs: int) -> MonteCarloSummary:
    """Run ``execute_noisy`` with seeds ``em.seed + k`` and aggregate.

    Position error is measured against the noise-free terminal pose. Headings
    are averaged as signed offsets from the nominal heading, so results do not
    depend on where the wrap at 0/2π falls. Failed runs only count toward the
    failure rate.
    """
    if int(runs) != runs or runs < 1:
        raise DomainError(f"runs must be an integer >= 1, got {runs!r}")
    nominal = execute(plan, start).terminal
    xs, ys, offsets, sq_err = [], [], [], []
    per_turn: List[List[float]] = []
    failures = 0
    for k in range(runs):
        trace = execute_noisy(plan, start, replace(em, seed=(em.seed + k) % 2**64))
        for idx, angle in enumerate(trace.turn_angles):
            if idx == len(per_turn):
                per_turn.append([])
            per_turn[idx].append(angle)
        if trace.failed:
            failures += 1
            continue
        t = trace.terminal
        xs.append(t.x)
        ys.append(t.y)
        offsets.append(normalize_signed(t.heading - nominal.heading))
        sq_err.append((t.x - nominal.x) ** 2 + (t.y - nominal.y) ** 2)

    turn_stats = tuple(TurnStats(i + 1, len(v), *_mean_sd(v)) for i, v in enumerate(per_turn))
    if not xs:
        nan = float("nan")
        return MonteCarloSummary(runs, failures, 1.0, False, None, nan, nan, nan, nominal, turn_stats)
    off_mean, off_sd = _mean_sd(offsets)
    heading_mean = nominal.heading + off_mean
    n = len(xs)
    mean_pose = Pose(math.fsum(xs) / n, math.fsum(ys) / n, heading_mean)
    return MonteCarloSummary(
        runs=runs,
        failures=failures,
        failure_rate=failures / runs,
        pose_stats_defined=True,
        mean_terminal=mean_pose,
        position_rmse=math.sqrt(math.fsum(sq_err) / n),
        heading_mean=mean_pose.heading,
        heading_sd=off_sd,
        nominal_terminal=nominal,
        per_turn=turn_stats,
    )
