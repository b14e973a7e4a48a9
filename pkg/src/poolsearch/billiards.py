"""Exact event-driven simulation of a heavy ball, a light ball and a wall.

The balls move on a line; the wall sits to the right of the light ball and
positive velocity means "toward the wall".  Positions never matter for the
collision *sequence*: ``V > v`` forces a ball-ball collision next, otherwise a
light ball moving right must hit the wall, otherwise nothing ever happens
again.  :func:`reference_position_sim` tracks positions and times explicitly
and is kept as an independent check of that shortcut.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .numerics import RationalLike, to_rational

DEFAULT_MAX_EVENTS = 10**8


class Event(str, enum.Enum):
    WALL = "wall"
    BALLS = "balls"
    TERMINATED = "terminated"


class Start(str, enum.Enum):
    GALPERIN = "galperin"  # light ball at rest
    GROVER = "grover"  # both balls share one velocity


class MaxEventsExceeded(RuntimeError):
    def __init__(self, trace: "Trace"):
        self.trace = trace
        super().__init__(f"no termination after {len(trace.events)} events")


class SimultaneousCollision(RuntimeError):
    pass


@dataclass(frozen=True)
class BilliardState:
    """Masses and velocities; ``M`` is the heavy ball, ``m`` the light one."""

    M: Fraction
    m: Fraction
    V: Fraction
    v: Fraction

    def __post_init__(self):
        for name in ("M", "m", "V", "v"):
            value = getattr(self, name)
            if type(value) is not Fraction:
                object.__setattr__(self, name, to_rational(value))
        if self.M <= 0 or self.m <= 0:
            raise ValueError("masses must be positive")

    @property
    def energy(self) -> Fraction:
        return (self.M * self.V**2 + self.m * self.v**2) / 2

    @property
    def momentum(self) -> Fraction:
        return self.M * self.V + self.m * self.v

    @property
    def heavy_momentum(self) -> Fraction:
        return self.M * self.V

    @property
    def theta(self) -> float:
        """Angle on the energy circle: sqrt(M) V = r cos(theta), sqrt(m) v = r sin(theta)."""
        return math.atan2(math.sqrt(self.m) * float(self.v), math.sqrt(self.M) * float(self.V))

    def floats(self) -> tuple[float, float]:
        return float(self.V), float(self.v)


@dataclass(frozen=True)
class TraceEvent:
    index: int
    kind: Event
    state: BilliardState
    velocities: tuple[float, float]
    theta: float
    time: Optional[Fraction] = None


@dataclass
class Trace:
    initial: BilliardState
    start: Start
    events: list[TraceEvent] = field(default_factory=list)
    terminated: bool = False

    @property
    def kinds(self) -> list[Event]:
        return [e.kind for e in self.events]

    @property
    def final(self) -> BilliardState:
        return self.events[-1].state if self.events else self.initial

    def __len__(self):
        return len(self.events)

    def _append(self, kind: Event, state: BilliardState, time: Optional[Fraction] = None):
        self.events.append(
            TraceEvent(len(self.events) + 1, kind, state, state.floats(), state.theta, time)
        )


def collide_wall(s: BilliardState) -> BilliardState:
    return BilliardState(s.M, s.m, s.V, -s.v)


def collide_balls(s: BilliardState) -> BilliardState:
    """Elastic collision: the solution of momentum and energy conservation."""
    M, m, V, v = s.M, s.m, s.V, s.v
    total = M + m
    return BilliardState(
        M,
        m,
        ((M - m) * V + 2 * m * v) / total,
        ((m - M) * v + 2 * M * V) / total,
    )


def next_event(s: BilliardState) -> Event:
    if s.V > s.v:
        return Event.BALLS
    if s.v > 0:
        return Event.WALL
    return Event.TERMINATED


_COLLIDE = {Event.WALL: collide_wall, Event.BALLS: collide_balls}


def initial_state(M: RationalLike, m: RationalLike, start: Start | str) -> BilliardState:
    start = Start(start)
    return BilliardState(M, m, 1, 0 if start is Start.GALPERIN else 1)


def run(
    M: RationalLike,
    m: RationalLike = 1,
    start: Start | str = Start.GALPERIN,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> Trace:
    """Collide until no further collision is possible."""
    if max_events < 1:
        raise ValueError("max_events must be >= 1")
    state = initial_state(M, m, start)
    trace = Trace(state, Start(start))
    while True:
        kind = next_event(state)
        if kind is Event.TERMINATED:
            trace.terminated = True
            return trace
        if len(trace.events) >= max_events:
            raise MaxEventsExceeded(trace)
        state = _COLLIDE[kind](state)
        trace._append(kind, state)


def count_collisions_direct(
    M: RationalLike,
    m: RationalLike = 1,
    start: Start | str = Start.GALPERIN,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> int:
    return len(run(M, m, start, max_events))


def reference_position_sim(
    M: RationalLike,
    m: RationalLike,
    x_heavy: RationalLike,
    x_light: RationalLike,
    wall_x: RationalLike,
    start: Start | str = Start.GALPERIN,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> Trace:
    """Kinematic simulation with exact positions and collision times.

    Point particles; the ball-ball update is done in the centre-of-mass frame
    (both velocities reflect through the COM velocity), deliberately not
    reusing :func:`collide_balls`.
    """
    x_heavy, x_light, wall_x = map(to_rational, (x_heavy, x_light, wall_x))
    if not x_heavy < x_light < wall_x:
        raise ValueError("need x_heavy < x_light < wall_x")
    state = initial_state(M, m, start)
    trace = Trace(state, Start(start))
    Mf, mf, V, v = state.M, state.m, state.V, state.v
    t = Fraction(0)
    while True:
        t_balls = (x_light - x_heavy) / (V - v) if V > v else None
        t_wall = (wall_x - x_light) / v if v > 0 else None
        if t_balls is None and t_wall is None:
            trace.terminated = True
            return trace
        if len(trace.events) >= max_events:
            raise MaxEventsExceeded(trace)
        if t_balls is not None and t_wall is not None and t_balls == t_wall:
            raise SimultaneousCollision(f"ball and wall contact coincide at t={t + t_wall}")
        if t_wall is None or (t_balls is not None and t_balls < t_wall):
            dt, kind = t_balls, Event.BALLS
        else:
            dt, kind = t_wall, Event.WALL
        t += dt
        x_heavy += V * dt
        x_light += v * dt
        if kind is Event.BALLS:
            u = (Mf * V + mf * v) / (Mf + mf)
            V, v = 2 * u - V, 2 * u - v
        else:
            v = -v
        trace._append(kind, BilliardState(Mf, mf, V, v), t)
