"""The billiard/Grover dictionary and lockstep verification of it.

A qudit of dimension ``d`` with ``n`` marked items corresponds to ``d`` unit
billiards: the ``n`` marked ones glued into the light ball (mass ``n``), the
other ``d - n`` glued into the heavy ball.  Velocities map to amplitudes one
for one, the wall collision to the oracle and the ball-ball collision to the
diffusion operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import billiards, grover
from .analytic import count_collisions_analytic
from .billiards import BilliardState, Event, Start
from .grover import GroverState

FLOAT_TOLERANCE = 1e-10
_GLUE_RTOL = 1e-12


class NonIntegerMass(ValueError):
    pass


class GlueViolation(ValueError):
    pass


class MismatchAt(AssertionError):
    def __init__(self, step: int, billiard_side, grover_side, reason: str = "state mismatch"):
        self.step = step
        self.billiard_side = billiard_side
        self.grover_side = grover_side
        super().__init__(f"{reason} at half-step {step}")


@dataclass
class DualityReport:
    d: int
    n: int = 1
    steps_checked: int = 0
    exact_match: bool = False
    max_float_deviation: float = 0.0
    collision_count: int = 0
    query_count: int = 0
    accounting: dict = field(default_factory=lambda: {"counting_factor": 2, "stopping_factor": 2})
    residual: Optional[int] = None
    terminated: bool = False
    final_state: Optional[tuple] = None


def _group_size(mass: Fraction, what: str) -> int:
    if mass.denominator != 1 or mass < 1:
        raise NonIntegerMass(f"{what} mass {mass} is not a positive integer")
    return int(mass)


def billiard_to_state(s: BilliardState, d: int, marked=None) -> GroverState:
    """Unglue: heavy-ball velocity on unmarked slots, light-ball velocity on marked ones."""
    n = _group_size(s.m, "light")
    heavy = _group_size(s.M, "heavy")
    if heavy + n != d:
        raise NonIntegerMass(f"masses M={s.M}, m={s.m} do not split d={d} unit billiards")
    marked = grover.default_marked(d, n) if marked is None else frozenset(marked)
    if len(marked) != n:
        raise NonIntegerMass(f"light mass {n} but {len(marked)} marked indices")
    return GroverState(tuple(s.v if i in marked else s.V for i in range(d)), marked)


def state_to_billiard(g: GroverState) -> BilliardState:
    """Glue the marked and unmarked amplitudes back into two balls."""
    marked_vals = [g.amplitudes[i] for i in sorted(g.marked)]
    other_vals = [a for i, a in enumerate(g.amplitudes) if i not in g.marked]
    for group in (marked_vals, other_vals):
        first = group[0]
        if g.exact:
            ok = all(a == first for a in group)
        else:
            ok = bool(np.allclose(group, first, rtol=_GLUE_RTOL, atol=0.0))
        if not ok:
            raise GlueViolation("amplitudes within a glued group differ")
    V, v = other_vals[0], marked_vals[0]
    if not g.exact:
        V, v = Fraction(float(V)), Fraction(float(v))
    return BilliardState(g.d - g.n, g.n, V, v)


_DUAL = {Event.WALL: grover.apply_oracle, Event.BALLS: grover.apply_diffusion}
_SCHEDULE = (Event.WALL, Event.BALLS)


def _compare_float(b: BilliardState, g: GroverState, d: int) -> float:
    ref = billiard_to_state(b, d, g.marked).as_floats()
    ref = ref / np.linalg.norm(ref)
    return float(np.max(np.abs(ref - g.as_floats())))


def verify_trace_equivalence(
    d: int,
    n: int = 1,
    steps: Optional[int] = None,
    *,
    exact: bool = True,
    on_step: Optional[Callable[[int, Event, BilliardState, GroverState], None]] = None,
) -> DualityReport:
    """Advance both engines in lockstep from the uniform start and compare.

    With ``steps=None`` the run continues until the billiards physically stop,
    and the physically forced event at each half-step must be the one the
    Grover schedule (oracle, diffusion, oracle, ...) prescribes.  With an
    explicit ``steps`` exactly ``2*steps`` half-steps are applied as pure
    operators.  ``on_step`` is called after every verified half-step.
    """
    if steps is not None and steps < 1:
        raise ValueError("steps must be >= 1")
    b = billiards.initial_state(d - n, n, Start.GROVER)
    g = grover.make_uniform(d, grover.default_marked(d, n), exact=exact)
    report = DualityReport(d=d, n=n)
    limit = None if steps is None else 2 * steps
    half = 0
    while limit is None or half < limit:
        expected = _SCHEDULE[half % 2]
        if limit is None:
            kind = billiards.next_event(b)
            if kind is Event.TERMINATED:
                break
            if kind is not expected:
                reason = f"billiards chose {kind.value}, schedule wants {expected.value}"
                raise MismatchAt(half + 1, b, g, reason)
        half += 1
        b = billiards.collide_wall(b) if expected is Event.WALL else billiards.collide_balls(b)
        g = _DUAL[expected](g)
        report.collision_count += 1
        report.query_count += expected is Event.WALL
        if exact:
            if billiard_to_state(b, d, g.marked) != g:
                raise MismatchAt(half, b, g)
        else:
            dev = _compare_float(b, g, d)
            report.max_float_deviation = max(report.max_float_deviation, dev)
            if dev > FLOAT_TOLERANCE:
                raise MismatchAt(half, b, g, f"float deviation {dev:.3g}")
        if on_step is not None:
            on_step(half, expected, b, g)
    if limit is None:
        report.terminated = True
    else:
        report.terminated = billiards.next_event(b) is Event.TERMINATED
    report.steps_checked = half
    report.exact_match = exact
    report.final_state = tuple(g.amplitudes)
    return report


def factor_of_four_report(N: int, direct_limit: int = 3) -> DualityReport:
    """Collisions for M = 100**N against Grover queries for d = M + 1.

    The billiard run is simulated exactly for ``N <= direct_limit`` and counted
    analytically beyond that.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    M = 100**N
    if N <= direct_limit:
        collisions = billiards.count_collisions_direct(M, 1, Start.GALPERIN)
    else:
        collisions = count_collisions_analytic(M, 1).count
    queries = grover.optimal_iterations(M + 1, 1).iterations
    return DualityReport(
        d=M + 1,
        collision_count=collisions,
        query_count=queries,
        residual=collisions - 4 * queries,
        terminated=True,
    )
