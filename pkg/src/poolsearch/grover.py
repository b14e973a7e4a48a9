"""Real-amplitude state-vector simulation of Grover search.

Two arithmetic modes share one API:

* float mode: a unit-norm ``numpy`` vector, fast for large ``d``;
* exact mode: a tuple of :class:`~fractions.Fraction`, started unscaled from
  the all-ones vector (norm ``d``) so that every amplitude stays rational.

Indices are 0-based; by default the marked set is the last ``n`` indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, NamedTuple, Optional, Union

import numpy as np

from .numerics import (
    DEFAULT_PRECISION_CAP,
    IntervalReal,
    arctan_interval,
    floor_of_quotient,
    pi_interval,
    sqrt_interval,
)

Amplitudes = Union[np.ndarray, tuple]

_ZERO_NORM = 1e-300


class ZeroState(ValueError):
    pass


def default_marked(d: int, n: int = 1) -> frozenset[int]:
    return frozenset(range(d - n, d))


def _check_marked(d: int, marked: Iterable[int]) -> frozenset[int]:
    marked = frozenset(marked)
    if not marked or len(marked) >= d:
        raise ValueError(f"need 1 <= n < d marked items, got n={len(marked)} for d={d}")
    if min(marked) < 0 or max(marked) >= d:
        raise ValueError(f"marked indices must lie in [0, {d})")
    return marked


@dataclass(frozen=True)
class GroverState:
    amplitudes: Amplitudes
    marked: frozenset[int]

    def __post_init__(self):
        amps = self.amplitudes
        if isinstance(amps, np.ndarray):
            amps = np.array(amps, dtype=float)
            amps.flags.writeable = False
        elif not (isinstance(amps, tuple) and all(type(a) is Fraction for a in amps)):
            amps = tuple(Fraction(a) for a in amps)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "marked", _check_marked(len(amps), self.marked))

    @property
    def d(self) -> int:
        return len(self.amplitudes)

    @property
    def n(self) -> int:
        return len(self.marked)

    @property
    def exact(self) -> bool:
        return not isinstance(self.amplitudes, np.ndarray)

    @property
    def norm_squared(self):
        if self.exact:
            return sum(a * a for a in self.amplitudes)
        return float(self.amplitudes @ self.amplitudes)

    def as_floats(self) -> np.ndarray:
        if self.exact:
            return np.array([float(a) for a in self.amplitudes])
        return np.asarray(self.amplitudes)

    def _replace(self, amplitudes) -> "GroverState":
        return GroverState(amplitudes, self.marked)


class CircleBasis(NamedTuple):
    s: np.ndarray
    s_bar: np.ndarray
    w: np.ndarray
    w_bar: np.ndarray


class CircleCoords(NamedTuple):
    theta: float
    off_circle_residual: float


class IterationPlan(NamedTuple):
    iterations: int  # closest integer to (pi/2 - theta_bar) / (2 theta_bar)
    closed_form: int  # floor(pi/4 * sqrt((d-n)/n))
    agree: bool


def make_uniform(
    d: int, marked: Optional[Iterable[int]] = None, *, exact: bool = False
) -> GroverState:
    """The even superposition: unit norm in float mode, all ones in exact mode."""
    if d < 2:
        raise ValueError("d must be >= 2")
    marked = default_marked(d) if marked is None else marked
    if exact:
        return GroverState((Fraction(1),) * d, marked)
    return GroverState(np.full(d, 1 / math.sqrt(d)), marked)


def basis_states(d: int, marked: Iterable[int]) -> CircleBasis:
    """Unit vectors |s>, |s_bar>, |w>, |w_bar> spanning the search plane."""
    marked = _check_marked(d, marked)
    n = len(marked)
    mask = np.zeros(d, dtype=bool)
    mask[list(marked)] = True
    s = np.full(d, 1 / math.sqrt(d))
    w = np.where(mask, 1 / math.sqrt(n), 0.0)
    s_bar = np.where(mask, 0.0, 1 / math.sqrt(d - n))
    # zero total "momentum": orthogonal to |s> inside the plane
    w_bar = math.sqrt((d - n) / d) * w - math.sqrt(n / d) * s_bar
    return CircleBasis(s, s_bar, w, w_bar)


def apply_oracle(state: GroverState) -> GroverState:
    """Flip the sign of every marked amplitude."""
    if state.exact:
        amps = tuple(-a if i in state.marked else a for i, a in enumerate(state.amplitudes))
        return state._replace(amps)
    amps = np.array(state.amplitudes)
    amps[list(state.marked)] *= -1
    return state._replace(amps)


def _exact_diffusion(amps: tuple) -> tuple:
    d = len(amps)
    den = lcm(*{a.denominator for a in amps})
    nums = [a.numerator * (den // a.denominator) for a in amps]
    twice_total = 2 * sum(nums)
    scale = d * den
    cache: dict[int, Fraction] = {}
    out = []
    for num in nums:
        value = cache.get(num)
        if value is None:
            value = cache[num] = Fraction(twice_total - d * num, scale)
        out.append(value)
    return tuple(out)


def apply_diffusion(state: GroverState) -> GroverState:
    """Reflect about the uniform superposition: v_i -> 2 mean(v) - v_i."""
    if state.exact:
        return state._replace(_exact_diffusion(state.amplitudes))
    amps = state.amplitudes
    return state._replace(2 * amps.mean() - amps)


def grover_iterate(state: GroverState, k: int) -> GroverState:
    if k < 0:
        raise ValueError("k must be >= 0")
    for _ in range(k):
        state = apply_diffusion(apply_oracle(state))
    return state


def _check_dims(d: int, n: int):
    if not 1 <= n < d:
        raise ValueError(f"need 1 <= n < d, got d={d}, n={n}")


def theta_bar(d: int, n: int = 1) -> float:
    """Half the rotation angle of one iteration: sin(theta_bar) = sqrt(n/d)."""
    _check_dims(d, n)
    return math.asin(math.sqrt(n / d))


def _certified_floor(x: float, certify) -> int:
    """floor(x), trusting the float unless x is within 1e-9 (relative) of an integer."""
    k = math.floor(x)
    if min(x - k, k + 1 - x) > 1e-9 * max(1.0, abs(x)):
        return k
    return certify()


def optimal_iterations(d: int, n: int = 1, precision_cap: int = DEFAULT_PRECISION_CAP) -> IterationPlan:
    """Iterations that bring |s> closest to |w>, alongside the closed form.

    The closest integer (ties rounding up) to ``(pi/2 - tb) / (2 tb)`` is
    ``floor(pi / (4 tb))`` with ``tb = atan(sqrt(n/(d-n)))``; both floors are
    proven with interval arithmetic whenever the float estimate is near an
    integer.
    """
    _check_dims(d, n)
    ratio = Fraction(n, d - n)
    if ratio == 1:
        # tb = pi/4 exactly; (pi/2 - tb)/(2 tb) = 1/2 rounds up to 1
        iterations = 1
    else:
        iterations = _certified_floor(
            math.pi / (4 * math.atan(math.sqrt(n / (d - n)))),
            lambda: floor_of_quotient(
                pi_interval,
                lambda b: 4 * arctan_interval(sqrt_interval(IntervalReal.from_rational(ratio, b))),
                precision_cap,
            ),
        )
    closed_form = _certified_floor(
        math.pi / 4 * math.sqrt((d - n) / n),
        lambda: floor_of_quotient(
            lambda b: pi_interval(b) * sqrt_interval(IntervalReal.from_rational(1 / ratio, b)),
            lambda b: IntervalReal.from_rational(4, b),
            precision_cap,
        ),
    )
    return IterationPlan(iterations, closed_form, iterations == closed_form)


def success_probability(state: GroverState):
    """Probability of measuring a marked index (exact Fraction in exact mode)."""
    amps = state.amplitudes
    hit = sum(amps[i] * amps[i] for i in state.marked)
    total = state.norm_squared
    if state.exact:
        return hit / total
    return float(hit / total)


def angle_of(state: GroverState) -> CircleCoords:
    """Position on the |s_bar>, |w> circle; the residual is relative to the norm."""
    psi = state.as_floats()
    norm = float(np.linalg.norm(psi))
    if norm < _ZERO_NORM:
        raise ZeroState("state has zero norm")
    basis = basis_states(state.d, state.marked)
    c = float(basis.s_bar @ psi)
    s = float(basis.w @ psi)
    residual = psi - c * basis.s_bar - s * basis.w
    return CircleCoords(math.atan2(s, c), float(np.linalg.norm(residual)) / norm)


def operator_matrix(op, d: int, marked: Optional[Iterable[int]] = None, *, exact: bool = False):
    """Matrix of ``op`` in the standard basis (columns are images of basis vectors)."""
    marked = default_marked(d) if marked is None else frozenset(marked)
    columns = []
    for j in range(d):
        if exact:
            e = tuple(Fraction(int(i == j)) for i in range(d))
        else:
            e = np.eye(d)[j]
        columns.append(list(op(GroverState(e, marked)).amplitudes))
    rows = [list(r) for r in zip(*columns)]
    return rows if exact else np.array(rows, dtype=float)
