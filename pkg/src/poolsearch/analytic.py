"""Collision counts from the rotation angle, certified by interval arithmetic.

Starting with the light ball at rest, each collision advances the state by
one step of ``theta_bar = atan(sqrt(m/M))`` around the energy circle, and the
balls stop once half a turn is used up.  The count is therefore the largest
``k`` with ``k * theta_bar < pi``, i.e. ``floor(pi / theta_bar)`` unless that
quotient is an integer, in which case the last contact is a graze and the
count is one less.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from . import billiards
from .billiards import Start
from .numerics import (
    DEFAULT_PRECISION_CAP,
    IntervalReal,
    RationalLike,
    arctan_interval,
    certify_floor,
    pi_interval,
    sqrt_interval,
    to_rational,
)

# m/M ratios for which pi/theta_bar is an integer q.  By Niven's theorem
# cos(2 theta_bar) = (M - m)/(M + m) is rational at a rational multiple of pi
# only for the values 0, +-1/2, so these three are the only grazing cases.
_GRAZING = {Fraction(1, 3): 6, Fraction(1): 4, Fraction(3): 3}


class Method(str, enum.Enum):
    DIRECT = "direct"
    ANALYTIC = "analytic"
    BOTH = "both"


class Disagreement(AssertionError):
    def __init__(self, M, m, direct: int, analytic: int):
        self.M, self.m, self.direct, self.analytic = M, m, direct, analytic
        super().__init__(f"M={M}, m={m}: direct {direct} != analytic {analytic}")


@dataclass(frozen=True)
class CountCertificate:
    M: Fraction
    count: int
    certifying_precision_bits: int
    method: Method
    agreement: Optional[bool] = None
    m: Fraction = Fraction(1)

    @property
    def valid(self) -> bool:
        return self.method is not Method.BOTH or bool(self.agreement)


def count_collisions_analytic(
    M: RationalLike, m: RationalLike = 1, precision_cap: int = DEFAULT_PRECISION_CAP
) -> CountCertificate:
    """Galperin-start collision count, proven by separating pi/theta_bar from integers."""
    M, m = to_rational(M), to_rational(m)
    if M <= 0 or m <= 0:
        raise ValueError("masses must be positive")
    ratio = m / M
    if ratio in _GRAZING:
        return CountCertificate(M, _GRAZING[ratio] - 1, 0, Method.ANALYTIC, m=m)

    def step_angle(bits: int) -> IntervalReal:
        return arctan_interval(sqrt_interval(IntervalReal.from_rational(ratio, bits)))

    count, bits = certify_floor(pi_interval, step_angle, precision_cap)
    return CountCertificate(M, count, bits, Method.ANALYTIC, m=m)


def count_collisions(
    M: RationalLike,
    m: RationalLike = 1,
    method: Method | str = Method.BOTH,
    precision_cap: int = DEFAULT_PRECISION_CAP,
    max_events: int = billiards.DEFAULT_MAX_EVENTS,
) -> CountCertificate:
    method = Method(method)
    M, m = to_rational(M), to_rational(m)
    if method is Method.DIRECT:
        count = billiards.count_collisions_direct(M, m, Start.GALPERIN, max_events)
        return CountCertificate(M, count, 0, Method.DIRECT, m=m)
    cert = count_collisions_analytic(M, m, precision_cap)
    if method is Method.ANALYTIC:
        return cert
    direct = billiards.count_collisions_direct(M, m, Start.GALPERIN, max_events)
    return CountCertificate(
        M, cert.count, cert.certifying_precision_bits, Method.BOTH, direct == cert.count, m=m
    )


def pi_digits_via_collisions(N: int, precision_cap: int = DEFAULT_PRECISION_CAP) -> str:
    """The first N+1 decimal digits of pi, read off the collision count at M = 100**N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return str(count_collisions_analytic(100**N, 1, precision_cap).count)


def default_sweep(M_max_direct: int, samples: int = 20, seed: int = 0) -> list[Fraction]:
    """Powers of 100, a few small integers and random rationals, all <= M_max_direct."""
    rng = random.Random(seed)
    masses = {Fraction(100**k) for k in range(0, 10) if 100**k <= M_max_direct}
    masses |= {Fraction(k) for k in (2, 3, 5, 10) if k <= M_max_direct}
    upper = min(M_max_direct, 10**4)
    while len(masses) < samples + 4:
        q = rng.randint(1, 50)
        masses.add(Fraction(rng.randint(1, int(upper * q)), q))
    return sorted(masses)


def cross_check(
    M_max_direct: RationalLike,
    masses: Optional[Iterable[RationalLike]] = None,
    m: RationalLike = 1,
    precision_cap: int = DEFAULT_PRECISION_CAP,
) -> list[CountCertificate]:
    """Run both counters over a sweep and insist they agree."""
    M_max_direct = to_rational(M_max_direct)
    if M_max_direct < 1:
        raise ValueError("M_max_direct must be >= 1")
    sweep = default_sweep(int(M_max_direct)) if masses is None else [to_rational(x) for x in masses]
    certs = []
    for M in sweep:
        if M > M_max_direct:
            continue
        analytic = count_collisions_analytic(M, m, precision_cap)
        direct = billiards.count_collisions_direct(M, m, Start.GALPERIN)
        if direct != analytic.count:
            raise Disagreement(M, m, direct, analytic.count)
        certs.append(
            CountCertificate(
                M, direct, analytic.certifying_precision_bits, Method.BOTH, True, m=to_rational(m)
            )
        )
    return certs
