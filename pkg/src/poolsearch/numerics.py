"""Exact rationals and certified interval evaluation of pi, arctan and sqrt.

All exact dynamics in this package run on :class:`fractions.Fraction`.
Real constants that cannot be represented exactly (pi, arctan, square roots)
are carried by :class:`IntervalReal`, a closed interval with dyadic endpoints.

Endpoint rounding uses a magnitude-relative grid: at precision ``p`` a value
in ``[2**e, 2**(e+1))`` is rounded onto multiples of ``2**(e-p)``, so the unit
roundoff is ``2**-p``.  Transcendental endpoints are *correctly* rounded in the
directed sense (the largest grid point below / smallest above the true value),
which makes refinement monotone: raising the precision can only shrink a
result.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Union

ExactRational = Fraction

RationalLike = Union[int, str, Fraction]

DEFAULT_PRECISION = 64
DEFAULT_PRECISION_CAP = 16384
START_PRECISION = 64

# Ziv loop: guard bits start here and double until the directed rounding is decided.
_GUARD_BITS = 32
_MAX_GUARD_BITS = 1 << 20


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


class AmbiguousFloor(ArithmeticError):
    """The quotient interval still straddles an integer at the precision cap."""

    def __init__(self, lo: Fraction, hi: Fraction, precision_bits: int):
        self.lo = lo
        self.hi = hi
        self.precision_bits = precision_bits
        super().__init__(
            f"floor undecided at {precision_bits} bits: quotient in "
            f"[{float(lo)!r}, {float(hi)!r}]"
        )


def to_rational(value: RationalLike) -> Fraction:
    """Parse ``value`` (int, Fraction, ``"p/q"`` or decimal string) exactly."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact input; pass a string")
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    """``"p/q"``, or ``"p"`` for integers; parses back with :func:`to_rational`."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def _exponent(x: Fraction) -> int:
    """floor(log2 |x|) for nonzero x."""
    a, b = abs(x.numerator), x.denominator
    e = a.bit_length() - b.bit_length()
    if e >= 0:
        if a < (b << e):
            e -= 1
    elif (a << -e) < b:
        e -= 1
    return e


def _scaled_floor(x: Fraction, shift: int) -> int:
    """floor(x * 2**shift)."""
    if shift >= 0:
        return (x.numerator << shift) // x.denominator
    return x.numerator // (x.denominator << -shift)


def _dyadic(n: int, exp: int) -> Fraction:
    return Fraction(n << exp) if exp >= 0 else Fraction(n, 1 << -exp)


def round_down(x: Fraction, precision_bits: int) -> Fraction:
    """Largest grid point <= x at the given precision."""
    if x == 0:
        return Fraction(0)
    g = _exponent(x) - precision_bits
    return _dyadic(_scaled_floor(x, -g), g)


def round_up(x: Fraction, precision_bits: int) -> Fraction:
    """Smallest grid point >= x at the given precision."""
    return -round_down(-x, precision_bits)


@dataclass(frozen=True)
class IntervalReal:
    """Closed real interval ``[lo, hi]`` with dyadic endpoints."""

    lo: Fraction
    hi: Fraction
    precision_bits: int = DEFAULT_PRECISION

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if not (_is_dyadic(lo) and _is_dyadic(hi)):
            raise DomainError("interval endpoints must be dyadic rationals")
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        if self.precision_bits < 1:
            raise DomainError("precision_bits must be positive")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def enclose(cls, lo: Fraction, hi: Fraction, precision_bits: int) -> "IntervalReal":
        """Round arbitrary rational bounds outward onto the dyadic grid."""
        return cls(round_down(lo, precision_bits), round_up(hi, precision_bits), precision_bits)

    @classmethod
    def from_rational(cls, q: RationalLike, precision_bits: int = DEFAULT_PRECISION) -> "IntervalReal":
        q = to_rational(q)
        return cls.enclose(q, q, precision_bits)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, IntervalReal):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def _coerce(self, other) -> "IntervalReal":
        if isinstance(other, IntervalReal):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return IntervalReal.from_rational(other, self.precision_bits)
        return NotImplemented

    def _wrap(self, other, lo, hi) -> "IntervalReal":
        return IntervalReal.enclose(lo, hi, max(self.precision_bits, other.precision_bits))

    def __neg__(self):
        return IntervalReal(-self.hi, -self.lo, self.precision_bits)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(other, self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(other, self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return self._wrap(other, min(p), max(p))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.excludes_zero():
            raise ZeroDivisionError("divisor interval contains zero")
        p = (self.lo / other.lo, self.lo / other.hi, self.hi / other.lo, self.hi / other.hi)
        return self._wrap(other, min(p), max(p))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __float__(self):
        return float(self.midpoint)

    def __repr__(self):
        return f"IntervalReal([{float(self.lo)!r}, {float(self.hi)!r}], {self.precision_bits} bits)"


# -- series kernels ---------------------------------------------------------


def _atan_fixed(x: Fraction, w: int) -> tuple[int, int]:
    """Return ``(s, err)`` with ``s <= atan(x) * 2**w <= s + err`` for 0 <= x <= 1.

    Euler's series atan(x) = sum_n (2n)!!/(2n+1)!! * y**n * x/(1+x^2) with
    y = x^2/(1+x^2) <= 1/2; all terms are positive.
    """
    a, b = x.numerator, x.denominator
    p, q = a * a, a * a + b * b
    t = ((a * b) << w) // q
    s = t
    n = 0
    while t:
        n += 1
        t = t * (2 * n) * p // ((2 * n + 1) * q)
        s += t
    # term n undershoots by <= n+1 units; the tail past the last term is
    # <= its exact value (y <= 1/2), itself <= n+1 units.
    return s, (n + 1) * (n + 2) // 2 + n + 1


def _pi_fixed(w: int) -> tuple[int, int]:
    """``(lo, hi)`` with lo <= pi * 2**w <= hi (Machin's formula)."""
    s5, e5 = _atan_fixed(Fraction(1, 5), w)
    s239, e239 = _atan_fixed(Fraction(1, 239), w)
    return 16 * s5 - 4 * (s239 + e239), 16 * (s5 + e5) - 4 * s239


def _pi_enclosure(w: int) -> tuple[Fraction, Fraction]:
    lo, hi = _pi_fixed(w)
    return Fraction(lo, 1 << w), Fraction(hi, 1 << w)


def _atan_enclosure(x: Fraction, w: int) -> tuple[Fraction, Fraction]:
    """Rational bounds on atan(x) with absolute error about 2**-w."""
    if x < 0:
        lo, hi = _atan_enclosure(-x, w)
        return -hi, -lo
    if x <= 1:
        s, err = _atan_fixed(x, w)
        return Fraction(s, 1 << w), Fraction(s + err, 1 << w)
    # atan(x) = pi/2 - atan(1/x)
    s, err = _atan_fixed(1 / x, w)
    plo, phi = _pi_fixed(w)
    return Fraction(plo - 2 * (s + err), 1 << (w + 1)), Fraction(phi - 2 * s, 1 << (w + 1))


def _directed(enclosure: Callable[[int], tuple[Fraction, Fraction]], precision_bits: int):
    """Correctly rounded (down, up) grid points around a non-dyadic real.

    ``enclosure(w)`` must bound the value with error shrinking in ``w``.
    """
    w = precision_bits + _GUARD_BITS
    while True:
        lo, hi = enclosure(w)
        down = round_down(lo, precision_bits)
        up = round_up(hi, precision_bits)
        decided = down == round_down(hi, precision_bits) and up == round_up(lo, precision_bits)
        if decided or w >= _MAX_GUARD_BITS:
            # undecided only if the value sits on the grid; the outward bounds stay valid
            return down, up
        w *= 2


# -- public operations ------------------------------------------------------


def pi_interval(precision_bits: int) -> IntervalReal:
    """Certified enclosure of pi, one grid step wide."""
    if precision_bits < 8:
        raise DomainError("pi_interval needs precision_bits >= 8")
    down, up = _directed(_pi_enclosure, precision_bits)
    return IntervalReal(down, up, precision_bits)


def _atan_point(x: Fraction, precision_bits: int) -> tuple[Fraction, Fraction]:
    if x == 0:
        return Fraction(0), Fraction(0)
    return _directed(lambda w: _atan_enclosure(x, w), precision_bits)


def arctan_interval(x: IntervalReal, precision_bits: int | None = None) -> IntervalReal:
    """Enclosure of ``{atan(t) : t in x}``; arctan is increasing, so endpoints suffice."""
    p = x.precision_bits if precision_bits is None else precision_bits
    lo, _ = _atan_point(x.lo, p)
    _, hi = _atan_point(x.hi, p)
    return IntervalReal(lo, hi, p)


def _sqrt_bounds(q: Fraction, precision_bits: int) -> tuple[Fraction, Fraction]:
    if q == 0:
        return Fraction(0), Fraction(0)
    g = _exponent(q) // 2 - precision_bits
    z_floor = _scaled_floor(q, -2 * g)
    z_ceil = -_scaled_floor(-q, -2 * g)
    return _dyadic(isqrt(z_floor), g), _dyadic(isqrt(z_ceil - 1) + 1, g)


def sqrt_interval(x: IntervalReal, precision_bits: int | None = None) -> IntervalReal:
    """Enclosure of ``{sqrt(t) : t in x}`` computed with exact integer square roots."""
    if x.lo < 0:
        raise DomainError(f"sqrt of interval with negative part: lo = {x.lo}")
    p = x.precision_bits if precision_bits is None else precision_bits
    lo, _ = _sqrt_bounds(x.lo, p)
    _, hi = _sqrt_bounds(x.hi, p)
    return IntervalReal(lo, hi, p)


IntervalExpr = Callable[[int], IntervalReal]


def certify_floor(
    numer: IntervalExpr,
    denom: IntervalExpr,
    precision_cap: int = DEFAULT_PRECISION_CAP,
    start_bits: int = START_PRECISION,
) -> tuple[int, int]:
    """Return ``(k, bits)`` where k = floor(numer/denom) is proven at ``bits``.

    The precision doubles from ``start_bits`` until the quotient interval lies
    strictly inside ``(k, k+1)``.
    """
    bits = min(start_bits, precision_cap)
    while True:
        n, d = numer(bits), denom(bits)
        if d.excludes_zero():
            corners = (n.lo / d.lo, n.lo / d.hi, n.hi / d.lo, n.hi / d.hi)
            qlo, qhi = min(corners), max(corners)
            k = qlo.numerator // qlo.denominator
            if k < qlo and qhi < k + 1:
                return k, bits
        else:
            qlo, qhi = Fraction(n.lo), Fraction(n.hi)
        if bits >= precision_cap:
            raise AmbiguousFloor(qlo, qhi, bits)
        bits = min(2 * bits, precision_cap)


def floor_of_quotient(
    numer: IntervalExpr,
    denom: IntervalExpr,
    precision_cap: int = DEFAULT_PRECISION_CAP,
) -> int:
    """The unique integer k with k < numer/denom < k+1, certified by intervals."""
    return certify_floor(numer, denom, precision_cap)[0]
