"""Outward-rounded rational intervals.

Endpoints are exact :class:`fractions.Fraction` values, so field operations on
intervals are exact and only square roots and rational powers introduce
(directed, dyadic) rounding.  All enclosures are sound: the returned interval
always contains the exact image of the operand intervals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from ..errors import (
    CertificationInconclusive,
    DivisionByIntervalContainingZero,
    NegativeBaseFractionalExponent,
    NegativeRadicand,
    ZeroToNegativePower,
)

Rat = Fraction
RatLike = Union[int, Fraction, str]

DEFAULT_PREC = 128
MAX_PREC = 4096


def as_rat(x: RatLike) -> Fraction:
    """Coerce an exact value to a Fraction.

    Strings accept ``"8"``, ``"16/3"`` and finite decimals such as ``"0.85"``
    (parsed exactly).  Floats are refused so that no binary rounding leaks into
    a certified computation.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {x!r}") from exc
    raise TypeError(f"expected int, Fraction or str, got {type(x).__name__}")


# -- exact integer roots ----------------------------------------------------

def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for integers n >= 0, k >= 1."""
    if n < 0:
        raise ValueError("iroot of a negative integer")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _exact_root(x: Fraction, k: int) -> Fraction | None:
    num, den = x.numerator, x.denominator
    a, b = iroot(num, k), iroot(den, k)
    if a ** k == num and b ** k == den:
        return Fraction(a, b)
    return None


def root_floor(x: Fraction, k: int, bits: int) -> Fraction:
    """Largest multiple of 2**-bits that is <= x ** (1/k) (x >= 0)."""
    exact = _exact_root(x, k)
    if exact is not None:
        return exact
    s = iroot((x.numerator << (k * bits)) // x.denominator, k)
    return Fraction(s, 1 << bits)


def root_ceil(x: Fraction, k: int, bits: int) -> Fraction:
    """Smallest multiple of 2**-bits that is >= x ** (1/k) (x >= 0)."""
    exact = _exact_root(x, k)
    if exact is not None:
        return exact
    scaled = x.numerator << (k * bits)
    s = iroot(scaled // x.denominator, k)
    if s ** k * x.denominator == scaled:
        return Fraction(s, 1 << bits)
    return Fraction(s + 1, 1 << bits)


# -- interval type ----------------------------------------------------------

def _coerce(x) -> "Interval":
    if isinstance(x, Interval):
        return x
    return Interval.point(x)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_rat(self.lo), as_rat(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: RatLike) -> "Interval":
        q = as_rat(x)
        return cls(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= as_rat(x) <= self.hi

    __contains__ = contains

    def __add__(self, other):
        o = _coerce(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = _coerce(other)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        o = _coerce(other)
        if self.is_point and o.is_point:
            return Interval.point(self.lo * o.lo)
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(c), max(c))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise DivisionByIntervalContainingZero(f"division by {self}")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return _coerce(other) * self.reciprocal()

    def __pow__(self, e: int):
        return iv_pow(self, e)

    def __float__(self) -> float:
        return float(self.mid)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


# -- operations -------------------------------------------------------------

def iv_arith(op: str, a: Interval, b: Interval) -> Interval:
    """Apply ``op`` in {"add", "sub", "mul", "div"} to two intervals."""
    try:
        fn = {
            "add": Interval.__add__,
            "sub": Interval.__sub__,
            "mul": Interval.__mul__,
            "div": Interval.__truediv__,
        }[op]
    except KeyError:
        raise ValueError(f"unknown interval operation {op!r}") from None
    return fn(_coerce(a), _coerce(b))


def iv_root(a: Interval, k: int, prec: int = DEFAULT_PREC) -> Interval:
    """Enclosure of the k-th root of a nonnegative interval.

    Each endpoint is rounded outward to a multiple of 2**-(prec+1), so the
    excess over the exact image is at most 2**-prec.
    """
    a = _coerce(a)
    if k < 1:
        raise ValueError("root order must be >= 1")
    if a.lo < 0:
        raise NegativeRadicand(f"root of interval with negative part {a}")
    if k == 1:
        return a
    bits = prec + 1
    return Interval(root_floor(a.lo, k, bits), root_ceil(a.hi, k, bits))


def iv_sqrt(a: Interval, prec: int = DEFAULT_PREC) -> Interval:
    return iv_root(a, 2, prec)


def _int_pow(a: Interval, e: int) -> Interval:
    if e == 0:
        return Interval.point(1)
    if e < 0:
        if a.lo <= 0 <= a.hi:
            raise ZeroToNegativePower(f"{a} ** {e}")
        return _int_pow(a, -e).reciprocal()
    if a.is_point:
        return Interval.point(a.lo ** e)
    lo_e, hi_e = a.lo ** e, a.hi ** e
    if e % 2 == 1 or a.lo >= 0:
        return Interval(lo_e, hi_e)
    if a.hi <= 0:
        return Interval(hi_e, lo_e)
    return Interval(0, max(lo_e, hi_e))


def iv_rpow(a: Interval, e: RatLike, prec: int = DEFAULT_PREC) -> Interval:
    """Enclosure of a ** e for a rational exponent e = u/v.

    Computed as the v-th root of the exact integer power a ** u.
    """
    a = _coerce(a)
    e = as_rat(e)
    u, v = e.numerator, e.denominator
    if v == 1:
        return _int_pow(a, u)
    if a.lo < 0:
        raise NegativeBaseFractionalExponent(f"{a} ** {e}")
    if u < 0:
        if a.lo == 0:
            raise ZeroToNegativePower(f"{a} ** {e}")
        return iv_root(_int_pow(a, -u), v, prec).reciprocal()
    return iv_root(_int_pow(a, u), v, prec)


def iv_pow(a: Interval, e: RatLike, prec: int = DEFAULT_PREC) -> Interval:
    """Integer or half-integer power of an interval."""
    e = as_rat(e)
    if e.denominator not in (1, 2):
        raise ValueError(f"iv_pow takes integer or half-integer exponents, got {e}")
    return iv_rpow(a, e, prec)


class Comparison(enum.Enum):
    LESS = "CertifiedLess"
    GREATER_EQ = "CertifiedGreaterEq"
    INCONCLUSIVE = "Inconclusive"


def certify_compare(a: Interval, threshold: RatLike) -> Comparison:
    t = as_rat(threshold)
    a = _coerce(a)
    if a.hi < t:
        return Comparison.LESS
    if a.lo >= t:
        return Comparison.GREATER_EQ
    return Comparison.INCONCLUSIVE


def refine_until(
    compute: Callable[[int], Interval],
    decided: Callable[[Interval], bool],
    prec: int = DEFAULT_PREC,
    max_prec: int = MAX_PREC,
) -> tuple[Interval, int]:
    """Re-evaluate ``compute(prec)`` with doubling precision until ``decided``.

    Returns the last enclosure and the precision used.  Raises
    CertificationInconclusive once ``max_prec`` is exhausted.
    """
    while True:
        iv = compute(prec)
        if decided(iv):
            return iv, prec
        if prec >= max_prec:
            raise CertificationInconclusive(
                f"undecided at {prec} bits: {float(iv.lo)!r}..{float(iv.hi)!r}"
            )
        prec = min(2 * prec, max_prec)


# -- mode-tagged scalar -----------------------------------------------------

class Mode(enum.Enum):
    FLOAT64 = "Float64"
    CERTIFIED = "Certified"

    @classmethod
    def parse(cls, m) -> "Mode":
        if isinstance(m, Mode):
            return m
        key = str(m).lower()
        for member in cls:
            if member.value.lower() == key or member.name.lower() == key:
                return member
        if key == "float":
            return cls.FLOAT64
        raise ValueError(f"unknown mode {m!r}")


@dataclass(frozen=True)
class Scalar:
    """A value in either float mode or certified-interval mode."""

    mode: Mode
    value: Union[float, Interval]

    @classmethod
    def of_float(cls, x: float) -> "Scalar":
        return cls(Mode.FLOAT64, float(x))

    @classmethod
    def of_interval(cls, iv: Interval) -> "Scalar":
        return cls(Mode.CERTIFIED, iv)

    @property
    def certified(self) -> bool:
        return self.mode is Mode.CERTIFIED

    @property
    def interval(self) -> Interval:
        if not self.certified:
            raise TypeError("float-mode scalar has no certified enclosure")
        return self.value

    @property
    def lo(self):
        return self.value.lo if self.certified else self.value

    @property
    def hi(self):
        return self.value.hi if self.certified else self.value

    def __float__(self) -> float:
        return float(self.value)
