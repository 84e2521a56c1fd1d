"""Base-q digit expansions of exact rationals.

Every evaluation point is an exact :class:`fractions.Fraction`.  A point is
either built from its value (digits are produced by long division on demand)
or from an explicit finite prefix followed by a periodic tail block.  Both
routes describe rational numbers, so comparisons against atom locations are
always exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional, Sequence, Union

from .errors import Inconclusive, PrefixTooLong

DIGIT_CAP = 10**6

Rational = Union[Fraction, int, str]

TERMINATING = "terminating"
NON_TERMINATING = "non_terminating"


def as_fraction(x: Rational) -> Fraction:
    """Parse ``x`` into an exact rational; strings may be ``"p/q"`` or decimals."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not evaluation points")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        # floats are binary rationals; accept them exactly
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def is_base_q_fraction(x: Rational, q: int) -> Optional[int]:
    """Return the order of ``x`` as a base-q fraction, or ``None``.

    The order is the minimal ``n`` with ``q**n * x`` an integer; only points of
    the open interval (0, 1) qualify.
    """
    x = as_fraction(x)
    if x <= 0 or x >= 1:
        return None
    den = x.denominator
    d = den
    while d > 1:
        g = gcd(d, q)
        if g == 1:
            return None
        d //= g
    n, t = 0, 1
    while t % den:
        t *= q
        n += 1
    return n


def _terminating_digits(x: Fraction, q: int, order: int) -> tuple[int, ...]:
    num = x.numerator * q**order // x.denominator
    out = []
    for _ in range(order):
        num, d = divmod(num, q)
        out.append(d)
    return tuple(reversed(out))


def _value_of(prefix: Sequence[int], block: Sequence[int], q: int) -> Fraction:
    r = len(prefix)
    head = 0
    for d in prefix:
        head = head * q + d
    value = Fraction(head, q**r)
    b = 0
    for d in block:
        b = b * q + d
    return value + Fraction(b, (q ** len(block) - 1) * q**r)


@dataclass(frozen=True)
class DigitExpansion:
    """An infinite base-q digit stream with an exact rational value.

    ``block`` is the periodic tail that follows ``prefix``.  When ``block`` is
    ``None`` the digits are produced from ``value`` by long division (used for
    rationals whose period has not been computed).
    """

    base: int
    value: Fraction
    prefix: tuple[int, ...] = ()
    block: Optional[tuple[int, ...]] = None
    _periodic: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        q = self.base
        if q < 2:
            raise ValueError("base must be at least 2")
        if not 0 <= self.value <= 1:
            raise ValueError(f"value {self.value} outside [0, 1]")
        for d in itertools.chain(self.prefix, self.block or ()):
            if not 0 <= d < q:
                raise ValueError(f"digit {d} outside 0..{q - 1}")
        if self.block is not None and len(self.block) == 0:
            raise ValueError("periodic block must be non-empty")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rational(cls, x: Rational, q: int, form: str = NON_TERMINATING) -> "DigitExpansion":
        x = as_fraction(x)
        if not 0 <= x <= 1:
            raise ValueError(f"{x} is outside [0, 1]")
        if x == 0:
            return cls(q, x, (), (0,))
        if x == 1:
            return cls(q, x, (), (q - 1,))
        order = is_base_q_fraction(x, q)
        if order is not None:
            digits = _terminating_digits(x, q, order)
            if form == TERMINATING:
                return cls(q, x, digits, (0,))
            if form != NON_TERMINATING:
                raise ValueError(f"unknown form {form!r}")
            return cls(q, x, digits[:-1] + (digits[-1] - 1,), (q - 1,))
        return cls(q, x)

    @classmethod
    def from_prefix(cls, prefix: Sequence[int], q: int, tail="zeros") -> "DigitExpansion":
        """Digits ``prefix`` followed by ``tail``: ``"zeros"``, ``"max"`` or a block."""
        if tail == "zeros":
            block = (0,)
        elif tail == "max":
            block = (q - 1,)
        else:
            block = tuple(int(d) for d in tail)
        prefix = tuple(int(d) for d in prefix)
        return cls(q, _value_of(prefix, block, q), prefix, block)

    # -- digit access -------------------------------------------------------

    def __iter__(self) -> Iterator[int]:
        if self.block is not None:
            yield from self.prefix
            yield from itertools.cycle(self.block)
            return
        q = self.base
        num, den = self.value.numerator, self.value.denominator
        while True:
            num *= q
            d, num = divmod(num, den)
            yield d

    def digits(self, n: int, cap: int = DIGIT_CAP) -> tuple[int, ...]:
        if n > cap:
            raise PrefixTooLong(f"requested {n} digits, cap is {cap}")
        return tuple(itertools.islice(self, n))

    @property
    def order(self) -> Optional[int]:
        return is_base_q_fraction(self.value, self.base)

    def ends_in_zeros(self) -> bool:
        return self.block is not None and set(self.block) == {0}

    def constant_tail_start(self, digit: int) -> Optional[int]:
        """Index (0-based) from which every digit equals ``digit``, if known."""
        if self.block is None or set(self.block) != {digit}:
            return None
        n = len(self.prefix)
        while n > 0 and self.prefix[n - 1] == digit:
            n -= 1
        return n

    def periodic_form(self, cap: int = DIGIT_CAP) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Return ``(preperiod, period)`` digits; long division with cycle detection."""
        if self.block is not None:
            return self.prefix, self.block
        if "form" in self._periodic:
            return self._periodic["form"]
        q = self.base
        num, den = self.value.numerator, self.value.denominator
        seen: dict[int, int] = {}
        digits: list[int] = []
        while num not in seen:
            if len(digits) >= cap:
                raise Inconclusive(f"period of {self.value} in base {q} exceeds {cap} digits")
            seen[num] = len(digits)
            num *= q
            d, num = divmod(num, den)
            digits.append(d)
        start = seen[num]
        form = (tuple(digits[:start]), tuple(digits[start:]))
        self._periodic["form"] = form
        return form

    def non_terminating(self) -> "DigitExpansion":
        if self.order is None:
            return self
        return DigitExpansion.from_rational(self.value, self.base, NON_TERMINATING)

    def terminating(self) -> "DigitExpansion":
        if self.order is None:
            return self
        return DigitExpansion.from_rational(self.value, self.base, TERMINATING)

    def points(self, n: int) -> "PointConfiguration":
        if self.base != 2:
            raise ValueError("point configurations exist for base 2 only")
        return PointConfiguration.from_digits(self.digits(n))


def digits_of(x: Rational, q: int, form: str = NON_TERMINATING, n: int = 1) -> tuple[int, ...]:
    """First ``n`` base-q digits of ``x`` in the requested form."""
    return DigitExpansion.from_rational(x, q, form).digits(n)


def as_expansion(x, q: int) -> DigitExpansion:
    """Coerce an evaluation point to a :class:`DigitExpansion` in non-terminating form."""
    if isinstance(x, DigitExpansion):
        if x.base != q:
            raise ValueError(f"expansion is in base {x.base}, model uses base {q}")
        return x.non_terminating()
    return DigitExpansion.from_rational(x, q, NON_TERMINATING)


@dataclass(frozen=True)
class BaseQFraction:
    base: int
    order: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if len(self.digits) != self.order or self.order < 1:
            raise ValueError("digit count must equal a positive order")
        if self.digits[-1] == 0:
            raise ValueError("last digit of a base-q fraction must be nonzero")

    @property
    def value(self) -> Fraction:
        return _value_of(self.digits, (0,), self.base)

    @classmethod
    def from_value(cls, x: Rational, q: int) -> "BaseQFraction":
        x = as_fraction(x)
        order = is_base_q_fraction(x, q)
        if order is None:
            raise ValueError(f"{x} is not a base-{q} fraction")
        return cls(q, order, _terminating_digits(x, q, order))


def fraction_grid(q: int, order: int, include_endpoints: bool = False) -> list[Fraction]:
    """All base-q fractions of order at most ``order``, increasing."""
    den = q**order
    lo, hi = (0, den + 1) if include_endpoints else (1, den)
    return [Fraction(k, den) for k in range(lo, hi)]


@dataclass(frozen=True)
class PointConfiguration:
    """The set ``{n <= horizon : x_n = 1}`` of a binary digit prefix."""

    horizon: int
    points: tuple[int, ...]

    def __post_init__(self):
        pts = self.points
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("points must be strictly increasing")
        if pts and (pts[0] < 1 or pts[-1] > self.horizon):
            raise ValueError("points must lie in 1..horizon")

    @classmethod
    def from_digits(cls, digits: Sequence[int]) -> "PointConfiguration":
        return cls(len(digits), tuple(i + 1 for i, d in enumerate(digits) if d == 1))

    def to_digits(self) -> tuple[int, ...]:
        out = [0] * self.horizon
        for p in self.points:
            out[p - 1] = 1
        return tuple(out)

    def expansion(self, tail="zeros") -> DigitExpansion:
        return DigitExpansion.from_prefix(self.to_digits(), 2, tail)


@dataclass(frozen=True)
class PrefixStats:
    counts: tuple[int, ...]
    pattern_length: int
    patterns: dict
    switches: int

    def pattern(self, *digits: int) -> int:
        return self.patterns.get(tuple(digits), 0)


def prefix_stats(digits: Sequence[int], pattern_length: int = 1, q: Optional[int] = None) -> PrefixStats:
    """Digit counts, sliding-window pattern counts and the switch count of a prefix."""
    if pattern_length < 1:
        raise ValueError("pattern length must be at least 1")
    digits = tuple(digits)
    if q is None:
        q = max(2, max(digits, default=0) + 1)
    counts = [0] * q
    for d in digits:
        counts[d] += 1
    patterns = {p: 0 for p in itertools.product(range(q), repeat=pattern_length)}
    for i in range(len(digits) - pattern_length + 1):
        patterns[digits[i:i + pattern_length]] += 1
    switches = sum(1 for a, b in zip(digits, digits[1:]) if a != b)
    return PrefixStats(tuple(counts), pattern_length, patterns, switches)
