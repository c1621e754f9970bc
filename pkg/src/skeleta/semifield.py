"""Exact arithmetic in the coefficient semifields B, Z_v and Q_v.

Values are tagged so that mixing semifields is an error rather than a silent
coercion. ``-inf`` is represented by a payload of ``None``.

>>> a, b = parse_value("3", "Int"), parse_value("-inf", "Int")
>>> join(a, b), plus(a, b)
(Int 3, Int -inf)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import NotIntegral, TagMismatch

TAGS = ("Bool", "Int", "Rat")


@dataclass(frozen=True, order=False)
class SemifieldValue:
    tag: str
    value: Optional[Fraction]  # None means -inf

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown semifield tag {self.tag!r}")
        if self.value is None:
            return
        v = Fraction(self.value)
        if self.tag == "Bool" and v != 0:
            raise ValueError("Bool payload must be 0 or -inf")
        if self.tag == "Int" and v.denominator != 1:
            raise ValueError("Int payload must be an integer")
        object.__setattr__(self, "value", v)

    @property
    def is_neg_inf(self) -> bool:
        return self.value is None

    def key(self):
        """Sort key: -inf first, then by payload."""
        return (0, 0) if self.value is None else (1, self.value)

    def __le__(self, other: SemifieldValue) -> bool:
        _check(self, other)
        return self.key() <= other.key()

    def __lt__(self, other: SemifieldValue) -> bool:
        _check(self, other)
        return self.key() < other.key()

    def __repr__(self):
        return f"{self.tag} {format_value(self)}"


def neg_inf(tag: str) -> SemifieldValue:
    return SemifieldValue(tag, None)


def zero(tag: str) -> SemifieldValue:
    return SemifieldValue(tag, Fraction(0))


def _check(a: SemifieldValue, b: SemifieldValue):
    if a.tag != b.tag:
        raise TagMismatch(f"{a.tag} vs {b.tag}", left=a.tag, right=b.tag)


def join(a: SemifieldValue, b: SemifieldValue) -> SemifieldValue:
    """Maximum, with -inf least."""
    _check(a, b)
    return a if a.key() >= b.key() else b


def plus(a: SemifieldValue, b: SemifieldValue) -> SemifieldValue:
    """Group addition of payloads; -inf absorbs."""
    _check(a, b)
    if a.value is None or b.value is None:
        return neg_inf(a.tag)
    return SemifieldValue(a.tag, a.value + b.value)


def inverse(a: SemifieldValue) -> SemifieldValue:
    if a.value is None:
        raise ValueError("-inf has no additive inverse")
    return SemifieldValue(a.tag, -a.value)


def reduce_to_bool(a: SemifieldValue) -> SemifieldValue:
    """The reduction map on integral elements: 0 stays 0, everything below collapses."""
    if a.value is None:
        return neg_inf("Bool")
    if a.value > 0:
        raise NotIntegral(f"{format_value(a)} > 0", value=format_value(a))
    return zero("Bool") if a.value == 0 else neg_inf("Bool")


def format_value(a: SemifieldValue) -> str:
    return "-inf" if a.value is None else str(a.value)


def parse_literal(text: str) -> Optional[Fraction]:
    """Parse ``-inf``, an integer or ``p/q``; returns None for -inf."""
    s = text.strip()
    if s in ("-inf", "−∞"):
        return None
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad semifield literal {text!r}") from None


def parse_value(text: str, tag: str = "Rat") -> SemifieldValue:
    return SemifieldValue(tag, parse_literal(text))
