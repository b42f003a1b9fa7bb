"""Exact rational scalars.

Everything in the exact core of this package is a `fractions.Fraction`:
arbitrary precision, always canonical (gcd-reduced, positive denominator),
and compared by exact equality.  The helpers here add the [0,1] validation
used for probabilities and the "num/den" string form used in all JSON
interfaces.
"""
from __future__ import annotations

from fractions import Fraction

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions, or 'num/den' strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def as_unit(value) -> Fraction:
    """Coerce to a Fraction and require 0 <= value <= 1."""
    r = as_rational(value)
    if r < 0 or r > 1:
        raise ValueError(f"scalar {r} outside the unit interval [0, 1]")
    return r


def format_rational(r: Fraction) -> str:
    """'num/den' form, or plain 'num' when the denominator is 1."""
    return str(r)


def parse_rational(text: str) -> Fraction:
    """Inverse of format_rational; accepts 'num/den' and 'num'."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid rational literal {text!r}") from exc
