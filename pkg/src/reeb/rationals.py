"""Exact rational arithmetic helpers.

All function values and critical values in this package are
``fractions.Fraction`` instances so that comparisons, midpoints and
epsilon-shifts are exact. These helpers normalize user-facing inputs
(ints, strings like ``"3/4"`` or ``"-1.25"``) into ``Fraction`` and
format them back out in ``p/q`` text form.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction, or numeric string to an exact Fraction.

    Floats are rejected: they carry binary rounding error and silently
    break tie detection. Write ``Fraction(1, 3)`` or pass the string
    ``"1/3"`` instead.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"not a rational value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ParseError(f"not a rational value: {value!r}")


def parse_rational(token: str) -> Fraction:
    """Parse ``"7"``, ``"-3/4"`` or ``"2.5"`` into a Fraction."""
    token = token.strip()
    if not token:
        raise ParseError("empty rational token")
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational token {token!r}: {exc}") from None


def format_rational(value: Fraction) -> str:
    """Render a Fraction as ``p`` or ``p/q`` with no whitespace."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
