"""Exact rational time values.

Every time, budget, and test quantity in this package is a
:class:`fractions.Fraction`. The objects of interest here live exactly on
equality boundaries (a utilization condition equal to 1, a job finishing at
the very instant of its deadline), so arithmetic must be exact and floats
are rejected everywhere, including in JSON inputs.

Wire format: a rational literal is a decimal integer string like ``"6"`` or
a fraction string like ``"23/24"``. Plain JSON integers are accepted as a
convenience (they are exact); floats never are.
"""

from __future__ import annotations

import re
from fractions import Fraction

TimeValue = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_LITERAL_RE = re.compile(r"^[+-]?[0-9]+(?:/[0-9]+)?$")


class RationalParseError(ValueError):
    """A value could not be read as an exact rational literal."""


def parse_rational(value) -> Fraction:
    """Parse ``"6"``, ``"23/24"``, or an int into a Fraction.

    Floats (and float-looking strings such as ``"0.25"``) are rejected:
    they silently lose exactness.
    """
    if isinstance(value, bool):
        raise RationalParseError(f"expected a rational literal, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise RationalParseError(
            f"floats are not accepted (got {value!r}); "
            'write rationals as strings like "23/24"'
        )
    if not isinstance(value, str):
        raise RationalParseError(
            f"expected a rational literal, got {type(value).__name__}"
        )
    text = value.strip()
    if not _LITERAL_RE.match(text):
        raise RationalParseError(
            f"not a rational literal: {value!r} "
            '(use "p", "p/q", or a JSON integer; floats are not accepted)'
        )
    numerator, _, denominator = text.partition("/")
    if denominator:
        den = int(denominator)
        if den == 0:
            raise RationalParseError(f"zero denominator in {value!r}")
        return Fraction(int(numerator), den)
    return Fraction(int(numerator))


def render_rational(value: Fraction) -> str:
    """Render in lowest terms: ``"p/q"``, or ``"p"`` when q = 1."""
    return str(Fraction(value))
