"""Exact-vs-float scalar helpers.

Coefficients throughout the package are either ``fractions.Fraction``
(exact, used for every catalogue table built from rational data) or
``float`` (tables involving irrational parameters such as sqrt(2)).
Mixed arithmetic follows Python's own promotion rules: Fraction op float
yields float, so exactness degrades only when an inexact value enters.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[Fraction, float]

#: comparison tolerance for tables that contain float entries
FLOAT_TOL = 1e-12


def parse_number(value) -> Number:
    """Parse a declarative-format entry into a Fraction or float.

    Accepts Fraction/int (exact), float (inexact), and strings: "p/q" and
    plain integers become Fractions, anything with a decimal point or
    exponent becomes a float.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numeric entries")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            return Fraction(text)
        if any(ch in text for ch in ".eE"):
            return float(text)
        return Fraction(int(text))
    raise TypeError(f"cannot interpret {value!r} as a coefficient")


def format_number(x: Number) -> str:
    """Render a coefficient losslessly: "p/q" or "n" for exact, repr for float."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def is_exact(x: Number) -> bool:
    return isinstance(x, (Fraction, int))


def all_exact(values) -> bool:
    return all(is_exact(v) for v in values)


def numbers_equal(x: Number, y: Number, tol: float = FLOAT_TOL) -> bool:
    """Exact equality when both sides are exact, |x-y| <= tol otherwise."""
    if is_exact(x) and is_exact(y):
        return x == y
    return abs(float(x) - float(y)) <= tol
