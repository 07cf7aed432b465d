"""Helpers around :class:`fractions.Fraction`, the exact scalar backend."""

from fractions import Fraction
from math import floor

__all__ = ["Fraction", "Q", "qvec", "to_str", "frac", "is_integer"]


def Q(x):
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused on purpose: inputs must be bit exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def qvec(xs):
    return tuple(Q(x) for x in xs)


def to_str(x):
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def frac(x):
    """Fractional part in [0, 1)."""
    x = Q(x)
    return x - floor(x)


def is_integer(x):
    return Q(x).denominator == 1
