"""Tolerances and the exact/float arithmetic switch shared by every module."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

Number = Union[Fraction, float, int]

EPS_TOL = 1e-9
EPS_NORM = 1e-12
EPS_AXIS = 1e-9
EPS_DET = 1e-6


class DimensionError(ValueError):
    """An event, function or partition does not live on the expected space."""


class PreconditionError(ValueError):
    """An operation was called outside its domain."""

    def __init__(self, message: str, condition: str | None = None):
        super().__init__(message)
        self.condition = condition


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def all_exact(xs: Iterable) -> bool:
    return all(is_exact(x) for x in xs)


def close(a: Number, b: Number, tol: float = EPS_TOL) -> bool:
    """Equality test: exact when both sides are rational, else absolute tolerance."""
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(float(a) - float(b)) <= tol


def exceeds(a: Number, bound: Number, tol: float = EPS_TOL) -> bool:
    """True iff ``a > bound`` (exact) or ``a > bound + tol`` (float)."""
    if is_exact(a) and is_exact(bound):
        return a > bound
    return float(a) > float(bound) + tol


def parse_number(value, mode: str = "exact") -> Number:
    """Parse ``"p/q"``, decimal strings, ints or floats into the requested mode.

    Floats are converted through their shortest repr, so ``0.3`` becomes
    ``3/10`` in exact mode rather than the binary expansion.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, (int, Fraction)):
        x = Fraction(value)
    elif isinstance(value, float):
        x = Fraction(repr(value))
    elif isinstance(value, str):
        try:
            x = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a number: {value!r}") from exc
    else:
        raise ValueError(f"not a number: {value!r}")
    if mode == "exact":
        return x
    if mode == "float":
        return float(x)
    raise ValueError(f"unknown arithmetic mode {mode!r}")


def convert(x: Number, mode: str) -> Number:
    if mode == "exact":
        return x if isinstance(x, Fraction) else parse_number(x, "exact")
    if mode == "float":
        return float(x)
    raise ValueError(f"unknown arithmetic mode {mode!r}")


def format_number(x: Number) -> str:
    """Canonical text form: ``p/q`` for rationals, ``repr`` for floats."""
    if is_exact(x):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def jsonable(x: Number):
    return format_number(x) if is_exact(x) else float(x)
