from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

INF = math.inf


def as_fraction(x) -> Fraction:
    """Exact rational for ``x``; floats convert to their exact binary value."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, dict):
        return Fraction(int(x["num"]), int(x.get("den", 1)))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def as_bound(x):
    """Like :func:`as_fraction` but lets ``math.inf`` through."""
    if isinstance(x, float) and math.isinf(x) and x > 0:
        return INF
    return as_fraction(x)


def log_fraction(r: Fraction) -> float:
    # math.log accepts arbitrarily large ints
    return math.log(r.numerator) - math.log(r.denominator)


def fraction_to_json(r: Fraction) -> dict:
    return {"num": r.numerator, "den": r.denominator}
